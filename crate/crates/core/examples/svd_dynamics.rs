//! Spin-vector dynamics next to the Schrödinger evolution: success
//! probabilities and how far apart the two states drift.

use phwo::problems::{make_problem, ProblemKind};
use phwo::schrodinger::{evolve, p_gs, EvolutionConfig};
use phwo::svd::{svd_evolve, svd_p_gs, svd_state_as_symstate};
use phwo::symspace::trace_distance;

fn main() -> phwo::error::Result<()> {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 512)?;
    for t_f in [5.0, 9.0, 10.0, 20.0] {
        println!("t_f = {t_f:>4}: QA {:.4}  SVD {:.4}", p_gs(&cf, t_f)?, svd_p_gs(&cf, t_f)?);
    }

    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let cfg = EvolutionConfig::new(10.0).with_samples(grid);
    let qa = evolve(&cf, &cfg)?;
    let svd = svd_evolve(&cf, &cfg)?;
    for ((s, psi), (_, sv)) in qa.samples.iter().zip(&svd.samples) {
        let d = trace_distance(psi, &svd_state_as_symstate(sv, cf.n()))?;
        println!("s = {s:.1}: D = {d:.4}");
    }
    Ok(())
}
