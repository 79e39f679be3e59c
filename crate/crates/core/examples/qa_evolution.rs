//! Schrödinger evolution in the symmetric subspace: the diabatic p_GS
//! peak near t_f = 10 and the populations of the lowest levels along it.

use phwo::problems::{make_problem, ProblemKind};
use phwo::schrodinger::{evolve, p_gs, EvolutionConfig};
use phwo::symspace::{build_hamiltonian, eigen_spectrum, populations};

fn main() -> phwo::error::Result<()> {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 256)?;
    for t_f in [2.0, 6.0, 9.0, 10.0, 11.0, 14.0, 40.0] {
        println!("t_f = {t_f:>5}: p_GS = {:.6}", p_gs(&cf, t_f)?);
    }

    let samples = vec![0.25, 0.5, 0.75, 1.0];
    let traj = evolve(&cf, &EvolutionConfig::new(10.0).with_samples(samples))?;
    for (s, psi) in &traj.samples {
        let spec = eigen_spectrum(&build_hamiltonian(&cf, *s)?, 9)?;
        let pops = populations(psi, &spec)?;
        println!("s = {s:.2}: lowest 9 hold {:.4}", pops.iter().sum::<f64>());
    }
    Ok(())
}
