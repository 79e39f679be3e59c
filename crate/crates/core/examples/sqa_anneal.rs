//! Path-integral Monte Carlo annealing: success probability against
//! sweeps, and the mean slice Hamming weight along one schedule.

use phwo::anneal::AnnealMode;
use phwo::problems::{make_problem, ProblemKind};
use phwo::sqa::{sqa_batch, SqaConfig};

fn main() -> phwo::error::Result<()> {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 64)?;
    for sweeps in [20, 50, 100, 200] {
        let (sum, _) = sqa_batch(&cf, &SqaConfig { seed: 1, ..SqaConfig::new(sweeps) }, 200)?;
        println!("{sweeps:>4} sweeps: p_GS = {:.3}, {} updates per run", sum.p_gs, sum.updates_per_run);
    }

    let cfg = SqaConfig { mode: AnnealMode::Annealer, record_hw: true, stop_at_gs: false, ..SqaConfig::new(200) };
    let (_, runs) = sqa_batch(&cf, &cfg, 50)?;
    for k in (0..200).step_by(25) {
        let hw = runs.iter().map(|r| r.hw_samples[k].1).sum::<f64>() / runs.len() as f64;
        println!("s = {:.3}: <HW> = {hw:.2}", runs[0].hw_samples[k].0);
    }
    Ok(())
}
