//! Simulated annealing on bit strings next to the exact birth–death
//! hitting times that describe it.

use phwo::problems::{make_problem, ProblemKind};
use phwo::sa::{
    chain_walk_mean, hamming_descent_time, hitting_time_linear_solver, plateau_chain, sa_batch,
    stefanov_expected_time, SaConfig,
};

fn main() -> phwo::error::Result<()> {
    for n in [64, 128, 256] {
        let chain = plateau_chain(0, 6, n)?;
        let (t, _) = stefanov_expected_time(&chain)?;
        println!("plateau fall-off n = {n}: {t:.4e} (linear solve {:.4e})", hitting_time_linear_solver(&chain)?);
    }
    let chain = plateau_chain(0, 4, 64)?;
    let (mean, se) = chain_walk_mean(&chain, 20_000, 1)?;
    println!("n = 64, u = 4: walk {mean:.1} ± {se:.1} vs exact {:.1}", stefanov_expected_time(&chain)?.0);

    let n = 64;
    println!("Hamming descent at beta = ln n: {:.1} updates", hamming_descent_time(n, (n as f64).ln())?);

    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 4 }, 24)?;
    for sweeps in [10, 100, 1000] {
        let (sum, _) = sa_batch(&cf, &SaConfig { seed: 3, ..SaConfig::new(sweeps) }, 400)?;
        println!("SA {sweeps:>5} sweeps: p_GS = {:.3}", sum.p_gs);
    }
    Ok(())
}
