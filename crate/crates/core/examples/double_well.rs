//! The spin-coherent potential: degeneracy of its two wells, the barrier
//! between them and the jump of the semiclassical ground state.

use phwo::problems::{make_problem, ProblemKind};
use phwo::semiclassical::{find_degeneracy, landscape_minima, sc_ground_state};
use phwo::symspace::{hw_expectation, min_gap};

fn main() -> phwo::error::Result<()> {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 512)?;
    let deg = find_degeneracy(&cf)?;
    let (s_gap, _) = min_gap(&cf)?;
    println!("s* = {:.5} (min gap at {s_gap:.5}), barrier {:.4e}", deg.s_star, deg.barrier_height);
    println!("wells at theta = {:.4} and {:.4}", deg.theta_left, deg.theta_right);

    for s in [deg.s_star - 0.01, deg.s_star + 0.01] {
        let mins = landscape_minima(&cf, s, 0.0);
        let (theta, state) = sc_ground_state(&cf, s);
        println!("s = {s:.4}: {} minima, global at {theta:.4}, <HW> = {:.3}", mins.len(), hw_expectation(&state));
    }
    Ok(())
}
