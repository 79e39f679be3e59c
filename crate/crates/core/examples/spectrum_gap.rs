//! Minimum gap, its position and the eigenpath length of the plateau
//! problem as n grows.

use phwo::problems::{make_problem, ProblemKind};
use phwo::symspace::{adiabatic_numerator, eigenpath_length, min_gap};

fn main() -> phwo::error::Result<()> {
    println!("{:>5} {:>12} {:>10} {:>12} {:>12}", "n", "g_min", "s*", "numerator", "path length");
    for n in [64, 128, 256, 512] {
        let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, n)?;
        let (s, g) = min_gap(&cf)?;
        println!(
            "{n:>5} {g:>12.6e} {s:>10.6} {:>12.6} {:>12.6}",
            adiabatic_numerator(&cf)?,
            eigenpath_length(&cf)?
        );
    }
    Ok(())
}
