//! Cost tables of the catalog and the locality of their Pauli-z expansions.

use phwo::problems::{locality, make_problem, pauli_z_expansion, ProblemKind};

fn main() -> phwo::error::Result<()> {
    let n = 10;
    let kinds = [
        ProblemKind::PlainHw,
        ProblemKind::FixedPlateau { l: 3, u: 8 },
        ProblemKind::Spike,
        ProblemKind::Precipice,
        ProblemKind::Grover,
        ProblemKind::ConvexBump,
    ];
    for kind in kinds {
        let cf = make_problem(kind, n)?;
        let k = locality(&pauli_z_expansion(&cf)?);
        println!("{:<16} k = {k:>2}  f = {:?}", cf.kind().name(), cf.table());
    }
    Ok(())
}
