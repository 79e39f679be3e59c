//! Benchmark metrics on a QA success curve: optimal time-to-solution,
//! the threshold time for p_0 = 0.9 and a power-law fit across n.

use phwo::metrics::{linear_grid, power_law_fit, threshold_time, tts_opt_refined, PerformanceCurve, ThresholdOptions};
use phwo::problems::{make_problem, ProblemKind};
use phwo::schrodinger::p_gs;

fn main() -> phwo::error::Result<()> {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 256)?;
    let curve = PerformanceCurve::sample(&linear_grid(6.0, 14.0, 33), |t| p_gs(&cf, t))?;
    let rep = tts_opt_refined(&curve, 0.7, |t| p_gs(&cf, t), 1e-4)?;
    println!("n = 256: TTS_opt = {:.4} at t_f = {:.4} (p = {:.4})", rep.tts_opt, rep.tf_opt, rep.p_at_opt);

    let (mut ns, mut taus) = (Vec::new(), Vec::new());
    for n in [16, 32, 64] {
        let cf = make_problem(ProblemKind::PlainHw, n)?;
        let tau = threshold_time(|t| p_gs(&cf, t), 0.9, &ThresholdOptions::default())?;
        if let Some(t) = tau.tau0() {
            println!("plain n = {n}: tau_0 = {t:.4}");
            ns.push(n as f64);
            taus.push(t);
        }
    }
    let fit = power_law_fit(&ns, &taus)?;
    println!("tau_0 ~ n^{:.3}", fit.exponent);
    Ok(())
}
