//! Spin-vector dynamics: n identical classical spins evolving under the
//! symmetric spin-coherent potential.
//!
//! The shared spin direction is integrated as a Bloch vector
//! m = (sin θ cos φ, sin θ sin φ, cos θ), obeying dm/ds = t_f (2/n) ∇_m V × m,
//! which is the angular equation of motion without the 1/sin θ pole.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::LnFactorials;
use crate::ode::{integrate, OdeStats, StepControl};
use crate::problems::CostFunction;
use crate::schrodinger::EvolutionConfig;
use crate::semiclassical::SymPotential;
use crate::symspace::{coherent_state, SymState};

/// Largest tolerated drift of |m| from 1 over a trajectory.
pub const BLOCH_NORM_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvdState {
    pub theta: f64,
    pub phi: f64,
}

impl SvdState {
    pub fn initial() -> Self {
        Self { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
    }

    pub fn from_bloch(m: &[f64]) -> Self {
        let r = (m[0] * m[0] + m[1] * m[1]).sqrt();
        Self { theta: r.atan2(m[2]), phi: m[1].atan2(m[0]) }
    }

    pub fn bloch(&self) -> [f64; 3] {
        [self.theta.sin() * self.phi.cos(), self.theta.sin() * self.phi.sin(), self.theta.cos()]
    }

    /// Expected Hamming weight n sin²(θ/2) of the product state.
    pub fn hw(&self, n: usize) -> f64 {
        n as f64 * (self.theta / 2.0).sin().powi(2)
    }
}

#[derive(Debug, Clone)]
pub struct SvdTrajectory {
    pub samples: Vec<(f64, SvdState)>,
    pub final_state: SvdState,
    pub stats: OdeStats,
}

/// Integrates the spin-vector equations from θ = π/2, φ = 0.
pub fn svd_evolve(cf: &CostFunction, config: &EvolutionConfig) -> Result<SvdTrajectory> {
    if !(config.t_f >= 0.0) || !config.t_f.is_finite() {
        return Err(Error::param(format!("t_f must be finite and >= 0, got {}", config.t_f)));
    }
    if !(config.rel_tol > 0.0 && config.rel_tol <= 1e-2 && config.abs_tol > 0.0 && config.abs_tol <= 1e-2) {
        return Err(Error::param("tolerances must lie in (0, 1e-2]"));
    }
    if config.sample_points.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::Range("sample points must lie in [0, 1]".into()));
    }
    let init = SvdState::initial();
    if config.t_f == 0.0 {
        return Ok(SvdTrajectory {
            samples: config.sample_points.iter().map(|&s| (s, init)).collect(),
            final_state: init,
            stats: OdeStats::default(),
        });
    }
    let pot = SymPotential::new(cf);
    let n = cf.n() as f64;
    let t_f = config.t_f;
    let rhs = |s: f64, m: &[f64], dm: &mut [f64]| {
        let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
        let mz = (m[2] / norm).clamp(-1.0, 1.0);
        let p = 0.5 * (1.0 - mz);
        // ∇_m V with V = (1-s)(n/2)(1 - m_x) + s G(p(m_z))
        let gx = -(1.0 - s) * n / 2.0;
        let gz = -0.5 * s * pot.cost_slope(p);
        let c = t_f * 2.0 / n;
        dm[0] = c * (-gz * m[1]);
        dm[1] = c * (gz * m[0] - gx * m[2]);
        dm[2] = c * (gx * m[1]);
    };
    let ctl = StepControl { rel_tol: config.rel_tol, abs_tol: config.abs_tol, ..Default::default() };
    let mut samples = Vec::with_capacity(config.sample_points.len());
    let mut worst = 0.0f64;
    let (m, stats) = integrate(
        config.integrator,
        rhs,
        0.0,
        1.0,
        &init.bloch(),
        &config.sample_points,
        &ctl,
        |s, m| {
            worst = worst.max((bloch_norm(m) - 1.0).abs());
            samples.push((s, SvdState::from_bloch(m)));
        },
    )?;
    worst = worst.max((bloch_norm(&m) - 1.0).abs());
    if worst > BLOCH_NORM_LIMIT {
        return Err(Error::Accuracy(format!("Bloch vector norm drift {worst:e} exceeds {BLOCH_NORM_LIMIT:e}")));
    }
    Ok(SvdTrajectory { samples, final_state: SvdState::from_bloch(&m), stats })
}

fn bloch_norm(m: &[f64]) -> f64 {
    (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt()
}

/// Probability that measuring the product state gives Hamming weight
/// `w_opt`: C(n,w) p^w (1-p)^(n-w), p = sin²(θ/2). For `w_opt = 0` this is
/// cos^{2n}(θ/2).
pub fn svd_ground_prob(state: &SvdState, n: usize, w_opt: usize) -> Result<f64> {
    if w_opt > n {
        return Err(Error::Range(format!("w_opt = {w_opt} exceeds n = {n}")));
    }
    let p = (state.theta / 2.0).sin().powi(2);
    let q = (state.theta / 2.0).cos().powi(2);
    let lw = if w_opt == 0 { 0.0 } else if p == 0.0 { return Ok(0.0) } else { w_opt as f64 * p.ln() };
    let lr = if w_opt == n { 0.0 } else if q == 0.0 { return Ok(0.0) } else { (n - w_opt) as f64 * q.ln() };
    let lc = LnFactorials::new(n).ln_binom(n, w_opt);
    Ok((lc + lw + lr).exp())
}

/// Final-state success probability of SVD at annealing time `t_f`.
pub fn svd_p_gs(cf: &CostFunction, t_f: f64) -> Result<f64> {
    let tr = svd_evolve(cf, &EvolutionConfig::new(t_f.max(f64::MIN_POSITIVE)))?;
    svd_ground_prob(&tr.final_state, cf.n(), cf.w_opt())
}

pub fn svd_state_as_symstate(state: &SvdState, n: usize) -> SymState {
    coherent_state(n, state.theta, state.phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_problem, ProblemKind};

    #[test]
    fn ground_prob_examples() {
        let s0 = SvdState { theta: 0.0, phi: 0.0 };
        assert_eq!(svd_ground_prob(&s0, 10, 0).unwrap(), 1.0);
        let half = SvdState::initial();
        assert!((svd_ground_prob(&half, 10, 0).unwrap() - 2f64.powi(-10)).abs() < 1e-15);
        assert!((svd_ground_prob(&half, 10, 1).unwrap() - 10.0 * 2f64.powi(-10)).abs() < 1e-14);
    }

    #[test]
    fn frozen_at_zero_time() {
        let cf = make_problem(ProblemKind::PlainHw, 5).unwrap();
        let tr = svd_evolve(&cf, &EvolutionConfig::new(0.0)).unwrap();
        assert_eq!(tr.final_state, SvdState::initial());
    }

    #[test]
    fn symstate_view() {
        let st = svd_state_as_symstate(&SvdState::initial(), 4);
        assert!(crate::symspace::trace_distance(&st, &SymState::plus_state(4)).unwrap() < 1e-12);
        let st = svd_state_as_symstate(&SvdState { theta: 0.0, phi: 0.0 }, 4);
        assert!((st.amps[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plain_matches_single_qubit_quantum() {
        for &tf in &[1.0, 10.0] {
            let cf1 = make_problem(ProblemKind::PlainHw, 1).unwrap();
            let q = crate::schrodinger::p_gs(&cf1, tf).unwrap();
            let cf = make_problem(ProblemKind::PlainHw, 17).unwrap();
            let tr = svd_evolve(&cf, &EvolutionConfig::new(tf)).unwrap();
            let p1 = svd_ground_prob(&tr.final_state, 1, 0).unwrap();
            assert!((p1 - q).abs() < 1e-7, "tf={tf} {p1} {q}");
        }
    }
}
