//! Closed-system annealing dynamics i dψ/ds = t_f H(s) ψ restricted to the
//! symmetric subspace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{integrate, Integrator, OdeStats, StepControl};
use crate::problems::CostFunction;
pub use crate::symspace::populations;
use crate::symspace::SymState;

/// Largest tolerated deviation of the norm from 1.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub t_f: f64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default)]
    pub sample_points: Vec<f64>,
    #[serde(default)]
    pub integrator: Integrator,
}

fn default_rel_tol() -> f64 {
    1e-8
}

fn default_abs_tol() -> f64 {
    1e-10
}

impl EvolutionConfig {
    pub fn new(t_f: f64) -> Self {
        Self {
            t_f,
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            sample_points: Vec::new(),
            integrator: Integrator::DormandPrince,
        }
    }

    pub fn with_samples(mut self, samples: Vec<f64>) -> Self {
        self.sample_points = samples;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_f > 0.0) || !self.t_f.is_finite() {
            return Err(Error::param(format!("t_f must be positive and finite, got {}", self.t_f)));
        }
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v > 0.0 && v <= 1e-2) {
                return Err(Error::param(format!("{name} must lie in (0, 1e-2], got {v}")));
            }
        }
        if self.sample_points.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::Range("sample points must lie in [0, 1]".into()));
        }
        if self.sample_points.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("sample points must be ascending"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<(f64, SymState)>,
    pub final_state: SymState,
    pub w_opt: usize,
    pub stats: OdeStats,
}

/// Evolves |+>^n from s = 0 to s = 1.
pub fn evolve(cf: &CostFunction, config: &EvolutionConfig) -> Result<Trajectory> {
    evolve_from(cf, &SymState::plus_state(cf.n()), config)
}

/// Evolves an arbitrary initial state from s = 0 to s = 1.
pub fn evolve_from(cf: &CostFunction, psi0: &SymState, config: &EvolutionConfig) -> Result<Trajectory> {
    config.validate()?;
    let n = cf.n();
    if psi0.len() != n + 1 {
        return Err(Error::param(format!("initial state has length {}, expected {}", psi0.len(), n + 1)));
    }
    let nf = n as f64;
    let t_f = config.t_f;
    let cost: Vec<f64> = cf.table().to_vec();
    let hop: Vec<f64> = (0..n).map(|w| -0.5 * (((n - w) * (w + 1)) as f64).sqrt()).collect();
    let dim = n + 1;
    let mut hpsi = vec![0.0; 2 * dim];

    // The right-hand side is shifted by <H>, which only rotates the global
    // phase and keeps the dominant component stationary.
    let rhs = move |s: f64, y: &[f64], dy: &mut [f64]| {
        let a = 1.0 - s;
        let mut e_num = 0.0;
        let mut norm2 = 0.0;
        for w in 0..dim {
            let d = a * nf * 0.5 + s * cost[w];
            let mut re = d * y[2 * w];
            let mut im = d * y[2 * w + 1];
            if w > 0 {
                let o = a * hop[w - 1];
                re += o * y[2 * w - 2];
                im += o * y[2 * w - 1];
            }
            if w + 1 < dim {
                let o = a * hop[w];
                re += o * y[2 * w + 2];
                im += o * y[2 * w + 3];
            }
            hpsi[2 * w] = re;
            hpsi[2 * w + 1] = im;
            e_num += y[2 * w] * re + y[2 * w + 1] * im;
            norm2 += y[2 * w] * y[2 * w] + y[2 * w + 1] * y[2 * w + 1];
        }
        let e = if norm2 > 0.0 { e_num / norm2 } else { 0.0 };
        for w in 0..dim {
            let re = hpsi[2 * w] - e * y[2 * w];
            let im = hpsi[2 * w + 1] - e * y[2 * w + 1];
            dy[2 * w] = t_f * im;
            dy[2 * w + 1] = -t_f * re;
        }
    };

    let y0: Vec<f64> = psi0.amps.iter().flat_map(|c| [c.re, c.im]).collect();
    let norm0 = psi0.norm();
    let ctl = StepControl { rel_tol: config.rel_tol, abs_tol: config.abs_tol, ..Default::default() };
    let mut samples = Vec::with_capacity(config.sample_points.len());
    let mut drift: Option<(f64, f64)> = None;
    let (y, stats) = integrate(config.integrator, rhs, 0.0, 1.0, &y0, &config.sample_points, &ctl, |s, y| {
        let st = unpack(y);
        let d = (st.norm() - norm0).abs();
        if d > NORM_DRIFT_LIMIT && drift.is_none() {
            drift = Some((s, d));
        }
        samples.push((s, st));
    })?;
    let final_state = unpack(&y);
    let d = (final_state.norm() - norm0).abs();
    if d > NORM_DRIFT_LIMIT && drift.is_none() {
        drift = Some((1.0, d));
    }
    if let Some((s, d)) = drift {
        return Err(Error::Accuracy(format!(
            "norm drift {d:e} at s = {s} exceeds {NORM_DRIFT_LIMIT:e}; tighten the integrator tolerances"
        )));
    }
    Ok(Trajectory { samples, final_state, w_opt: cf.w_opt(), stats })
}

fn unpack(y: &[f64]) -> SymState {
    SymState::new(y.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

/// |<w_opt|ψ(1)>|^2.
pub fn ground_prob(traj: &Trajectory) -> f64 {
    traj.final_state.amps[traj.w_opt].norm_sqr()
}

/// Final ground-state probability for annealing time `t_f` with default
/// tolerances.
pub fn p_gs(cf: &CostFunction, t_f: f64) -> Result<f64> {
    Ok(ground_prob(&evolve(cf, &EvolutionConfig::new(t_f))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_problem, ProblemKind};

    #[test]
    fn sudden_quench_leaves_plus_state() {
        let cf = make_problem(ProblemKind::PlainHw, 6).unwrap();
        let p = p_gs(&cf, 1e-6).unwrap();
        assert!((p - 2f64.powi(-6)).abs() < 1e-9);
    }

    #[test]
    fn plain_hw_is_a_product() {
        let p1 = p_gs(&make_problem(ProblemKind::PlainHw, 1).unwrap(), 7.3).unwrap();
        let p5 = p_gs(&make_problem(ProblemKind::PlainHw, 5).unwrap(), 7.3).unwrap();
        assert!((p5 - p1.powi(5)).abs() < 1e-6, "{p5} {}", p1.powi(5));
    }

    #[test]
    fn samples_and_norm() {
        let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 3 }, 12).unwrap();
        let cfg = EvolutionConfig::new(20.0).with_samples(vec![0.0, 0.25, 0.5, 1.0]);
        let tr = evolve(&cf, &cfg).unwrap();
        assert_eq!(tr.samples.len(), 4);
        for (_, st) in &tr.samples {
            assert!((st.norm() - 1.0).abs() < 1e-6);
        }
        let ck = evolve(&cf, &cfg.clone().with_integrator(Integrator::CashKarp)).unwrap();
        let d = crate::symspace::trace_distance(&tr.final_state, &ck.final_state).unwrap();
        assert!(d < 1e-6, "{d}");
    }

    #[test]
    fn invalid_config() {
        let cf = make_problem(ProblemKind::PlainHw, 2).unwrap();
        assert!(evolve(&cf, &EvolutionConfig::new(-1.0)).is_err());
        assert!(evolve(&cf, &EvolutionConfig::new(1.0).with_tolerances(0.1, 1e-10)).is_err());
        assert!(evolve(&cf, &EvolutionConfig::new(1.0).with_samples(vec![0.5, 0.2])).is_err());
    }
}
