//! Symmetric spin-coherent potential
//! V(θ, φ, s) = (1-s)(n/2)(1 - cos φ sin θ) + s Σ_w f(w) C(n,w) p^w (1-p)^(n-w),
//! p = sin²(θ/2), and its landscape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{bernstein_sum, LnFactorials};
use crate::problems::CostFunction;
use crate::symspace::{coherent_state, SymState};

/// Default number of grid intervals used to bracket extrema in θ.
pub const LANDSCAPE_GRID: usize = 4096;

/// Precomputed cost tables for repeated potential evaluations.
#[derive(Debug, Clone)]
pub struct SymPotential {
    n: usize,
    cost: Vec<f64>,
    diff: Vec<f64>,
    lf: LnFactorials,
}

impl SymPotential {
    pub fn new(cf: &CostFunction) -> Self {
        let cost = cf.table().to_vec();
        let diff = cost.windows(2).map(|w| w[1] - w[0]).collect();
        Self { n: cf.n(), cost, diff, lf: LnFactorials::new(cf.n()) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Expected cost of the product state with flip probability `p`.
    pub fn cost_mean(&self, p: f64) -> f64 {
        bernstein_sum(&self.lf, &self.cost, p)
    }

    /// d(cost_mean)/dp via the Bernstein derivative.
    pub fn cost_slope(&self, p: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.n as f64 * bernstein_sum(&self.lf, &self.diff, p)
    }

    pub fn v(&self, theta: f64, phi: f64, s: f64) -> f64 {
        let p = (theta / 2.0).sin().powi(2);
        (1.0 - s) * (self.n as f64 / 2.0) * (1.0 - phi.cos() * theta.sin()) + s * self.cost_mean(p)
    }

    pub fn dv_dtheta(&self, theta: f64, phi: f64, s: f64) -> f64 {
        let p = (theta / 2.0).sin().powi(2);
        -(1.0 - s) * (self.n as f64 / 2.0) * phi.cos() * theta.cos() + s * self.cost_slope(p) * theta.sin() / 2.0
    }

    /// Extrema of θ -> V(θ, φ, s) on [0, π]: sign changes of dV/dθ on a
    /// uniform grid, refined by bisection, plus the two endpoints.
    pub fn extrema(&self, s: f64, phi: f64, grid: usize) -> Vec<LandscapePoint> {
        let grid = grid.max(4);
        let pi = std::f64::consts::PI;
        // nodes: 0, ε, π/grid, 2π/grid, …, π−ε, π; the ε nodes catch minima
        // that sit closer to a boundary than one grid step
        let eps = pi / grid as f64 * 1e-6;
        let mut nodes = vec![eps];
        nodes.extend((1..grid).map(|i| pi * i as f64 / grid as f64));
        nodes.push(pi - eps);
        let mut out = Vec::new();
        let d_first = self.dv_dtheta(eps, phi, s);
        out.push(LandscapePoint {
            theta: 0.0,
            v: self.v(0.0, phi, s),
            kind: if d_first >= 0.0 { ExtremumKind::Minimum } else { ExtremumKind::Maximum },
            boundary: true,
        });
        let mut prev = d_first;
        for i in 1..nodes.len() {
            let cur = self.dv_dtheta(nodes[i], phi, s);
            if (prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0) {
                let rising = prev < 0.0;
                let (mut a, mut b) = (nodes[i - 1], nodes[i]);
                while b - a > 1e-10 * (1.0 + a) {
                    let m = 0.5 * (a + b);
                    let dm = self.dv_dtheta(m, phi, s);
                    if (dm < 0.0) == rising {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let theta = 0.5 * (a + b);
                out.push(LandscapePoint {
                    theta,
                    v: self.v(theta, phi, s),
                    kind: if rising { ExtremumKind::Minimum } else { ExtremumKind::Maximum },
                    boundary: false,
                });
            }
            if cur != 0.0 {
                prev = cur;
            }
        }
        out.push(LandscapePoint {
            theta: pi,
            v: self.v(pi, phi, s),
            kind: if prev <= 0.0 { ExtremumKind::Minimum } else { ExtremumKind::Maximum },
            boundary: true,
        });
        out
    }

    fn minima(&self, s: f64) -> Vec<LandscapePoint> {
        self.extrema(s, 0.0, LANDSCAPE_GRID)
            .into_iter()
            .filter(|p| p.kind == ExtremumKind::Minimum)
            .collect()
    }

    fn global_min(&self, s: f64) -> LandscapePoint {
        self.minima(s)
            .into_iter()
            .min_by(|a, b| a.v.total_cmp(&b.v))
            .expect("a continuous function on [0, pi] has a minimum")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub theta: f64,
    pub v: f64,
    pub kind: ExtremumKind,
    /// True for θ = 0 or θ = π.
    pub boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub s_star: f64,
    pub theta_left: f64,
    pub theta_right: f64,
    pub theta_barrier: f64,
    pub barrier_height: f64,
}

pub fn v_sym(cf: &CostFunction, theta: f64, phi: f64, s: f64) -> f64 {
    SymPotential::new(cf).v(theta, phi, s)
}

pub fn dv_dtheta(cf: &CostFunction, theta: f64, phi: f64, s: f64) -> f64 {
    SymPotential::new(cf).dv_dtheta(theta, phi, s)
}

/// All extrema of V(·, φ, s), endpoints included and flagged.
pub fn landscape_extrema(cf: &CostFunction, s: f64, phi: f64) -> Vec<LandscapePoint> {
    SymPotential::new(cf).extrema(s, phi, LANDSCAPE_GRID)
}

/// Minima of V(·, φ, s), endpoints included when they are local minima.
pub fn landscape_minima(cf: &CostFunction, s: f64, phi: f64) -> Vec<LandscapePoint> {
    landscape_extrema(cf, s, phi)
        .into_iter()
        .filter(|p| p.kind == ExtremumKind::Minimum)
        .collect()
}

/// ΔV = V(leftmost minimum) - V(rightmost minimum), when at least two
/// minima exist.
fn well_split(pot: &SymPotential, s: f64) -> Option<(f64, LandscapePoint, LandscapePoint)> {
    let mins = pot.minima(s);
    if mins.len() < 2 {
        return None;
    }
    let left = mins[0];
    let right = mins[mins.len() - 1];
    Some((left.v - right.v, left, right))
}

/// Locates the value of s at which the two lowest wells of the potential
/// are degenerate, by bisection on ΔV(s).
pub fn find_degeneracy(cf: &CostFunction) -> Result<DegeneracyReport> {
    let pot = SymPotential::new(cf);
    let tol_v = 1e-8 * cf.n() as f64;
    let scan = |lo: f64, hi: f64, m: usize| -> Option<(f64, f64)> {
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=m {
            let s = lo + (hi - lo) * i as f64 / m as f64;
            match well_split(&pot, s) {
                Some((dv, _, _)) => {
                    if let Some((sp, dp)) = prev {
                        if dp.signum() != dv.signum() || dv == 0.0 {
                            return Some((sp, s));
                        }
                    }
                    prev = Some((s, dv));
                }
                None => prev = None,
            }
        }
        None
    };
    let coarse = 400;
    let mut bracket = scan(0.0, 1.0, coarse);
    if bracket.is_none() {
        // Narrow windows: rescan cells adjacent to any two-well grid point.
        let mut cells: Vec<usize> = (0..=coarse)
            .filter(|&i| well_split(&pot, i as f64 / coarse as f64).is_some())
            .collect();
        cells.dedup();
        for i in cells {
            let lo = (i.saturating_sub(1)) as f64 / coarse as f64;
            let hi = ((i + 1).min(coarse)) as f64 / coarse as f64;
            if let Some(b) = scan(lo, hi, 200) {
                bracket = Some(b);
                break;
            }
        }
    }
    let (mut a, mut b) = bracket.ok_or_else(|| {
        Error::Landscape(format!("no double-well degeneracy found for {} at n = {}", cf.kind().name(), cf.n()))
    })?;
    let sign_a = well_split(&pot, a).map(|x| x.0.signum()).unwrap_or(1.0);
    while b - a > 1e-10 {
        let m = 0.5 * (a + b);
        match well_split(&pot, m) {
            Some((dv, _, _)) if dv.abs() <= tol_v * 1e-2 => {
                a = m;
                b = m;
            }
            Some((dv, _, _)) if dv.signum() == sign_a => a = m,
            Some(_) => b = m,
            None => {
                return Err(Error::Landscape(format!(
                    "double well disappears inside the bracket at s = {m} for {}",
                    cf.kind().name()
                )))
            }
        }
    }
    let s_star = 0.5 * (a + b);
    let (dv, left, right) = well_split(&pot, s_star)
        .ok_or_else(|| Error::Landscape(format!("double well lost at s* = {s_star}")))?;
    if dv.abs() > tol_v {
        return Err(Error::numeric(
            "semiclassical",
            s_star,
            format!("well splitting {dv:e} exceeds tie tolerance {tol_v:e}"),
        ));
    }
    let barrier = pot
        .extrema(s_star, 0.0, LANDSCAPE_GRID)
        .into_iter()
        .filter(|p| p.kind == ExtremumKind::Maximum && p.theta > left.theta && p.theta < right.theta)
        .max_by(|x, y| x.v.total_cmp(&y.v))
        .ok_or_else(|| Error::Landscape(format!("no barrier between the wells at s* = {s_star}")))?;
    Ok(DegeneracyReport {
        s_star,
        theta_left: left.theta,
        theta_right: right.theta,
        theta_barrier: barrier.theta,
        barrier_height: barrier.v - left.v,
    })
}

/// Spin-coherent state at the global minimum of V(·, 0, s).
pub fn sc_ground_state(cf: &CostFunction, s: f64) -> (f64, SymState) {
    let theta = SymPotential::new(cf).global_min(s).theta;
    (theta, coherent_state(cf.n(), theta, 0.0))
}

/// Semiclassical ground state for many `s` values, sharing the cost tables.
pub fn sc_ground_angles(cf: &CostFunction, s_values: &[f64]) -> Vec<f64> {
    let pot = SymPotential::new(cf);
    s_values.iter().map(|&s| pot.global_min(s).theta).collect()
}

/// q(s) = (1-s)² / (2Δ(Δ+s)), the flip probability of the single-qubit
/// ground state of the unperturbed problem.
pub fn reichardt_q(s: f64) -> f64 {
    let d = (1.0 - 2.0 * s + 2.0 * s * s).sqrt();
    (1.0 - s).powi(2) / (2.0 * d * (d + s))
}

/// First-order energy shift of the perturbation window and its Gaussian
/// rectangle bound. Returns `(partial_sum, bound)`.
pub fn reichardt_gap_terms(cf: &CostFunction, s: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Range(format!("s = {s} outside [0, 1]")));
    }
    let (l, u) = cf
        .perturbation_window()
        .ok_or_else(|| Error::param(format!("{} has no perturbation window", cf.kind().name())))?;
    if l == 0 {
        return Err(Error::param("the Gaussian bound needs l >= 1"));
    }
    let n = cf.n();
    let lf = LnFactorials::new(n);
    let q = reichardt_q(s);
    let hk: Vec<(usize, f64)> = (l + 1..u).map(|k| (k, cf.at(k) - k as f64)).collect();
    let partial: f64 = if q <= 0.0 {
        0.0
    } else {
        s * hk
            .iter()
            .map(|&(k, h)| h * (lf.ln_binom(n, k) + k as f64 * q.ln() + (n - k) as f64 * (-q).ln_1p()).exp())
            .sum::<f64>()
    };
    let h = hk.iter().map(|x| x.1).fold(0.0f64, f64::max);
    let width = (u - l) as f64;
    let mu = n as f64 * q;
    let bound = if (l as f64) < mu && mu < u as f64 {
        h * width / ((2.0 * std::f64::consts::PI).sqrt() * (l as f64 * (1.0 - q)).sqrt())
    } else {
        let sigma = (n as f64 * q * (1.0 - q)).sqrt();
        if sigma == 0.0 {
            0.0
        } else {
            let z = |x: f64| (x - mu) / (sigma * std::f64::consts::SQRT_2);
            h * 0.5 * (libm::erf(z(u as f64)) - libm::erf(z(l as f64))).abs()
        }
    };
    Ok((partial, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_problem, ProblemKind};
    use std::f64::consts::PI;

    #[test]
    fn potential_examples() {
        let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 40).unwrap();
        assert!(v_sym(&cf, PI / 2.0, 0.0, 0.0).abs() < 1e-12);
        assert!((v_sym(&cf, 0.0, 0.3, 1.0) - cf.at(0)).abs() < 1e-12);
        assert!((v_sym(&cf, PI, 0.3, 1.0) - cf.at(40)).abs() < 1e-12);
        let plain = make_problem(ProblemKind::PlainHw, 33).unwrap();
        for &(th, ph, s) in &[(0.3, 0.1, 0.2), (2.0, -1.0, 0.7), (1.0, 0.0, 1.0)] {
            let want = (1.0 - s) * 16.5 * (1.0 - f64::cos(ph) * f64::sin(th)) + s * 33.0 * (th / 2.0f64).sin().powi(2);
            assert!((v_sym(&plain, th, ph, s) - want).abs() < 1e-11);
        }
        assert!((dv_dtheta(&plain, 1.2, 0.0, 1.0) - 16.5 * 1.2f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn minimum_within_one_grid_step_of_the_pole_is_found() {
        let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 6 }, 512).unwrap();
        for &s in &[0.997, 0.998, 0.9995] {
            let mins = landscape_minima(&cf, s, 0.0);
            let best = mins.iter().min_by(|a, b| a.v.total_cmp(&b.v)).unwrap();
            assert!(best.theta < PI / LANDSCAPE_GRID as f64, "s={s}: {mins:?}");
            assert!(!best.boundary);
        }
    }

    #[test]
    fn plain_has_single_interior_minimum() {
        let cf = make_problem(ProblemKind::PlainHw, 64).unwrap();
        for &s in &[0.1, 0.5, 0.9] {
            let mins = landscape_minima(&cf, s, 0.0);
            assert_eq!(mins.len(), 1, "s={s}: {mins:?}");
            assert!(!mins[0].boundary);
        }
        let mins = landscape_minima(&cf, 0.0, 0.0);
        assert_eq!(mins.len(), 1);
        assert!((mins[0].theta - PI / 2.0).abs() < 1e-9);
        assert!(matches!(find_degeneracy(&cf), Err(Error::Landscape(_))));
    }

    #[test]
    fn reichardt_empty_window() {
        let cf = make_problem(ProblemKind::Reichardt { l: 3, u: 4, h: 1.0 }, 20).unwrap();
        assert_eq!(reichardt_gap_terms(&cf, 0.5).unwrap().0, 0.0);
        let cf0 = make_problem(ProblemKind::FixedPlateau { l: 0, u: 4 }, 20).unwrap();
        assert!(reichardt_gap_terms(&cf0, 0.5).is_err());
    }

    #[test]
    fn q_endpoints() {
        assert!((reichardt_q(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(reichardt_q(1.0), 0.0);
    }
}
