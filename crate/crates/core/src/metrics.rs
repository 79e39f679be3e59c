//! Benchmark metrics: time-to-solution, threshold times, scaling fits and
//! peak-width analysis of success-probability curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default threshold probability.
pub const DEFAULT_P0: f64 = 0.9;

/// Expected total time to see the ground state at least once with
/// probability `p_d`, repeating runs of length `t_f`.
///
/// Returns `t_f` when a single run already reaches `p_d`, and `+inf` when
/// `p_gs = 0`.
pub fn tts(t_f: f64, p_gs: f64, p_d: f64) -> Result<f64> {
    if !(p_d > 0.0 && p_d < 1.0) {
        return Err(Error::param(format!("p_d must lie in (0, 1), got {p_d}")));
    }
    if !(0.0..=1.0).contains(&p_gs) {
        return Err(Error::param(format!("p_gs must lie in [0, 1], got {p_gs}")));
    }
    if p_gs >= p_d {
        return Ok(t_f);
    }
    if p_gs == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(t_f * (1.0 - p_d).ln() / (-p_gs).ln_1p())
}

/// Number of repetitions `ln(1−p_d)/ln(1−p_gs)` behind [`tts`].
pub fn repetitions(p_gs: f64, p_d: f64) -> f64 {
    (1.0 - p_d).ln() / (-p_gs).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub p: f64,
    /// Standard error of `p`; zero for deterministic solvers.
    pub se: f64,
}

/// Success probability as a function of run length.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PerformanceCurve {
    points: Vec<CurvePoint>,
}

impl PerformanceCurve {
    pub fn new(points: Vec<CurvePoint>) -> Result<Self> {
        if points.iter().any(|q| !(0.0..=1.0).contains(&q.p)) {
            return Err(Error::param("curve probabilities must lie in [0, 1]"));
        }
        if points.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::param("curve times must be strictly increasing"));
        }
        Ok(Self { points })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(t, p)| CurvePoint { t, p, se: 0.0 }).collect())
    }

    /// Evaluates `provider` on every time of `grid`.
    pub fn sample<F: FnMut(f64) -> Result<f64>>(grid: &[f64], mut provider: F) -> Result<Self> {
        let pts: Result<Vec<_>> = grid.iter().map(|&t| provider(t).map(|p| CurvePoint { t, p, se: 0.0 })).collect();
        Self::new(pts?)
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtsReport {
    /// False when no point of the curve has `p_gs > 0`.
    pub solved: bool,
    pub tts_opt: f64,
    pub tf_opt: f64,
    pub p_d: f64,
    /// `p_gs` at `tf_opt`.
    pub p_at_opt: f64,
    pub curve: PerformanceCurve,
}

/// Minimum of the TTS over the grid points of `curve`.
pub fn tts_opt(curve: &PerformanceCurve, p_d: f64) -> Result<TtsReport> {
    if curve.is_empty() {
        return Err(Error::param("empty performance curve"));
    }
    let mut best = (f64::INFINITY, f64::NAN, 0.0);
    for q in curve.points() {
        let v = tts(q.t, q.p, p_d)?;
        if v < best.0 {
            best = (v, q.t, q.p);
        }
    }
    Ok(TtsReport {
        solved: best.0.is_finite(),
        tts_opt: best.0,
        tf_opt: best.1,
        p_d,
        p_at_opt: best.2,
        curve: curve.clone(),
    })
}

/// [`tts_opt`] followed by a golden-section search of `t ↦ TTS(t, provider(t))`
/// between the grid neighbours of the best grid point, to relative width `rel_tol`.
/// The refined point replaces the grid point only when it is better.
pub fn tts_opt_refined<F: FnMut(f64) -> Result<f64>>(
    curve: &PerformanceCurve,
    p_d: f64,
    mut provider: F,
    rel_tol: f64,
) -> Result<TtsReport> {
    let mut rep = tts_opt(curve, p_d)?;
    if !rep.solved || curve.len() < 2 {
        return Ok(rep);
    }
    let pts = curve.points();
    let k = pts.iter().position(|q| q.t == rep.tf_opt).unwrap_or(0);
    let a = pts[k.saturating_sub(1)].t;
    let b = pts[(k + 1).min(pts.len() - 1)].t;
    let mut err = None;
    let mut eval = |t: f64| -> (f64, f64) {
        match provider(t).and_then(|p| tts(t, p, p_d).map(|v| (v, p))) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                (f64::INFINITY, 0.0)
            }
        }
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = eval(c);
    let mut fd = eval(d);
    while hi - lo > rel_tol * hi {
        if fc.0 < fd.0 {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = eval(d);
        }
    }
    if let Some(e) = err {
        return Err(e);
    }
    let (t, (v, p)) = if fc.0 < fd.0 { (c, fc) } else { (d, fd) };
    if v < rep.tts_opt {
        rep.tts_opt = v;
        rep.tf_opt = t;
        rep.p_at_opt = p;
    }
    debug_assert!(rep.curve.points().iter().all(|q| rep.tts_opt <= tts(q.t, q.p, p_d).unwrap()));
    Ok(rep)
}

/// How the bracket found by the geometric scan is narrowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdRefinement {
    #[default]
    Bisection,
    /// Regula falsi with the Illinois modification; fewer evaluations on
    /// smooth curves.
    Illinois,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOptions {
    pub start: f64,
    pub ratio: f64,
    pub rel_tol: f64,
    pub cap: f64,
    pub refinement: ThresholdRefinement,
    /// Round evaluation points up to integers (sweep counts).
    pub integer: bool,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            start: 1.0,
            ratio: 1.25,
            rel_tol: 1e-3,
            cap: 1e7,
            refinement: ThresholdRefinement::Bisection,
            integer: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdOutcome {
    Reached { tau0: f64, evaluations: usize },
    /// `p_0` was not reached at any time up to the cap.
    CapExceeded { cap: f64, evaluations: usize },
}

impl ThresholdOutcome {
    pub fn tau0(&self) -> Option<f64> {
        match self {
            ThresholdOutcome::Reached { tau0, .. } => Some(*tau0),
            ThresholdOutcome::CapExceeded { .. } => None,
        }
    }
}

/// Smallest run length whose success probability reaches `p0`: a geometric
/// scan from `opts.start` brackets the first crossing, which is then
/// narrowed to relative width `opts.rel_tol`. The upper end of the final
/// bracket is returned.
pub fn threshold_time<F: FnMut(f64) -> Result<f64>>(
    mut provider: F,
    p0: f64,
    opts: &ThresholdOptions,
) -> Result<ThresholdOutcome> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::param(format!("p_0 must lie in (0, 1), got {p0}")));
    }
    if !(opts.start > 0.0 && opts.ratio > 1.0 && opts.rel_tol > 0.0 && opts.cap >= opts.start) {
        return Err(Error::param("threshold options need start > 0, ratio > 1, rel_tol > 0, cap >= start"));
    }
    let round = |t: f64| if opts.integer { t.ceil() } else { t };
    let mut evals = 0usize;
    let mut eval = |t: f64, evals: &mut usize| -> Result<f64> {
        *evals += 1;
        provider(t)
    };
    let mut lo: Option<(f64, f64)> = None;
    let mut t = round(opts.start);
    let hi = loop {
        let p = eval(t, &mut evals)?;
        if p >= p0 {
            break (t, p);
        }
        lo = Some((t, p));
        if t >= opts.cap {
            return Ok(ThresholdOutcome::CapExceeded { cap: opts.cap, evaluations: evals });
        }
        t = round((t * opts.ratio).min(opts.cap)).max(t + if opts.integer { 1.0 } else { 0.0 });
    };
    let Some(mut lo) = lo else {
        return Ok(ThresholdOutcome::Reached { tau0: hi.0, evaluations: evals });
    };
    let mut hi = hi;
    // residuals p − p0 used by the secant; halved on a stale end (Illinois)
    let (mut gl, mut gh) = (lo.1 - p0, hi.1 - p0);
    let mut last_moved = 0i8;
    let done = |lo: f64, hi: f64| hi - lo <= opts.rel_tol * hi || (opts.integer && hi - lo <= 1.0);
    while !done(lo.0, hi.0) {
        let mut m = match opts.refinement {
            ThresholdRefinement::Bisection => 0.5 * (lo.0 + hi.0),
            ThresholdRefinement::Illinois => {
                let x = (lo.0 * gh - hi.0 * gl) / (gh - gl);
                let span = hi.0 - lo.0;
                if x.is_finite() { x.clamp(lo.0 + 0.01 * span, hi.0 - 0.01 * span) } else { lo.0 + 0.5 * span }
            }
        };
        if opts.integer {
            m = m.round().clamp(lo.0 + 1.0, hi.0 - 1.0);
        }
        let p = eval(m, &mut evals)?;
        if p >= p0 {
            hi = (m, p);
            gh = p - p0;
            if last_moved == 1 {
                gl *= 0.5;
            }
            last_moved = 1;
        } else {
            lo = (m, p);
            gl = p - p0;
            if last_moved == -1 {
                gh *= 0.5;
            }
            last_moved = -1;
        }
    }
    Ok(ThresholdOutcome::Reached { tau0: hi.0, evaluations: evals })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::param("linear fit needs two or more (x, y) pairs"));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("linear fit needs at least two distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit { slope, intercept, r2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r2: f64,
}

/// Fits `y = prefactor · n^exponent` by least squares in log–log space.
pub fn power_law_fit(ns: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if ns.len() != ys.len() || ns.len() < 3 {
        return Err(Error::param("power-law fit needs at least three points"));
    }
    if ns.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::param("power-law fit needs finite positive data"));
    }
    let lx: Vec<f64> = ns.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let fit = linear_fit(&lx, &ly)?;
    Ok(PowerLawFit { exponent: fit.slope, prefactor: fit.intercept.exp(), r2: fit.r2 })
}

/// Fits `A exp(−(t−c)²/(2σ²))` to the points of the tallest interior peak
/// that lie above half its height. Returns `(c, σ)`.
pub fn gaussian_peak_fit(curve: &PerformanceCurve) -> Result<(f64, f64)> {
    let pts = curve.points();
    let interior = 1..pts.len().saturating_sub(1);
    let k = interior
        .filter(|&i| pts[i].p >= pts[i - 1].p && pts[i].p >= pts[i + 1].p && pts[i].p > 0.0)
        .max_by(|&i, &j| pts[i].p.total_cmp(&pts[j].p))
        .ok_or_else(|| Error::Shape("curve has no interior maximum".into()))?;
    let half = 0.5 * pts[k].p;
    let mut a = k;
    while a > 0 && pts[a - 1].p >= half {
        a -= 1;
    }
    let mut b = k;
    while b + 1 < pts.len() && pts[b + 1].p >= half {
        b += 1;
    }
    let win = &pts[a..=b];
    if win.len() < 3 {
        return Err(Error::Shape("fewer than three points above half maximum".into()));
    }
    let ts: Vec<f64> = win.iter().map(|q| q.t).collect();
    let ps: Vec<f64> = win.iter().map(|q| q.p).collect();
    let (c0, s0, a0) = log_parabola_guess(&ts, &ps, pts[k].t, pts[k].p)?;
    let (c, s) = levenberg_marquardt_gaussian(&ts, &ps, [a0, c0, s0])?;
    Ok((c, s))
}

/// Initial guess from a parabola through `ln p`; falls back to the peak
/// location with the window half-width when the parabola opens upwards.
fn log_parabola_guess(ts: &[f64], ps: &[f64], tk: f64, pk: f64) -> Result<(f64, f64, f64)> {
    let m = ts.len();
    // normal equations for ln p = q0 + q1 x + q2 x², x = t − tk
    let mut s = [0.0f64; 5];
    let mut r = [0.0f64; 3];
    for i in 0..m {
        let x = ts[i] - tk;
        let y = ps[i].ln();
        let mut xp = 1.0;
        for (j, sj) in s.iter_mut().enumerate() {
            *sj += xp;
            if j < 3 {
                r[j] += xp * y;
            }
            xp *= x;
        }
    }
    let mat = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let q = solve3(mat, r);
    let width = 0.5 * (ts[m - 1] - ts[0]);
    match q {
        Some(q) if q[2] < 0.0 => {
            let sigma = (-1.0 / (2.0 * q[2])).sqrt();
            let c = tk - q[1] / (2.0 * q[2]);
            let a = (q[0] - q[1] * q[1] / (4.0 * q[2])).exp();
            Ok((c, sigma, a))
        }
        _ => Ok((tk, width.max(f64::EPSILON), pk)),
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn levenberg_marquardt_gaussian(ts: &[f64], ps: &[f64], init: [f64; 3]) -> Result<(f64, f64)> {
    let model = |q: &[f64; 3], t: f64| q[0] * (-(t - q[1]).powi(2) / (2.0 * q[2] * q[2])).exp();
    let sse = |q: &[f64; 3]| ts.iter().zip(ps).map(|(&t, &p)| (p - model(q, t)).powi(2)).sum::<f64>();
    let mut q = init;
    let mut cost = sse(&q);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for (&t, &p) in ts.iter().zip(ps) {
            let g = model(&q, t);
            let dt = t - q[1];
            let e = (-(dt * dt) / (2.0 * q[2] * q[2])).exp();
            let jac = [e, g * dt / (q[2] * q[2]), g * dt * dt / q[2].powi(3)];
            let res = p - g;
            for i in 0..3 {
                jtr[i] += jac[i] * res;
                for j in 0..3 {
                    jtj[i][j] += jac[i] * jac[j];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut m = jtj;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += lambda * jtj[i][i].max(1e-300);
            }
            let Some(step) = solve3(m, jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [q[0] + step[0], q[1] + step[1], q[2] + step[2]];
            let c = sse(&trial);
            if c.is_finite() && c <= cost {
                let small = step.iter().zip(&trial).all(|(s, v)| s.abs() <= 1e-14 * (1.0 + v.abs()));
                q = trial;
                cost = c;
                lambda = (lambda / 10.0).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if !(q[2].is_finite() && q[1].is_finite()) {
        return Err(Error::numeric("metrics", f64::NAN, "Gaussian fit diverged"));
    }
    Ok((q[1], q[2].abs()))
}

/// Wilson score interval for `successes` out of `runs` at `z` standard deviations.
pub fn wilson_interval(successes: usize, runs: usize, z: f64) -> (f64, f64) {
    if runs == 0 {
        return (0.0, 1.0);
    }
    let m = runs as f64;
    let p = successes as f64 / m;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let centre = (p + z2 / (2.0 * m)) / denom;
    let half = z * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// One-sigma error bar from the Wilson interval.
pub fn wilson_se(successes: usize, runs: usize) -> f64 {
    let (lo, hi) = wilson_interval(successes, runs, 1.0);
    0.5 * (hi - lo)
}

/// Geometric grid from `a` to `b` inclusive with `count` points.
pub fn geometric_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![a];
    }
    let r = (b / a).ln() / (count - 1) as f64;
    (0..count).map(|i| a * (r * i as f64).exp()).collect()
}

/// Uniform grid from `a` to `b` inclusive with `count` points.
pub fn linear_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![a];
    }
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tts_examples() {
        assert!((tts(10.0, 0.5, 0.7).unwrap() - 17.3697).abs() < 1e-4);
        assert_eq!(tts(10.0, 0.9, 0.7).unwrap(), 10.0);
        assert_eq!(tts(10.0, 0.0, 0.7).unwrap(), f64::INFINITY);
        assert_eq!(tts(3.0, 0.7, 0.7).unwrap(), 3.0);
        assert!(tts(1.0, 0.5, 1.0).is_err());
        assert!(tts(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn repetition_identity() {
        for &(p, pd) in &[(0.1, 0.7), (0.5, 0.99), (0.01, 0.5)] {
            let k = repetitions(p, pd);
            assert!((1.0 - (1.0 - p).powf(k) - pd).abs() < 1e-12);
        }
    }

    #[test]
    fn tts_opt_picks_minimum() {
        let c = PerformanceCurve::from_pairs(&[(1.0, 0.05), (2.0, 0.3), (3.0, 0.5), (4.0, 0.55)]).unwrap();
        let r = tts_opt(&c, 0.7).unwrap();
        assert!(r.solved);
        for q in c.points() {
            assert!(r.tts_opt <= tts(q.t, q.p, 0.7).unwrap());
        }
        let none = PerformanceCurve::from_pairs(&[(1.0, 0.0), (2.0, 0.0)]).unwrap();
        assert!(!tts_opt(&none, 0.7).unwrap().solved);
    }

    #[test]
    fn refined_tts_on_smooth_curve() {
        // p(t) = sin²(t/4) has TTS minimised where p first reaches p_d
        let p = |t: f64| (t / 4.0).sin().powi(2);
        let grid = linear_grid(1.0, 6.0, 11);
        let c = PerformanceCurve::sample(&grid, |t| Ok(p(t))).unwrap();
        let r = tts_opt_refined(&c, 0.7, |t| Ok(p(t)), 1e-6).unwrap();
        let want = 4.0 * 0.7f64.sqrt().asin();
        assert!((r.tf_opt - want).abs() < 1e-4, "{} {want}", r.tf_opt);
    }

    #[test]
    fn threshold_on_exponential() {
        for refinement in [ThresholdRefinement::Bisection, ThresholdRefinement::Illinois] {
            let opts = ThresholdOptions { start: 0.1, refinement, ..Default::default() };
            let out = threshold_time(|t| Ok(1.0 - (-t).exp()), 0.9, &opts).unwrap();
            let t = out.tau0().unwrap();
            assert!((t - 10f64.ln()).abs() < 1e-3 * t, "{refinement:?} {t}");
        }
        let capped = threshold_time(|_| Ok(0.1), 0.9, &ThresholdOptions { cap: 10.0, ..Default::default() }).unwrap();
        assert!(matches!(capped, ThresholdOutcome::CapExceeded { cap, .. } if cap == 10.0));
    }

    #[test]
    fn integer_threshold() {
        let opts = ThresholdOptions { start: 1.0, integer: true, ..Default::default() };
        let t = threshold_time(|t| Ok(if t >= 37.0 { 0.95 } else { 0.5 }), 0.9, &opts).unwrap().tau0().unwrap();
        assert_eq!(t, 37.0);
    }

    #[test]
    fn exact_power_law() {
        let ns = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = ns.iter().map(|n| 3.0 * n * n).collect();
        let f = power_law_fit(&ns, &ys).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-10);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!(power_law_fit(&ns, &[1.0, -1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn exact_gaussian() {
        let grid = linear_grid(7.0, 13.0, 61);
        let c = PerformanceCurve::sample(&grid, |t| Ok(0.6 * (-(t - 10.0f64).powi(2) / (2.0 * 0.25)).exp())).unwrap();
        let (centre, sigma) = gaussian_peak_fit(&c).unwrap();
        assert!((centre - 10.0).abs() < 1e-6);
        assert!((sigma - 0.5).abs() < 1e-6);
        let mono = PerformanceCurve::from_pairs(&[(1.0, 0.1), (2.0, 0.2), (3.0, 0.3)]).unwrap();
        assert!(matches!(gaussian_peak_fit(&mono), Err(Error::Shape(_))));
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5 && lo > 0.39 && hi < 0.61);
        assert_eq!(wilson_interval(0, 10, 1.0).0, 0.0);
    }
}
