//! Simulated annealing on bit strings, and exact hitting times of the
//! birth–death chains that describe it on Hamming-weight landscapes.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::anneal::{parallel_runs, run_rng, AnnealMode, AnnealResult, BatchSummary};
use crate::error::{Error, Result};
use crate::math::LnFactorials;
use crate::problems::{CostFunction, XorMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// `n` uniformly random site choices per sweep.
    #[default]
    Random,
    /// Sites `0..n` in a fixed order.
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    #[default]
    Random,
    AllOnes,
    AllZeros,
    Bits(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaConfig {
    pub beta_i: f64,
    pub beta_f: f64,
    pub sweeps: usize,
    pub selection: Selection,
    pub mode: AnnealMode,
    pub seed: u64,
    pub init: InitialState,
    pub mask: Option<XorMask>,
    /// Solver mode only: end the run at the first ground-state hit. The
    /// reported cost is still the full schedule.
    pub stop_at_gs: bool,
    pub record_hw: bool,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            beta_i: 0.1,
            beta_f: 20.0,
            sweeps: 1,
            selection: Selection::Random,
            mode: AnnealMode::Solver,
            seed: 0,
            init: InitialState::Random,
            mask: None,
            stop_at_gs: true,
            record_hw: false,
        }
    }
}

impl SaConfig {
    pub fn new(sweeps: usize) -> Self {
        Self { sweeps, ..Default::default() }
    }

    /// Fixed inverse temperature for the whole run.
    pub fn fixed_beta(beta: f64, sweeps: usize) -> Self {
        Self { beta_i: beta, beta_f: beta, sweeps, ..Default::default() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.beta_i >= 0.0) || !self.beta_f.is_finite() || self.beta_i > self.beta_f {
            return Err(Error::param(format!(
                "need 0 <= beta_i <= beta_f < inf, got beta_i = {}, beta_f = {}",
                self.beta_i, self.beta_f
            )));
        }
        if self.sweeps == 0 {
            return Err(Error::param("sweeps must be at least 1"));
        }
        if let Some(m) = &self.mask {
            if m.len() != n {
                return Err(Error::param(format!("mask length {} differs from n = {n}", m.len())));
            }
        }
        if let InitialState::Bits(b) = &self.init {
            if b.len() != n {
                return Err(Error::param(format!("initial state length {} differs from n = {n}", b.len())));
            }
        }
        Ok(())
    }

    /// Increment of β per sweep (zero for a single sweep).
    pub fn delta_beta(&self) -> f64 {
        if self.sweeps <= 1 {
            0.0
        } else {
            (self.beta_f - self.beta_i) / (self.sweeps - 1) as f64
        }
    }
}

pub(crate) fn is_ground(e: f64, e0: f64) -> bool {
    e <= e0 + 1e-12 * (1.0 + e0.abs())
}

/// Metropolis acceptance probabilities for moving the weight up or down from
/// every `w` at inverse temperature `beta`.
fn acceptance_tables(f: &[f64], beta: f64, up: &mut [f64], down: &mut [f64]) {
    let n = f.len() - 1;
    for w in 0..=n {
        up[w] = if w < n { metropolis(beta, f[w + 1] - f[w]) } else { 0.0 };
        down[w] = if w > 0 { metropolis(beta, f[w - 1] - f[w]) } else { 0.0 };
    }
}

#[inline]
fn metropolis(beta: f64, de: f64) -> f64 {
    if de <= 0.0 {
        1.0
    } else {
        (-beta * de).exp()
    }
}

pub fn sa_run(cf: &CostFunction, config: &SaConfig) -> Result<AnnealResult> {
    sa_run_stream(cf, config, 0)
}

/// One anneal using RNG stream `stream` of `config.seed`.
pub fn sa_run_stream(cf: &CostFunction, config: &SaConfig, stream: u64) -> Result<AnnealResult> {
    let n = cf.n();
    config.validate(n)?;
    let mut rng = run_rng(config.seed, stream);
    let f = cf.table();
    let e0 = cf.min_value();
    let mask: Vec<bool> = config.mask.as_ref().map_or_else(|| vec![false; n], |m| m.bits().to_vec());
    let mut x: Vec<bool> = match &config.init {
        InitialState::Random => (0..n).map(|_| rng.random::<bool>()).collect(),
        InitialState::AllOnes => vec![true; n],
        InitialState::AllZeros => vec![false; n],
        InitialState::Bits(b) => b.clone(),
    };
    let mut w = x.iter().zip(&mask).filter(|(a, b)| a != b).count();
    let mut energy = f[w];
    let mut best = energy;
    let mut best_w = w;
    let mut best_trace = vec![(0u64, best)];
    let mut to_gs = is_ground(energy, e0).then_some(0u64);
    let mut hw_samples = Vec::new();
    let stop = config.mode == AnnealMode::Solver && config.stop_at_gs;
    let mut up = vec![0.0; n + 1];
    let mut down = vec![0.0; n + 1];
    let dbeta = config.delta_beta();
    let mut done = stop && to_gs.is_some();
    let mut updates = 0u64;
    let mut sweep = 0;
    while sweep < config.sweeps && !done {
        let beta = config.beta_i + sweep as f64 * dbeta;
        acceptance_tables(f, beta, &mut up, &mut down);
        for k in 0..n {
            let i = match config.selection {
                Selection::Random => rng.random_range(0..n),
                Selection::Sequential => k,
            };
            let raise = x[i] == mask[i];
            let p = if raise { up[w] } else { down[w] };
            updates += 1;
            if p >= 1.0 || (p > 0.0 && rng.random::<f64>() < p) {
                x[i] = !x[i];
                w = if raise { w + 1 } else { w - 1 };
                energy = f[w];
                if energy < best {
                    best = energy;
                    best_w = w;
                    best_trace.push((updates, best));
                    if to_gs.is_none() && is_ground(energy, e0) {
                        to_gs = Some(updates);
                        if stop {
                            done = true;
                            break;
                        }
                    }
                }
            }
        }
        if config.record_hw {
            let s = if config.sweeps <= 1 { 1.0 } else { sweep as f64 / (config.sweeps - 1) as f64 };
            hw_samples.push((s, w as f64));
        }
        sweep += 1;
    }
    let total = config.sweeps as u64 * n as u64;
    let (success, reported_hw) = match config.mode {
        AnnealMode::Solver => (to_gs.is_some(), best_w),
        AnnealMode::Annealer => (is_ground(energy, e0), w),
    };
    Ok(AnnealResult {
        success,
        p_gs: if success { 1.0 } else { 0.0 },
        updates: total,
        updates_to_gs: to_gs,
        best_energy: best,
        final_energy: energy,
        reported_hw,
        best_trace,
        hw_samples,
    })
}

/// Runs `runs` independent anneals (streams `0..runs`) on the worker pool.
pub fn sa_batch(cf: &CostFunction, config: &SaConfig, runs: usize) -> Result<(BatchSummary, Vec<AnnealResult>)> {
    config.validate(cf.n())?;
    let results: Result<Vec<_>> = parallel_runs(runs, |r| sa_run_stream(cf, config, r)).into_iter().collect();
    let results = results?;
    Ok((BatchSummary::from_results(&results), results))
}

/// Empirical ground-state probability after `sweeps` sweeps of `base`'s schedule.
pub fn sa_success_probability(cf: &CostFunction, base: &SaConfig, sweeps: usize, runs: usize) -> Result<f64> {
    let cfg = SaConfig { sweeps, record_hw: false, ..base.clone() };
    Ok(sa_batch(cf, &cfg, runs)?.0.p_gs)
}

/// Random walk on nodes `0..=w` with node 0 absorbing.
///
/// Indexing follows the usual birth–death convention: `a[i]` is the
/// probability of `i → i−1`, `b[i]` of `i → i`, and `c[i]` of `i−1 → i`, so
/// row `i` sums `a[i] + b[i] + c[i+1]`. `c` has length `w + 2` with
/// `c[w+1] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthDeathChain {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl BirthDeathChain {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let size = a.len();
        if size < 2 || b.len() != size || c.len() != size + 1 {
            return Err(Error::param("chain needs a, b of length w+1 >= 2 and c of length w+2"));
        }
        if c[size] != 0.0 {
            return Err(Error::param("c[w+1] must be zero"));
        }
        for i in 0..size {
            let (ai, bi, ci) = (a[i], b[i], c[i + 1]);
            if !(ai >= 0.0 && bi >= 0.0 && ci >= 0.0) {
                return Err(Error::param(format!("negative transition probability at node {i}")));
            }
            if (ai + bi + ci - 1.0).abs() > 1e-12 {
                return Err(Error::param(format!("row {i} sums to {}", ai + bi + ci)));
            }
        }
        Ok(Self { a, b, c })
    }

    /// Index of the top node.
    pub fn w(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self, i: usize) -> f64 {
        self.a[i]
    }

    pub fn b(&self, i: usize) -> f64 {
        self.b[i]
    }

    /// Probability of `i−1 → i`.
    pub fn c(&self, i: usize) -> f64 {
        self.c[i]
    }

    fn check_absorbing(&self) -> Result<()> {
        if self.c[1] != 0.0 {
            return Err(Error::param("node 0 is not absorbing (c[1] != 0)"));
        }
        if let Some(r) = (1..=self.w()).find(|&r| self.a[r] <= 0.0) {
            return Err(Error::param(format!("a[{r}] = 0: node 0 is unreachable from node {r}")));
        }
        Ok(())
    }
}

/// Chain of a zero-temperature walker on a plateau over weights
/// `l+1..=u−1`. Node `i` stands for weight `l + i`; node 0 is the ground
/// state at weight `l` and uphill moves out of the plateau are rejected.
pub fn plateau_chain(l: usize, u: usize, n: usize) -> Result<BirthDeathChain> {
    if !(l < u && u <= n) || u - l < 2 {
        return Err(Error::param(format!("need 0 <= l < u <= n and u - l >= 2, got l = {l}, u = {u}, n = {n}")));
    }
    let w = u - l - 1;
    let nf = n as f64;
    let mut a = vec![0.0; w + 1];
    let mut b = vec![0.0; w + 1];
    let mut c = vec![0.0; w + 2];
    b[0] = 1.0;
    for i in 1..=w {
        a[i] = (l + i) as f64 / nf;
    }
    b[w] = 1.0 - (l + w) as f64 / nf;
    for i in 2..=w {
        c[i] = 1.0 - (l + i - 1) as f64 / nf;
    }
    BirthDeathChain::new(a, b, c)
}

/// Chain of Metropolis descent on the plain Hamming-weight cost at fixed
/// `beta`: node `i` is weight `i`, downhill moves always accepted, uphill
/// moves with `e^{-beta}`.
pub fn hamming_descent_chain(n: usize, beta: f64) -> Result<BirthDeathChain> {
    check_beta(beta)?;
    if n == 0 {
        return Err(Error::param("n must be >= 1"));
    }
    let nf = n as f64;
    let eb = (-beta).exp();
    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    let mut c = vec![0.0; n + 2];
    for i in 2..=n {
        c[i] = (n - i + 1) as f64 / nf * eb;
    }
    b[0] = 1.0;
    for i in 1..=n {
        a[i] = i as f64 / nf;
        b[i] = 1.0 - a[i] - c[i + 1];
    }
    BirthDeathChain::new(a, b, c)
}

/// Expected hitting time of node 0 from node `w`, with the per-step means
/// `E τ_{r,r−1}` for `r = 1..=w` (element `r − 1`).
///
/// `E τ_{r,r−1} = (1/a_r)(1 + Σ_{s=r+1}^{w} Π_{t=r+1}^{s} c_t/a_t)`, with the
/// nested products accumulated from the top of the chain downwards.
pub fn stefanov_expected_time(chain: &BirthDeathChain) -> Result<(f64, Vec<f64>)> {
    chain.check_absorbing()?;
    let w = chain.w();
    let mut steps = vec![0.0; w];
    let mut tail = 0.0;
    for r in (1..=w).rev() {
        steps[r - 1] = (1.0 + tail) / chain.a[r];
        tail = chain.c[r] / chain.a[r] * (1.0 + tail);
    }
    let total = steps.iter().rev().sum();
    Ok((total, steps))
}

/// Expected hitting time of node 0 from node `w` by first-step analysis:
/// solves `h_i = 1 + a_i h_{i−1} + b_i h_i + c_{i+1} h_{i+1}`, `h_0 = 0`,
/// by forward elimination of the tridiagonal system in exact rationals.
pub fn hitting_time_linear_solver(chain: &BirthDeathChain) -> Result<f64> {
    chain.check_absorbing()?;
    let w = chain.w();
    // Exact arithmetic: every f64 entry is a dyadic rational, and plain Thomas
    // elimination in floating point cancels catastrophically once the
    // hitting times spread over many orders of magnitude.
    let q = |x: f64| BigRational::from_float(x).expect("finite chain entry");
    let one = BigRational::one();
    // Row i: -a_i h_{i-1} + (1 - b_i) h_i - c_{i+1} h_{i+1} = 1, with h_0 = 0.
    // 1 - b_i is taken as a_i + c_{i+1}: the stored b_i carries a rounding
    // error of order 1e-16 that acts as a spurious killing rate, and the
    // solution is sensitive to it once h reaches ~1e16.
    let mut diag: Vec<BigRational> = (0..=w).map(|i| q(chain.a[i]) + q(chain.c[i + 1])).collect();
    let mut rhs: Vec<BigRational> = vec![one.clone(); w + 1];
    for i in 2..=w {
        if diag[i - 1].is_zero() {
            return Err(Error::numeric("sa", f64::NAN, format!("singular hitting-time system at row {}", i - 1)));
        }
        // eliminate h_{i-1} from row i using row i-1
        let m = q(chain.a[i]) / &diag[i - 1];
        let up = q(chain.c[i]);
        diag[i] = &diag[i] - &m * &up;
        let r = &m * &rhs[i - 1];
        rhs[i] = &rhs[i] + r;
    }
    if diag[w].is_zero() {
        return Err(Error::numeric("sa", f64::NAN, format!("singular hitting-time system at row {w}")));
    }
    let h = (&rhs[w] / &diag[w]).to_f64().unwrap_or(f64::NAN);
    if !h.is_finite() {
        return Err(Error::numeric("sa", f64::NAN, "hitting time overflowed"));
    }
    Ok(h)
}

/// Simulates the chain from node `w` until absorption, returning the step count.
pub fn chain_walk<R: Rng>(chain: &BirthDeathChain, rng: &mut R) -> u64 {
    let mut i = chain.w();
    let mut steps = 0u64;
    while i > 0 {
        let u: f64 = rng.random();
        steps += 1;
        if u < chain.a[i] {
            i -= 1;
        } else if u < chain.a[i] + chain.c[i + 1] {
            i += 1;
        }
    }
    steps
}

/// Mean and standard error of the absorption time over `runs` walks.
pub fn chain_walk_mean(chain: &BirthDeathChain, runs: usize, seed: u64) -> Result<(f64, f64)> {
    chain.check_absorbing()?;
    if runs < 2 {
        return Err(Error::param("need at least two walks"));
    }
    let times = parallel_runs(runs, |r| chain_walk(chain, &mut run_rng(seed, r)) as f64);
    let mean = times.iter().sum::<f64>() / runs as f64;
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    Ok((mean, (var / runs as f64).sqrt()))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) {
        return Err(Error::param(format!("beta must be > 0 (or infinite), got {beta}")));
    }
    Ok(())
}

/// Per-step descent means on the plain Hamming-weight cost at fixed `beta`:
/// element `r − 1` is `E τ_{r,r−1}`. With `k = n − r`,
/// `E τ_{r,r−1} = n/(n−k) · C(n,k)^{-1} Σ_{l=0}^{k} e^{−lβ} C(n,k−l)`.
/// `beta = f64::INFINITY` gives `n/r`. Entries that overflow are `+inf`.
pub fn hamming_descent_steps(n: usize, beta: f64) -> Result<Vec<f64>> {
    check_beta(beta)?;
    if n == 0 {
        return Err(Error::param("n must be >= 1"));
    }
    let lf = LnFactorials::new(n);
    let mut steps = vec![0.0; n];
    let mut logs = Vec::with_capacity(n);
    for k in 0..n {
        let lk = lf.ln_binom(n, k);
        logs.clear();
        let terms = if beta.is_infinite() { 1 } else { k + 1 };
        for l in 0..terms {
            logs.push(lf.ln_binom(n, k - l) - lk - if l == 0 { 0.0 } else { l as f64 * beta });
        }
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + logs.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        steps[n - k - 1] = ((n as f64 / (n - k) as f64).ln() + lse).exp();
    }
    Ok(steps)
}

/// Expected number of single-spin updates to go from all ones to all zeros
/// under random-selection Metropolis on the plain Hamming-weight cost.
pub fn hamming_descent_time(n: usize, beta: f64) -> Result<f64> {
    Ok(hamming_descent_steps(n, beta)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{harmonic, EULER_GAMMA};
    use crate::problems::{make_problem, ProblemKind};

    #[test]
    fn plateau_chain_entries() {
        let ch = plateau_chain(0, 2, 10).unwrap();
        assert_eq!(ch.w(), 1);
        assert!((ch.a(1) - 0.1).abs() < 1e-15);
        let ch = plateau_chain(3, 9, 100).unwrap();
        assert!((ch.a(5) - 0.08).abs() < 1e-15);
        assert!((ch.c(5) - 0.93).abs() < 1e-15);
        assert!(plateau_chain(3, 4, 10).is_err());
        assert!(plateau_chain(3, 11, 10).is_err());
    }

    #[test]
    fn small_hitting_times() {
        for (u, want) in [(2, 10.0), (3, 60.0)] {
            let ch = plateau_chain(0, u, 10).unwrap();
            let (tot, steps) = stefanov_expected_time(&ch).unwrap();
            assert!((tot - want).abs() < 1e-12, "{tot}");
            assert!((steps[ch.w() - 1] - 10.0 / (u - 1) as f64).abs() < 1e-12);
            assert!((hitting_time_linear_solver(&ch).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn plateau_time_scales_as_power_of_width() {
        let t = |n| stefanov_expected_time(&plateau_chain(0, 6, n).unwrap()).unwrap().0;
        let ratio = t(8192) / t(4096);
        assert!((ratio - 32.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn non_absorbing_rejected() {
        let ch = BirthDeathChain::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0, 0.0]).unwrap();
        assert!(stefanov_expected_time(&ch).is_err());
        assert!(BirthDeathChain::new(vec![0.0, 0.5], vec![1.0, 0.6], vec![0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn walker_agrees_with_analytics() {
        let ch = plateau_chain(1, 5, 12).unwrap();
        let exact = stefanov_expected_time(&ch).unwrap().0;
        let (mean, se) = chain_walk_mean(&ch, 20_000, 7).unwrap();
        assert!((mean - exact).abs() < 4.0 * se, "{mean} ± {se} vs {exact}");
    }

    #[test]
    fn descent_examples() {
        let t = hamming_descent_time(4, f64::INFINITY).unwrap();
        assert!((t - 25.0 / 3.0).abs() < 1e-12);
        let first = hamming_descent_steps(10, 10f64.ln()).unwrap()[0];
        let closed = 10.0 * (1.1f64.powi(10) - 1.0);
        assert!((first - closed).abs() < 1e-10 * closed, "{first} {closed}");
        assert!((closed - 15.937).abs() < 1e-3);
        let r = hamming_descent_steps(20, 0.1).unwrap()[0] / hamming_descent_steps(10, 0.1).unwrap()[0];
        assert!(r > 10.0, "{r}");
        assert!(hamming_descent_time(5, 0.0).is_err());
    }

    #[test]
    fn descent_closed_form_matches_chain() {
        for &(n, beta) in &[(6, 0.7), (30, 2.0), (64, 64f64.ln())] {
            let closed = hamming_descent_time(n, beta).unwrap();
            let ch = hamming_descent_chain(n, beta).unwrap();
            let st = stefanov_expected_time(&ch).unwrap().0;
            let lin = hitting_time_linear_solver(&ch).unwrap();
            assert!((closed - st).abs() < 1e-10 * st, "{n} {closed} {st}");
            assert!((lin - st).abs() < 1e-10 * st);
        }
    }

    #[test]
    fn zero_temperature_descent_is_coupon_collector() {
        let n = 64;
        let cf = make_problem(ProblemKind::PlainHw, n).unwrap();
        let cfg = SaConfig { init: InitialState::AllOnes, ..SaConfig::fixed_beta(50.0, 10_000) };
        let (sum, _) = sa_batch(&cf, &cfg, 400).unwrap();
        let mean = sum.mean_updates_to_gs.unwrap();
        assert_eq!(sum.successes, 400);
        let want = n as f64 * harmonic(n);
        assert!((mean / want - 1.0).abs() < 0.1, "{mean} {want}");
        assert!((want / (n as f64 * ((n as f64).ln() + EULER_GAMMA)) - 1.0).abs() < 0.01);
    }

    #[test]
    fn annealer_reports_final_state() {
        let cf = make_problem(ProblemKind::PlainHw, 16).unwrap();
        let cfg = SaConfig { mode: AnnealMode::Annealer, beta_f: 30.0, ..SaConfig::new(200) };
        let r = sa_run(&cf, &cfg).unwrap();
        assert!(r.success);
        assert_eq!(r.reported_hw, 0);
        assert_eq!(r.updates, 200 * 16);
    }

    #[test]
    fn seeds_are_reproducible() {
        let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 4 }, 20).unwrap();
        let cfg = SaConfig { seed: 99, selection: Selection::Sequential, ..SaConfig::new(50) };
        assert_eq!(sa_run_stream(&cf, &cfg, 3).unwrap(), sa_run_stream(&cf, &cfg, 3).unwrap());
    }

    #[test]
    fn config_validation() {
        let cf = make_problem(ProblemKind::PlainHw, 8).unwrap();
        assert!(sa_run(&cf, &SaConfig::new(0)).is_err());
        assert!(sa_run(&cf, &SaConfig { beta_i: 5.0, beta_f: 1.0, ..SaConfig::new(3) }).is_err());
        assert!(sa_run(&cf, &SaConfig { mask: Some(XorMask::zeros(3)), ..SaConfig::new(3) }).is_err());
        assert_eq!(SaConfig::new(1).delta_beta(), 0.0);
    }
}
