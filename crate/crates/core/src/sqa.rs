//! Simulated quantum annealing: discrete imaginary-time path-integral Monte
//! Carlo along the annealing schedule, updated by Wolff clusters grown along
//! imaginary time only.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::anneal::{parallel_runs, run_rng, AnnealMode, AnnealResult, BatchSummary};
use crate::error::{Error, Result};
use crate::problems::{CostFunction, XorMask};
use crate::sa::is_ground;

/// Below this transverse-field strength the coupling is pinned at [`J_PERP_CAP`].
pub const A_FLOOR: f64 = 1e-12;
pub const J_PERP_CAP: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JPerpConvention {
    /// `-½ ln tanh(A/2)`.
    #[default]
    PaperLiteral,
    /// `-½ ln tanh(βA/(2N_τ))`, the Trotter coupling of `A Σ (1-σˣ)/2`.
    Trotter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqaConfig {
    pub n_tau: usize,
    pub beta: f64,
    pub sweeps: usize,
    pub mode: AnnealMode,
    pub jperp: JPerpConvention,
    pub seed: u64,
    pub mask: Option<XorMask>,
    /// Solver mode only: stop at the first ground-state slice.
    pub stop_at_gs: bool,
    pub record_hw: bool,
}

impl Default for SqaConfig {
    fn default() -> Self {
        Self {
            n_tau: 64,
            beta: 30.0,
            sweeps: 1,
            mode: AnnealMode::Solver,
            jperp: JPerpConvention::PaperLiteral,
            seed: 0,
            mask: None,
            stop_at_gs: true,
            record_hw: false,
        }
    }
}

impl SqaConfig {
    pub fn new(sweeps: usize) -> Self {
        Self { sweeps, ..Default::default() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.n_tau < 2 {
            return Err(Error::param(format!("need at least 2 Trotter slices, got {}", self.n_tau)));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::param(format!("beta must be finite and > 0, got {}", self.beta)));
        }
        if self.sweeps == 0 {
            return Err(Error::param("sweeps must be at least 1"));
        }
        if let Some(m) = &self.mask {
            if m.len() != n {
                return Err(Error::param(format!("mask length {} differs from n = {n}", m.len())));
            }
        }
        Ok(())
    }

    /// Anneal parameter at sweep `k`: `k/(N_sw−1)`, or 0 for a single sweep.
    pub fn s_at(&self, k: usize) -> f64 {
        if self.sweeps <= 1 {
            0.0
        } else {
            k as f64 / (self.sweeps - 1) as f64
        }
    }
}

/// Imaginary-time coupling for transverse-field strength `a`.
pub fn j_perp(a: f64, convention: JPerpConvention, beta: f64, n_tau: usize) -> f64 {
    if a < A_FLOOR {
        return J_PERP_CAP;
    }
    let x = match convention {
        JPerpConvention::PaperLiteral => a / 2.0,
        JPerpConvention::Trotter => beta * a / (2.0 * n_tau as f64),
    };
    (-0.5 * x.tanh().ln()).min(J_PERP_CAP)
}

/// Probability of adding a parallel neighbour to a cluster.
pub fn cluster_add_probability(j: f64) -> f64 {
    -(-2.0 * j).exp_m1()
}

/// Per-sweep constants of the action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceParams {
    pub j_perp: f64,
    pub p_add: f64,
    /// `β B / N_τ`.
    pub delta: f64,
}

impl SliceParams {
    pub fn at(s: f64, config: &SqaConfig) -> Self {
        let j = j_perp(1.0 - s, config.jperp, config.beta, config.n_tau);
        Self { j_perp: j, p_add: cluster_add_probability(j), delta: config.beta * s / config.n_tau as f64 }
    }
}

/// Spins of every site on every Trotter slice, with cached slice weights.
///
/// Bits are stored site-major (`i * N_τ + τ`) as the raw bit value; the
/// cached weights count bits that differ from the mask.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldlineConfigState {
    n: usize,
    n_tau: usize,
    bits: Vec<bool>,
    mask: Vec<bool>,
    weights: Vec<usize>,
}

impl WorldlineConfigState {
    pub fn from_bits(n: usize, n_tau: usize, bits: Vec<bool>, mask: Option<&XorMask>) -> Result<Self> {
        if bits.len() != n * n_tau {
            return Err(Error::param(format!("expected {} spins, got {}", n * n_tau, bits.len())));
        }
        let mask = mask.map_or_else(|| vec![false; n], |m| m.bits().to_vec());
        if mask.len() != n {
            return Err(Error::param("mask length differs from n"));
        }
        let mut st = Self { n, n_tau, bits, mask, weights: vec![0; n_tau] };
        st.weights = st.recount();
        Ok(st)
    }

    pub fn uniform(n: usize, n_tau: usize, bit: bool) -> Self {
        Self::from_bits(n, n_tau, vec![bit; n * n_tau], None).expect("consistent sizes")
    }

    pub fn random<R: Rng>(n: usize, n_tau: usize, mask: Option<&XorMask>, rng: &mut R) -> Result<Self> {
        let bits = (0..n * n_tau).map(|_| rng.random::<bool>()).collect();
        Self::from_bits(n, n_tau, bits, mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_tau(&self) -> usize {
        self.n_tau
    }

    /// Raw bit of site `i` on slice `tau`.
    pub fn bit(&self, i: usize, tau: usize) -> bool {
        self.bits[i * self.n_tau + tau]
    }

    /// Masked Hamming weight of each slice.
    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn slice_bits(&self, tau: usize) -> Vec<bool> {
        (0..self.n).map(|i| self.bit(i, tau)).collect()
    }

    fn recount(&self) -> Vec<usize> {
        (0..self.n_tau)
            .map(|t| (0..self.n).filter(|&i| self.bits[i * self.n_tau + t] != self.mask[i]).count())
            .collect()
    }

    /// True when the cached slice weights match a full recount.
    pub fn audit(&self) -> bool {
        self.weights == self.recount()
    }

    /// Action `Δ Σ_τ f(w_τ) − J Σ_{i,τ} μ_{i,τ} μ_{i,τ+1}` with periodic τ.
    pub fn action(&self, f: &[f64], p: &SliceParams) -> f64 {
        let space: f64 = self.weights.iter().map(|&w| f[w]).sum();
        let mut bond = 0i64;
        for i in 0..self.n {
            let row = &self.bits[i * self.n_tau..(i + 1) * self.n_tau];
            for t in 0..self.n_tau {
                bond += if row[t] == row[(t + 1) % self.n_tau] { 1 } else { -1 };
            }
        }
        p.delta * space - p.j_perp * bond as f64
    }

    /// Attempts one imaginary-time cluster update on site `i`. Returns the
    /// cluster as `(start, len)` when the flip is accepted.
    pub fn cluster_update<R: Rng>(
        &mut self,
        i: usize,
        f: &[f64],
        p: &SliceParams,
        rng: &mut R,
    ) -> Option<(usize, usize)> {
        let nt = self.n_tau;
        let row = i * nt;
        let t0 = rng.random_range(0..nt);
        let v = self.bits[row + t0];
        let grow = |rng: &mut R| p.p_add >= 1.0 || rng.random::<f64>() < p.p_add;
        let mut len = 1;
        let mut t = (t0 + 1) % nt;
        while len < nt && self.bits[row + t] == v && grow(rng) {
            len += 1;
            t = (t + 1) % nt;
        }
        let mut start = t0;
        let mut t = (t0 + nt - 1) % nt;
        while len < nt && self.bits[row + t] == v && grow(rng) {
            len += 1;
            start = t;
            t = (t + nt - 1) % nt;
        }
        let raise = v == self.mask[i];
        let mut de = 0.0;
        for k in 0..len {
            let w = self.weights[(start + k) % nt];
            de += if raise { f[w + 1] - f[w] } else { f[w - 1] - f[w] };
        }
        de *= p.delta;
        if de > 0.0 && rng.random::<f64>() >= (-de).exp() {
            return None;
        }
        for k in 0..len {
            let tau = (start + k) % nt;
            self.bits[row + tau] = !v;
            if raise {
                self.weights[tau] += 1;
            } else {
                self.weights[tau] -= 1;
            }
        }
        Some((start, len))
    }

    /// One cluster update attempt on every site, in site order.
    pub fn sweep<R: Rng>(&mut self, f: &[f64], p: &SliceParams, rng: &mut R) -> usize {
        (0..self.n).filter(|&i| self.cluster_update(i, f, p, rng).is_some()).count()
    }
}

/// Mean Hamming weight over the Trotter slices.
pub fn sqa_hw_profile(state: &WorldlineConfigState) -> f64 {
    state.weights.iter().sum::<usize>() as f64 / state.n_tau as f64
}

pub fn sqa_run(cf: &CostFunction, config: &SqaConfig) -> Result<AnnealResult> {
    sqa_run_stream(cf, config, 0)
}

/// One anneal from independently random worldlines, RNG stream `stream`.
pub fn sqa_run_stream(cf: &CostFunction, config: &SqaConfig, stream: u64) -> Result<AnnealResult> {
    let n = cf.n();
    config.validate(n)?;
    let mut rng = run_rng(config.seed, stream);
    let f = cf.table();
    let e0 = cf.min_value();
    let nt = config.n_tau;
    let mut st = WorldlineConfigState::random(n, nt, config.mask.as_ref(), &mut rng)?;
    let slice_min = |st: &WorldlineConfigState| {
        st.weights.iter().map(|&w| (f[w], w)).fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
    };
    let (mut best, mut best_w) = slice_min(&st);
    let mut best_trace = vec![(0u64, best)];
    let mut to_gs = is_ground(best, e0).then_some(0u64);
    let stop = config.mode == AnnealMode::Solver && config.stop_at_gs;
    let mut hw_samples = Vec::new();
    let mut done = stop && to_gs.is_some();
    let mut k = 0;
    while k < config.sweeps && !done {
        let s = config.s_at(k);
        let p = SliceParams::at(s, config);
        for i in 0..n {
            if let Some((start, len)) = st.cluster_update(i, f, &p, &mut rng) {
                for j in 0..len {
                    let w = st.weights[(start + j) % nt];
                    if f[w] < best {
                        best = f[w];
                        best_w = w;
                        let upd = ((k * n + i + 1) * nt) as u64;
                        best_trace.push((upd, best));
                        if to_gs.is_none() && is_ground(best, e0) {
                            to_gs = Some(upd);
                        }
                    }
                }
                if stop && to_gs.is_some() {
                    done = true;
                    break;
                }
            }
        }
        debug_assert!(st.audit());
        if config.record_hw {
            hw_samples.push((s, sqa_hw_profile(&st)));
        }
        k += 1;
    }
    let total = (config.sweeps * n * nt) as u64;
    let (success, reported_hw, final_energy) = match config.mode {
        AnnealMode::Solver => (to_gs.is_some(), best_w, slice_min(&st).0),
        AnnealMode::Annealer => {
            let w = st.weights[rng.random_range(0..nt)];
            (is_ground(f[w], e0), w, f[w])
        }
    };
    Ok(AnnealResult {
        success,
        p_gs: if success { 1.0 } else { 0.0 },
        updates: total,
        updates_to_gs: to_gs,
        best_energy: best,
        final_energy,
        reported_hw,
        best_trace,
        hw_samples,
    })
}

pub fn sqa_batch(cf: &CostFunction, config: &SqaConfig, runs: usize) -> Result<(BatchSummary, Vec<AnnealResult>)> {
    config.validate(cf.n())?;
    let results: Result<Vec<_>> = parallel_runs(runs, |r| sqa_run_stream(cf, config, r)).into_iter().collect();
    let results = results?;
    Ok((BatchSummary::from_results(&results), results))
}

pub fn sqa_success_probability(cf: &CostFunction, base: &SqaConfig, sweeps: usize, runs: usize) -> Result<f64> {
    let cfg = SqaConfig { sweeps, record_hw: false, ..base.clone() };
    Ok(sqa_batch(cf, &cfg, runs)?.0.p_gs)
}
