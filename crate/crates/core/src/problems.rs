//! Perturbed Hamming-weight cost functions.
//!
//! Every problem in the catalog assigns an energy to a bit string through its
//! Hamming weight only, so a cost function is stored as a dense table
//! `f[0..=n]`. All solvers read that table; the stochastic solvers may
//! additionally scramble the input through an XOR mask.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size accepted by [`pauli_z_expansion`].
pub const PAULI_MAX_N: usize = 16;

/// Problem family together with its family-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemKind {
    /// `f(w) = w`.
    PlainHw,
    /// `f(w) = u - 1` for `l < w < u`, `w` elsewhere.
    FixedPlateau { l: usize, u: usize },
    /// `f(w) = w + h` for `l < w < u`. `l`, `u`, `h` are the values of the
    /// family's size-dependent parameters at the requested `n`.
    Reichardt { l: usize, u: usize, h: f64 },
    /// Plateau whose left edge sits at `l = n/4`; `span = u - l`.
    MovingPlateau { span: usize },
    /// `f(0) = 0`, `f(w) = n` otherwise.
    Grover,
    /// `f(n/4) = n`, `w` elsewhere.
    Spike,
    /// `f(n) = -1`, `w` elsewhere.
    Precipice,
    /// `f(w) = w + n^alpha` on `n/4 - c n^alpha / 2 < w < n/4 + c n^alpha / 2`.
    AlphaRectangle { alpha: f64, c: f64 },
    /// `f(0) = 2`, `w` elsewhere (convex in the Hamming weight).
    ConvexBump,
    /// Explicit table of length `n + 1`.
    Custom { table: Vec<f64> },
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::PlainHw => "plain-hw",
            ProblemKind::FixedPlateau { .. } => "fixed-plateau",
            ProblemKind::Reichardt { .. } => "reichardt",
            ProblemKind::MovingPlateau { .. } => "moving-plateau",
            ProblemKind::Grover => "grover",
            ProblemKind::Spike => "spike",
            ProblemKind::Precipice => "precipice",
            ProblemKind::AlphaRectangle { .. } => "alpha-rectangle",
            ProblemKind::ConvexBump => "convex-bump",
            ProblemKind::Custom { .. } => "custom",
        }
    }
}

/// Serialisable problem description: `{"kind": "...", "n": 512, ...params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n: usize,
    #[serde(flatten)]
    pub kind: ProblemKind,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<CostFunction> {
        make_problem(self.kind.clone(), self.n)
    }
}

/// Immutable cost table `f(w)` for `w = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    n: usize,
    kind: ProblemKind,
    table: Vec<f64>,
    w_opt: usize,
}

/// `round(n / 4)`, halves rounded up.
pub fn quarter(n: usize) -> usize {
    (n + 2) / 4
}

/// Perturbation window `(l, u)` (exclusive bounds, as reals) of the
/// α-rectangle, centred at the rounded `n/4`.
pub fn alpha_rectangle_window(n: usize, alpha: f64, c: f64) -> (f64, f64) {
    let half = 0.5 * c * (n as f64).powf(alpha);
    let centre = quarter(n) as f64;
    (centre - half, centre + half)
}

/// Builds a catalog cost function. Parameters are validated before the table
/// is filled.
pub fn make_problem(kind: ProblemKind, n: usize) -> Result<CostFunction> {
    if n < 1 {
        return Err(Error::param("n must be at least 1"));
    }
    let table: Vec<f64> = match &kind {
        ProblemKind::PlainHw => (0..=n).map(|w| w as f64).collect(),
        ProblemKind::FixedPlateau { l, u } => {
            check_window(*l, *u, n)?;
            (0..=n)
                .map(|w| if *l < w && w < *u { (*u - 1) as f64 } else { w as f64 })
                .collect()
        }
        ProblemKind::Reichardt { l, u, h } => {
            check_window(*l, *u, n)?;
            if !h.is_finite() || *h < 0.0 {
                return Err(Error::param(format!("perturbation height h must be finite and >= 0, got {h}")));
            }
            (0..=n)
                .map(|w| if *l < w && w < *u { w as f64 + h } else { w as f64 })
                .collect()
        }
        ProblemKind::MovingPlateau { span } => {
            let l = quarter(n);
            let u = l + span;
            if *span == 0 {
                return Err(Error::param("moving plateau span u - l must be >= 1"));
            }
            check_window(l, u, n)?;
            (0..=n)
                .map(|w| if l < w && w < u { (u - 1) as f64 } else { w as f64 })
                .collect()
        }
        ProblemKind::Grover => (0..=n).map(|w| if w == 0 { 0.0 } else { n as f64 }).collect(),
        ProblemKind::Spike => {
            let q = quarter(n);
            if q == 0 {
                return Err(Error::param(format!("spike needs n/4 >= 1 after rounding, got n = {n}")));
            }
            (0..=n)
                .map(|w| if w == q { n as f64 } else { w as f64 })
                .collect()
        }
        ProblemKind::Precipice => (0..=n).map(|w| if w == n { -1.0 } else { w as f64 }).collect(),
        ProblemKind::AlphaRectangle { alpha, c } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(Error::param(format!("alpha must lie in (0, 1), got {alpha}")));
            }
            if !(*c > 0.0) || !c.is_finite() {
                return Err(Error::param(format!("rectangle aspect c must be > 0, got {c}")));
            }
            let height = (n as f64).powf(*alpha);
            let (lo, hi) = alpha_rectangle_window(n, *alpha, *c);
            (0..=n)
                .map(|w| {
                    let x = w as f64;
                    if lo < x && x < hi {
                        x + height
                    } else {
                        x
                    }
                })
                .collect()
        }
        ProblemKind::ConvexBump => (0..=n).map(|w| if w == 0 { 2.0 } else { w as f64 }).collect(),
        ProblemKind::Custom { table } => {
            if table.len() != n + 1 {
                return Err(Error::param(format!(
                    "custom table needs n + 1 = {} entries, got {}",
                    n + 1,
                    table.len()
                )));
            }
            if table.iter().any(|v| !v.is_finite()) {
                return Err(Error::param("custom table entries must be finite"));
            }
            table.clone()
        }
    };
    let w_opt = argmin(&table);
    Ok(CostFunction { n, kind, table, w_opt })
}

fn check_window(l: usize, u: usize, n: usize) -> Result<()> {
    if l >= u {
        return Err(Error::param(format!("plateau needs l < u, got l = {l}, u = {u}")));
    }
    if u > n {
        return Err(Error::param(format!("plateau needs u <= n, got u = {u}, n = {n}")));
    }
    Ok(())
}

fn argmin(table: &[f64]) -> usize {
    let mut best = 0;
    for (w, &v) in table.iter().enumerate() {
        if v < table[best] {
            best = w;
        }
    }
    best
}

impl CostFunction {
    /// Wraps an explicit table as a [`ProblemKind::Custom`] problem.
    pub fn from_table(table: Vec<f64>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::param("table must have at least two entries"));
        }
        let n = table.len() - 1;
        make_problem(ProblemKind::Custom { table }, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            n: self.n,
            kind: self.kind.clone(),
        }
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Hamming weight of the (first) global minimum.
    pub fn w_opt(&self) -> usize {
        self.w_opt
    }

    pub fn min_value(&self) -> f64 {
        self.table[self.w_opt]
    }

    /// `f(w)` with bounds checking.
    pub fn eval(&self, w: usize) -> Result<f64> {
        self.table
            .get(w)
            .copied()
            .ok_or_else(|| Error::Range(format!("Hamming weight {w} outside [0, {}]", self.n)))
    }

    /// `f(w)` without the `Result`; panics on out-of-range `w`.
    #[inline]
    pub fn at(&self, w: usize) -> f64 {
        self.table[w]
    }

    /// The perturbation window `(l, u)` and its height `h` when the problem
    /// has the form `w + h` (or a plateau) on `l < w < u`.
    pub fn perturbation_window(&self) -> Option<(usize, usize)> {
        match &self.kind {
            ProblemKind::FixedPlateau { l, u } | ProblemKind::Reichardt { l, u, .. } => Some((*l, *u)),
            ProblemKind::MovingPlateau { span } => {
                let l = quarter(self.n);
                Some((l, l + span))
            }
            _ => None,
        }
    }
}

/// Free-function form of [`CostFunction::eval`].
pub fn eval_cost(cf: &CostFunction, w: usize) -> Result<f64> {
    cf.eval(w)
}

/// XOR mask applied to bit strings before the cost is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorMask {
    bits: Vec<bool>,
}

impl XorMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        parse_bits(s).map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }
}

/// Parses a `0`/`1` string into bits.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::param(format!("bit strings may only contain 0 and 1, found {other:?}"))),
        })
        .collect()
}

pub fn hamming_weight(x: &[bool]) -> usize {
    x.iter().filter(|&&b| b).count()
}

/// `f(|x XOR mask|)`.
pub fn masked_cost(cf: &CostFunction, x: &[bool], mask: &XorMask) -> Result<f64> {
    if x.len() != cf.n() || mask.len() != cf.n() {
        return Err(Error::param(format!(
            "bit string ({}) and mask ({}) must both have length n = {}",
            x.len(),
            mask.len(),
            cf.n()
        )));
    }
    let w = x.iter().zip(mask.bits()).filter(|(a, b)| *a != *b).count();
    Ok(cf.at(w))
}

/// Coefficients `J_r` of the cost Hamiltonian in the Pauli-z product basis,
/// `H_P = sum_r J_r prod_i (sigma^z_i)^{r_i}`. Bit `i` of the key is `r_i`.
/// Only coefficients with `|J_r| > 1e-12` are returned.
pub fn pauli_z_expansion(cf: &CostFunction) -> Result<BTreeMap<u32, f64>> {
    let n = cf.n();
    if n > PAULI_MAX_N {
        return Err(Error::Capability(format!(
            "Pauli-z expansion enumerates 2^n strings; n = {n} exceeds the cap of {PAULI_MAX_N}"
        )));
    }
    let size = 1usize << n;
    let mut coeffs: Vec<f64> = (0..size).map(|x| cf.at((x as u32).count_ones() as usize)).collect();
    // In-place Walsh–Hadamard transform: coeffs[r] <- sum_x f(x) (-1)^{x.r}.
    let mut h = 1;
    while h < size {
        for block in (0..size).step_by(2 * h) {
            for i in block..block + h {
                let a = coeffs[i];
                let b = coeffs[i + h];
                coeffs[i] = a + b;
                coeffs[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / size as f64;
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(r, v)| (r as u32, v * scale))
        .filter(|(_, v)| v.abs() > 1e-12)
        .collect())
}

/// Largest `|r|` among the nonzero Pauli-z coefficients (the locality of
/// `H_P`). Zero for a constant cost.
pub fn locality(expansion: &BTreeMap<u32, f64>) -> u32 {
    expansion.keys().map(|r| r.count_ones()).max().unwrap_or(0)
}
