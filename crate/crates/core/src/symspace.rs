//! Linear algebra in the (n+1)-dimensional Dicke basis: the annealing
//! Hamiltonian, its low-lying spectrum, gaps and simple observables.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{golden_section, LnFactorials};
use crate::problems::CostFunction;
pub use crate::tridiag::TridiagonalOperator;

/// Pure state over Dicke states |w>, w = 0..=n.
#[derive(Debug, Clone, PartialEq)]
pub struct SymState {
    pub amps: Vec<Complex64>,
}

impl SymState {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: &[f64]) -> Self {
        Self { amps: amps.iter().map(|&a| Complex64::new(a, 0.0)).collect() }
    }

    /// Dicke state |w> for `n` qubits.
    pub fn basis(n: usize, w: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
        amps[w] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// |+>^n, amplitudes sqrt(C(n,w)) / 2^(n/2).
    pub fn plus_state(n: usize) -> Self {
        coherent_state(n, std::f64::consts::FRAC_PI_2, 0.0)
    }

    pub fn n(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// <self|other>.
    pub fn inner(&self, other: &SymState) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::param(format!("state length mismatch: {} vs {}", self.len(), other.len())));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Lowest eigenpairs of a tridiagonal operator, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<SymState>>,
}

impl Spectrum {
    pub fn gap(&self) -> Option<f64> {
        (self.eigenvalues.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Range(format!("s = {s} outside [0, 1]")));
    }
    Ok(())
}

/// H(s) = (1-s) H_D + s H_P in the Dicke basis.
pub fn build_hamiltonian(cf: &CostFunction, s: f64) -> Result<TridiagonalOperator> {
    check_s(s)?;
    let n = cf.n();
    let nf = n as f64;
    let diag = (0..=n).map(|w| (1.0 - s) * nf / 2.0 + s * cf.at(w)).collect();
    let offdiag = (0..n)
        .map(|w| -0.5 * (1.0 - s) * (((n - w) * (w + 1)) as f64).sqrt())
        .collect();
    TridiagonalOperator::new(diag, offdiag)
}

/// dH/ds = H_P - H_D for the linear schedule.
pub fn hamiltonian_derivative(cf: &CostFunction) -> TridiagonalOperator {
    let n = cf.n();
    let nf = n as f64;
    TridiagonalOperator {
        diag: (0..=n).map(|w| cf.at(w) - nf / 2.0).collect(),
        offdiag: (0..n).map(|w| 0.5 * (((n - w) * (w + 1)) as f64).sqrt()).collect(),
    }
}

pub fn eigen_spectrum(t: &TridiagonalOperator, k: usize) -> Result<Spectrum> {
    check_k(t, k)?;
    let (vals, vecs) = t.lowest_eigenpairs(k)?;
    Ok(Spectrum {
        eigenvalues: vals,
        eigenvectors: Some(vecs.iter().map(|v| SymState::from_real(v)).collect()),
    })
}

/// Eigenvalues only.
pub fn eigen_values(t: &TridiagonalOperator, k: usize) -> Result<Spectrum> {
    check_k(t, k)?;
    Ok(Spectrum { eigenvalues: t.lowest_eigenvalues(k), eigenvectors: None })
}

fn check_k(t: &TridiagonalOperator, k: usize) -> Result<()> {
    if k == 0 || k > t.dim() {
        return Err(Error::param(format!("k = {k} must lie in 1..={}", t.dim())));
    }
    Ok(())
}

/// Gap between the two lowest levels of H(s).
pub fn gap_at(cf: &CostFunction, s: f64) -> Result<f64> {
    let h = build_hamiltonian(cf, s)?;
    if h.dim() < 2 {
        return Ok(0.0);
    }
    let v = h.lowest_eigenvalues(2);
    Ok((v[1] - v[0]).max(0.0))
}

/// Ground and first excited eigenvectors (real, unit norm) of H(s).
pub fn low_pair(cf: &CostFunction, s: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    build_hamiltonian(cf, s)?.lowest_eigenpairs(2)
}

/// Instantaneous ground state, phase fixed so the largest component is positive.
pub fn ground_state(cf: &CostFunction, s: f64) -> Result<Vec<f64>> {
    let h = build_hamiltonian(cf, s)?;
    let (_, mut vecs) = h.lowest_eigenpairs(1)?;
    let mut v = vecs.pop().expect("one eigenvector");
    align_phase(&mut v);
    Ok(v)
}

/// Minimum gap location and value with the default 1e-3 grid.
pub fn min_gap(cf: &CostFunction) -> Result<(f64, f64)> {
    min_gap_with(cf, 1e-3)
}

/// Grid search with spacing `grid_step`, golden-section refinement to 1e-6,
/// then a root solve on the Hellmann-Feynman slope of the gap.
pub fn min_gap_with(cf: &CostFunction, grid_step: f64) -> Result<(f64, f64)> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::param("grid_step must lie in (0, 0.5]"));
    }
    if cf.n() == 0 {
        return Ok((0.0, 0.0));
    }
    let m = (1.0 / grid_step).round() as usize;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=m {
        let g = gap_at(cf, i as f64 / m as f64)?;
        if g < best.1 {
            best = (i, g);
        }
    }
    if best.1 == 0.0 {
        return Ok((best.0 as f64 / m as f64, 0.0));
    }
    let lo = best.0.saturating_sub(1) as f64 / m as f64;
    let hi = ((best.0 + 1).min(m)) as f64 / m as f64;
    let (s_gs, g_gs) = golden_section(|s| gap_at(cf, s).unwrap_or(f64::INFINITY), lo, hi, 1e-6);
    let (mut s_best, mut g_best) = (s_gs, g_gs);
    if best.1 < g_best {
        s_best = best.0 as f64 / m as f64;
        g_best = best.1;
    }
    // Polish on the derivative of the gap when it changes sign across a
    // small bracket around the golden-section estimate.
    let hp = hamiltonian_derivative(cf);
    let slope = |s: f64| -> Option<f64> {
        let (_, v) = low_pair(cf, s).ok()?;
        Some(hp.bilinear(&v[1], &v[1]) - hp.bilinear(&v[0], &v[0]))
    };
    let a = (s_best - 2e-6).max(0.0);
    let b = (s_best + 2e-6).min(1.0);
    if let (Some(ga), Some(gb)) = (slope(a), slope(b)) {
        if ga < 0.0 && gb > 0.0 {
            let (mut a, mut b) = (a, b);
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if b - a < 1e-14 {
                    break;
                }
                match slope(mid) {
                    Some(g) if g < 0.0 => a = mid,
                    Some(_) => b = mid,
                    None => break,
                }
            }
            let s_root = 0.5 * (a + b);
            let g_root = gap_at(cf, s_root)?;
            if g_root <= g_best * (1.0 + 1e-12) {
                s_best = s_root;
                g_best = g_root;
            }
        }
    }
    Ok((s_best, g_best))
}

/// max_s |<e0| dH/ds |e1>| / Gap(s)^2.
pub fn adiabatic_numerator(cf: &CostFunction) -> Result<f64> {
    max_over_schedule(cf, |me, g| me / (g * g))
}

/// `max_s |⟨E_1(s)|∂_s H|E_0(s)⟩|`, the bare matrix element without the gap.
pub fn adiabatic_matrix_element(cf: &CostFunction) -> Result<f64> {
    max_over_schedule(cf, |me, _| me)
}

/// Maximises `score(|⟨E_1|∂_s H|E_0⟩|, gap)` over `s ∈ [0, 1]`: a 1e-3 grid
/// followed by golden-section refinement around the best grid point.
fn max_over_schedule(cf: &CostFunction, score: impl Fn(f64, f64) -> f64) -> Result<f64> {
    if cf.n() == 0 {
        return Err(Error::param("adiabatic condition needs n >= 1"));
    }
    let hp = hamiltonian_derivative(cf);
    let value = |s: f64| -> Result<f64> {
        let (vals, v) = low_pair(cf, s)?;
        let g = vals[1] - vals[0];
        if g <= 0.0 {
            return Err(Error::numeric("symspace", s, "gap closes in adiabatic condition"));
        }
        Ok(score(hp.bilinear(&v[0], &v[1]).abs(), g))
    };
    let m = 1000;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..=m {
        let r = value(i as f64 / m as f64)?;
        if r > best.1 {
            best = (i, r);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 / m as f64;
    let hi = ((best.0 + 1).min(m)) as f64 / m as f64;
    let (_, neg) = golden_section(|s| -value(s).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-7);
    Ok(best.1.max(-neg))
}

/// Symmetric spin-coherent state with every qubit at polar angle `theta`
/// and azimuth `phi`.
pub fn coherent_state(n: usize, theta: f64, phi: f64) -> SymState {
    let c = (theta / 2.0).cos();
    let sn = (theta / 2.0).sin();
    let lf = LnFactorials::new(n);
    let amps = (0..=n)
        .map(|w| {
            let k = n - w;
            let mag = if (k > 0 && c == 0.0) || (w > 0 && sn == 0.0) {
                0.0
            } else {
                let lc = if k > 0 { k as f64 * c.abs().ln() } else { 0.0 };
                let ls = if w > 0 { w as f64 * sn.abs().ln() } else { 0.0 };
                let sign = if (c < 0.0 && k % 2 == 1) ^ (sn < 0.0 && w % 2 == 1) { -1.0 } else { 1.0 };
                sign * (0.5 * lf.ln_binom(n, w) + lc + ls).exp()
            };
            Complex64::from_polar(1.0, w as f64 * phi) * mag
        })
        .collect();
    SymState { amps }
}

/// Pure-state trace distance sqrt(1 - |<a|b>|^2).
pub fn trace_distance(a: &SymState, b: &SymState) -> Result<f64> {
    let ov = a.inner(b)?.norm_sqr() / (a.norm().powi(2) * b.norm().powi(2));
    Ok((1.0 - ov).max(0.0).sqrt())
}

/// Expected Hamming weight.
pub fn hw_expectation(psi: &SymState) -> f64 {
    psi.amps.iter().enumerate().map(|(w, a)| w as f64 * a.norm_sqr()).sum()
}

/// Hamming weight expectation of a real vector of Dicke amplitudes.
pub fn hw_expectation_real(v: &[f64]) -> f64 {
    v.iter().enumerate().map(|(w, a)| w as f64 * a * a).sum()
}

/// P_i = |<v_i|psi>|^2 for every eigenvector in `spec`.
pub fn populations(psi: &SymState, spec: &Spectrum) -> Result<Vec<f64>> {
    let vecs = spec
        .eigenvectors
        .as_ref()
        .ok_or_else(|| Error::param("spectrum carries no eigenvectors"))?;
    vecs.iter().map(|v| Ok(v.inner(psi)?.norm_sqr())).collect()
}

/// Flip the sign so the largest-magnitude component is positive.
pub fn align_phase(v: &mut [f64]) {
    let mut idx = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

const FD_STEP: f64 = 1e-5;
const GAP_FLOOR: f64 = 1e-10;

/// ||d psi_GS / ds|| at `s` by central differences of phase-aligned ground
/// states (one-sided second-order formula within `FD_STEP` of an endpoint).
pub fn eigenpath_speed(cf: &CostFunction, s: f64) -> Result<f64> {
    check_s(s)?;
    let h = FD_STEP;
    let g = gap_at(cf, s)?;
    if g < GAP_FLOOR {
        return Err(Error::numeric("symspace", s, format!("ground-state gap {g:e} below {GAP_FLOOR:e}")));
    }
    let state = |x: f64| ground_state(cf, x);
    let align = |v: &mut Vec<f64>, r: &[f64]| {
        if v.iter().zip(r).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    };
    let deriv: Vec<f64> = if s - h >= 0.0 && s + h <= 1.0 {
        let a = state(s - h)?;
        let mut b = state(s + h)?;
        align(&mut b, &a);
        a.iter().zip(&b).map(|(x, y)| (y - x) / (2.0 * h)).collect()
    } else {
        let dir = if s - h < 0.0 { 1.0 } else { -1.0 };
        let v0 = state(s)?;
        let mut v1 = state(s + dir * h)?;
        let mut v2 = state(s + dir * 2.0 * h)?;
        align(&mut v1, &v0);
        align(&mut v2, &v0);
        (0..v0.len())
            .map(|i| dir * (-3.0 * v0[i] + 4.0 * v1[i] - v2[i]) / (2.0 * h))
            .collect()
    };
    Ok(deriv.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// L = integral over [0,1] of ||d psi_GS / ds||, adaptive Gauss-Kronrod.
pub fn eigenpath_length(cf: &CostFunction) -> Result<f64> {
    let mut total = 0.0;
    let mut stack = vec![(0.0f64, 1.0f64, 0usize)];
    let tol = 1e-7;
    while let Some((a, b, depth)) = stack.pop() {
        let (k, gk) = gauss_kronrod(|s| eigenpath_speed(cf, s), a, b)?;
        let err = (k - gk).abs();
        if err <= tol * (b - a) || depth >= 30 {
            total += k;
        } else {
            let m = 0.5 * (a + b);
            stack.push((a, m, depth + 1));
            stack.push((m, b, depth + 1));
        }
    }
    Ok(total)
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod and embedded 7-point Gauss estimates on [a, b].
pub(crate) fn gauss_kronrod<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = GK_WK[7] * fc;
    let mut g = GK_WG[3] * fc;
    for i in 0..7 {
        let f1 = f(c - h * GK_X[i])?;
        let f2 = f(c + h * GK_X[i])?;
        k += GK_WK[i] * (f1 + f2);
        if i % 2 == 1 {
            g += GK_WG[i / 2] * (f1 + f2);
        }
    }
    Ok((k * h, g * h))
}
