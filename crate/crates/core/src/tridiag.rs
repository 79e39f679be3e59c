//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! eigenvalues, inverse iteration (with reorthogonalisation inside clusters)
//! for the eigenvectors.

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::param(format!(
                "tridiagonal operator needs len(offdiag) = len(diag) - 1, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::param("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let m = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < m {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Max-row-sum norm, an upper bound on the spectral norm.
    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// `y = T x` for real vectors.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let m = self.dim();
        for i in 0..m {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < m {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// `x^T T y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let m = self.dim();
        let mut acc = 0.0;
        for i in 0..m {
            acc += x[i] * self.diag[i] * y[i];
            if i + 1 < m {
                acc += self.offdiag[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
            }
        }
        acc
    }

    fn pivmin(&self) -> f64 {
        let emax = self.offdiag.iter().fold(0.0f64, |a, &e| a.max(e * e));
        f64::MIN_POSITIVE.max(emax * f64::MIN_POSITIVE * 4.0)
    }

    /// Number of eigenvalues strictly less than `x` (Sturm count).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let e = self.offdiag[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) to full working precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (glo, ghi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()) + self.pivmin();
        self.eigenvalue_in(k, glo - pad, ghi + pad)
    }

    fn eigenvalue_in(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        let pivmin = self.pivmin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin;
            if hi - lo <= tol || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let (glo, ghi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()) + self.pivmin();
        let mut out = Vec::with_capacity(k);
        let mut lo = glo - pad;
        for j in 0..k {
            let ev = self.eigenvalue_in(j, lo, ghi + pad);
            out.push(ev);
            lo = lo.max(ev - 4.0 * pad);
        }
        out
    }

    /// Eigenvector for the (already converged) eigenvalue `lambda`, made
    /// orthogonal to every vector in `against`. Returns the vector and the
    /// residual `||T v - lambda v||`.
    pub fn inverse_iteration(&self, lambda: f64, against: &[&[f64]], seed: u64) -> Result<(Vec<f64>, f64)> {
        let m = self.dim();
        if m == 1 {
            return Ok((vec![1.0], (self.diag[0] - lambda).abs()));
        }
        let norm = self.norm().max(f64::MIN_POSITIVE);
        let tol = 1e-10 * norm;
        let mut shift = lambda;
        let lu = loop {
            match TridiagLu::factor(self, shift) {
                Some(lu) => break lu,
                None => shift += f64::EPSILON * norm,
            }
        };
        let mut x = start_vector(m, seed);
        orthogonalize(&mut x, against);
        normalize(&mut x);
        let mut tmp = vec![0.0; m];
        let mut resid = f64::INFINITY;
        for _ in 0..8 {
            lu.solve(&mut x);
            orthogonalize(&mut x, against);
            if normalize(&mut x) == 0.0 {
                x = start_vector(m, seed.wrapping_add(7919));
                orthogonalize(&mut x, against);
                normalize(&mut x);
                continue;
            }
            self.apply(&x, &mut tmp);
            resid = tmp
                .iter()
                .zip(&x)
                .map(|(t, v)| (t - lambda * v).powi(2))
                .sum::<f64>()
                .sqrt();
            if resid <= tol {
                return Ok((x, resid));
            }
        }
        if resid <= 1e-8 * norm {
            Ok((x, resid))
        } else {
            Err(Error::numeric(
                "symspace",
                f64::NAN,
                format!("inverse iteration did not converge for eigenvalue {lambda}: residual {resid:e} (norm {norm:e})"),
            ))
        }
    }

    /// The `k` lowest eigenpairs. Eigenvectors are orthonormal; within a
    /// cluster of close eigenvalues they are explicitly reorthogonalised.
    pub fn lowest_eigenpairs(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let values = self.lowest_eigenvalues(k);
        let cluster_tol = 1e-3 * self.norm();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut cluster_start = 0;
        for j in 0..k {
            if j > 0 && values[j] - values[j - 1] > cluster_tol {
                cluster_start = j;
            }
            let against: Vec<&[f64]> = vectors[cluster_start..j].iter().map(|v| v.as_slice()).collect();
            let (v, _) = self.inverse_iteration(values[j], &against, 0x9E37_79B9 ^ j as u64)?;
            vectors.push(v);
        }
        Ok((values, vectors))
    }
}

/// LU factorisation of `T - shift I` with partial pivoting.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &TridiagonalOperator, shift: f64) -> Option<Self> {
        let m = t.dim();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut dl = t.offdiag.clone();
        let mut du = t.offdiag.clone();
        let mut du2 = vec![0.0; m.saturating_sub(2)];
        let mut swapped = vec![false; m.saturating_sub(1)];
        let tiny = f64::EPSILON * t.norm().max(f64::MIN_POSITIVE);
        for i in 0..m - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < m {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[m - 1] == 0.0 {
            d[m - 1] = tiny;
        }
        if d.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some(Self { dl, d, du, du2, swapped })
    }

    fn solve(&self, b: &mut [f64]) {
        let m = self.d.len();
        for i in 0..m - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[m - 1] /= self.d[m - 1];
        if m > 1 {
            b[m - 2] = (b[m - 2] - self.du[m - 2] * b[m - 1]) / self.d[m - 2];
        }
        for i in (0..m.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        // Guard against overflow when the shift is an exact eigenvalue.
        let big = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !big.is_finite() || big > 1e250 {
            let scale = if big.is_finite() { 1.0 / big } else { 0.0 };
            for v in b.iter_mut() {
                *v = if v.is_finite() { *v * scale } else { v.signum() };
            }
        }
    }
}

fn start_vector(m: usize, seed: u64) -> Vec<f64> {
    // Deterministic, well-spread entries in (0.5, 1.5) with alternating
    // magnitudes so no eigenvector is orthogonal to it by symmetry.
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..m)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            0.5 + ((state >> 11) as f64) / ((1u64 << 53) as f64)
        })
        .collect()
}

fn orthogonalize(x: &mut [f64], against: &[&[f64]]) {
    for _ in 0..2 {
        for v in against {
            let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            for (xi, vi) in x.iter_mut().zip(v.iter()) {
                *xi -= dot * vi;
            }
        }
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nrm > 0.0 && nrm.is_finite() {
        for v in x.iter_mut() {
            *v /= nrm;
        }
        nrm
    } else {
        0.0
    }
}
