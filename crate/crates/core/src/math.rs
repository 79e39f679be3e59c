//! Small numerical helpers shared by the solvers: log-binomials, harmonic
//! numbers and binomial-weighted sums evaluated in log space.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Table of `ln k!` for `k = 0..=n`, accumulated exactly from `ln k`.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    #[inline]
    pub fn ln_fact(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `ln C(n, k)`; `-inf` when `k > n`.
    #[inline]
    pub fn ln_binom(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// `ln C(n, k)` without a precomputed table.
pub fn ln_binom(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc = 0.0;
    for i in 0..k {
        acc += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    acc
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`, summed smallest-first.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Binomial probability mass `C(n,w) p^w (1-p)^(n-w)` for every `w`,
/// computed in log space so that `n` in the thousands does not overflow.
/// Endpoints `p = 0` and `p = 1` give exact point masses.
pub fn binomial_pmf(lf: &LnFactorials, n: usize, p: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    binomial_pmf_into(lf, n, p, &mut out);
    out
}

pub fn binomial_pmf_into(lf: &LnFactorials, n: usize, p: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), n + 1);
    if p <= 0.0 {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[0] = 1.0;
        return;
    }
    if p >= 1.0 {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[n] = 1.0;
        return;
    }
    let lp = p.ln();
    let lq = (-p).ln_1p();
    for (w, v) in out.iter_mut().enumerate() {
        *v = (lf.ln_binom(n, w) + w as f64 * lp + (n - w) as f64 * lq).exp();
    }
}

/// Bernstein-weighted sum `sum_w c[w] C(m,w) p^w (1-p)^(m-w)` with
/// `m = c.len() - 1`. The weights are generated by recurrence outward from
/// the mode, so the cost is O(m) with a single `exp`.
pub fn bernstein_sum(lf: &LnFactorials, c: &[f64], p: f64) -> f64 {
    let m = c.len() - 1;
    if p <= 0.0 {
        return c[0];
    }
    if p >= 1.0 {
        return c[m];
    }
    let q = 1.0 - p;
    let k = (((m + 1) as f64 * p).floor() as usize).min(m);
    let peak = (lf.ln_binom(m, k) + k as f64 * p.ln() + (m - k) as f64 * q.ln()).exp();
    let cutoff = peak * 1e-20;
    let r = p / q;
    let mut sum = c[k] * peak;
    let mut t = peak;
    for w in k..m {
        t *= (m - w) as f64 / (w + 1) as f64 * r;
        if t < cutoff {
            break;
        }
        sum += c[w + 1] * t;
    }
    let mut t = peak;
    for w in (1..=k).rev() {
        t *= w as f64 / (m - w + 1) as f64 / r;
        if t < cutoff {
            break;
        }
        sum += c[w - 1] * t;
    }
    sum
}

/// Sum of `g(x_i)` with compensated (Kahan–Neumaier) accumulation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
/// Returns `(x_min, f(x_min))` once the bracket is narrower than `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Plain bisection for a sign change of `g` on `[a, b]`; `g(a)` and `g(b)`
/// must have opposite signs (or one of them be zero).
pub fn bisect<F: FnMut(f64) -> f64>(mut g: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut ga = g(a);
    if ga == 0.0 {
        return a;
    }
    let gb = g(b);
    if gb == 0.0 {
        return b;
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_binom_matches_table() {
        let lf = LnFactorials::new(600);
        for &(n, k) in &[(10, 3), (512, 256), (600, 1), (7, 7)] {
            assert!((lf.ln_binom(n, k) - ln_binom(n, k)).abs() < 1e-9 * (1.0 + ln_binom(n, k).abs()));
        }
        assert!((ln_binom(10, 3) - 120f64.ln()).abs() < 1e-13);
        assert_eq!(ln_binom(3, 4), f64::NEG_INFINITY);
    }

    #[test]
    fn binomial_pmf_sums_to_one_at_large_n() {
        let lf = LnFactorials::new(2048);
        let pmf = binomial_pmf(&lf, 2048, 0.37);
        let total: f64 = neumaier_sum(pmf.iter().copied());
        assert!((total - 1.0).abs() < 1e-10, "{total}");
        let mean: f64 = pmf.iter().enumerate().map(|(w, p)| w as f64 * p).sum();
        assert!((mean - 2048.0 * 0.37).abs() < 1e-7);
    }

    #[test]
    fn bernstein_matches_direct_pmf() {
        let lf = LnFactorials::new(300);
        let c: Vec<f64> = (0..=300).map(|w| (w as f64).sin() + 0.01 * w as f64).collect();
        for &p in &[0.0, 1e-3, 0.2, 0.5, 0.93, 1.0] {
            let pmf = binomial_pmf(&lf, 300, p);
            let direct: f64 = pmf.iter().zip(&c).map(|(a, b)| a * b).sum();
            assert!((bernstein_sum(&lf, &c, p) - direct).abs() < 1e-11, "p={p}");
        }
    }

    #[test]
    fn harmonic_small() {
        assert!((harmonic(4) - 25.0 / 12.0).abs() < 1e-15);
        assert_eq!(harmonic(0), 0.0);
    }

    #[test]
    fn golden_and_bisect() {
        let (x, _) = golden_section(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-8);
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }
}
