//! Embedded Runge-Kutta 4(5) integrators with adaptive step size:
//! Dormand-Prince (with dense output) and Cash-Karp.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    #[default]
    DormandPrince,
    CashKarp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial step; 0 selects one automatically.
    pub h0: f64,
    pub max_steps: u64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, h0: 0.0, max_steps: 1_000_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const DP_D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

// Cash-Karp tableau.
const CK_C: [f64; 6] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0];
const CK_A: [[f64; 5]; 6] = [
    [0.0; 5],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0, 0.0, 0.0],
    [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0, 0.0],
    [1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0, 44275.0 / 110592.0, 253.0 / 4096.0],
];
const CK_B5: [f64; 6] = [37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0];
const CK_B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Integrates `y' = f(t, y)` from `t0` to `t1` (`t1 > t0`), calling
/// `on_sample(t, y)` at every entry of `samples` (ascending, inside
/// `[t0, t1]`). Returns the state at `t1`.
pub fn integrate<F, C>(
    method: Integrator,
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    samples: &[f64],
    ctl: &StepControl,
    mut on_sample: C,
) -> Result<(Vec<f64>, OdeStats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    C: FnMut(f64, &[f64]),
{
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::param(format!("integration interval [{t0}, {t1}] is empty or not finite")));
    }
    if !(ctl.rel_tol > 0.0 && ctl.abs_tol > 0.0) {
        return Err(Error::param("integrator tolerances must be positive"));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) || samples.iter().any(|&s| s < t0 || s > t1) {
        return Err(Error::param("sample points must be ascending and inside the integration interval"));
    }
    let dim = y0.len();
    let mut st = Stepper::new(method, dim);
    let mut stats = OdeStats::default();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut next = 0usize;
    while next < samples.len() && samples[next] <= t0 {
        on_sample(t0, &y);
        next += 1;
    }
    f(t, &y, &mut st.k[0]);
    stats.rhs_evals += 1;
    let mut h = if ctl.h0 > 0.0 { ctl.h0 } else { initial_step(&mut f, t, &y, &st.k[0].clone(), ctl, t1 - t0, &mut stats) };
    let h_floor = 1e-14 * (t1 - t0).abs().max(t0.abs());
    let mut facold = 1e-4f64;
    let beta = if method == Integrator::DormandPrince { 0.04 } else { 0.0 };
    let expo = 0.2 - beta * 0.75;
    let mut last_rejected = false;
    let mut ynew = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    loop {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::numeric("ode", t, format!("step budget {} exhausted", ctl.max_steps)));
        }
        let mut clamp_to_sample = false;
        let mut last = false;
        let h_proposed = h;
        if t + h >= t1 {
            h = t1 - t;
            last = true;
        } else if method == Integrator::CashKarp && next < samples.len() && t + h >= samples[next] {
            h = samples[next] - t;
            clamp_to_sample = true;
        }
        if h < h_floor {
            return Err(Error::numeric("ode", t, format!("step size underflow (h = {h:e})")));
        }
        st.step(method, &mut f, t, h, &y, &mut ynew, &mut err, &mut stats);
        let en = error_norm(&err, &y, &ynew, ctl);
        if !en.is_finite() {
            h *= FAC_MIN;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }
        let fac11 = en.powf(expo);
        if en <= 1.0 {
            let tnew = if last {
                t1
            } else if clamp_to_sample {
                samples[next]
            } else {
                t + h
            };
            if method == Integrator::DormandPrince {
                let mut prepared = false;
                while next < samples.len() && samples[next] <= tnew {
                    if !prepared {
                        st.prepare_dense(h, &y, &ynew);
                        prepared = true;
                    }
                    let theta = ((samples[next] - t) / h).clamp(0.0, 1.0);
                    let yi = st.dense(theta);
                    on_sample(samples[next], &yi);
                    next += 1;
                }
                // FSAL: stage 7 is the derivative at the new point.
                st.k.swap(0, 6);
            } else {
                t = tnew;
                y.copy_from_slice(&ynew);
                f(t, &y, &mut st.k[0]);
                stats.rhs_evals += 1;
                while next < samples.len() && samples[next] <= t {
                    on_sample(samples[next], &y);
                    next += 1;
                }
            }
            if method == Integrator::DormandPrince {
                t = tnew;
                y.copy_from_slice(&ynew);
            }
            stats.accepted += 1;
            let fac = (fac11 / facold.powf(beta) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = en.max(1e-4);
            let mut hnew = h / fac;
            if last_rejected {
                hnew = hnew.min(h);
            } else if clamp_to_sample {
                hnew = hnew.max(h_proposed);
            }
            last_rejected = false;
            if t >= t1 {
                break;
            }
            h = hnew;
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
    Ok((y, stats))
}

/// `out = y + h * sum_j a_j k_j`.
fn combine(out: &mut [f64], y: &[f64], h: f64, a: &[f64], k: &[Vec<f64>]) {
    out.copy_from_slice(y);
    for (aj, kj) in a.iter().zip(k) {
        if *aj != 0.0 {
            let c = h * aj;
            for (o, v) in out.iter_mut().zip(kj) {
                *o += c * v;
            }
        }
    }
}

fn error_norm(err: &[f64], y: &[f64], ynew: &[f64], ctl: &StepControl) -> f64 {
    let mut acc = 0.0;
    for i in 0..err.len() {
        let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(ynew[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    (acc / err.len().max(1) as f64).sqrt()
}

fn initial_step<F: FnMut(f64, &[f64], &mut [f64])>(
    f: &mut F,
    t: f64,
    y: &[f64],
    f0: &[f64],
    ctl: &StepControl,
    span: f64,
    stats: &mut OdeStats,
) -> f64 {
    let dim = y.len();
    let sc: Vec<f64> = y.iter().map(|v| ctl.abs_tol + ctl.rel_tol * v.abs()).collect();
    let rms = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / dim.max(1) as f64).sqrt();
    let d0 = rms(y);
    let d1 = rms(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; dim];
    f(t + h0, &y1, &mut f1);
    stats.rhs_evals += 1;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

struct Stepper {
    k: Vec<Vec<f64>>,
    tmp: Vec<f64>,
    rcont: [Vec<f64>; 5],
}

impl Stepper {
    fn new(method: Integrator, dim: usize) -> Self {
        let stages = match method {
            Integrator::DormandPrince => 7,
            Integrator::CashKarp => 6,
        };
        Self {
            k: (0..stages).map(|_| vec![0.0; dim]).collect(),
            tmp: vec![0.0; dim],
            rcont: Default::default(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn step<F: FnMut(f64, &[f64], &mut [f64])>(
        &mut self,
        method: Integrator,
        f: &mut F,
        t: f64,
        h: f64,
        y: &[f64],
        ynew: &mut [f64],
        err: &mut [f64],
        stats: &mut OdeStats,
    ) {
        match method {
            Integrator::DormandPrince => {
                for s in 1..7 {
                    combine(&mut self.tmp, y, h, &DP_A[s][..s], &self.k);
                    let (_, after) = self.k.split_at_mut(s);
                    f(t + DP_C[s] * h, &self.tmp, &mut after[0]);
                    stats.rhs_evals += 1;
                }
                // the last stage is evaluated at the 5th-order solution
                ynew.copy_from_slice(&self.tmp);
                err.iter_mut().for_each(|e| *e = 0.0);
                for (j, ej) in DP_E.iter().enumerate() {
                    if *ej != 0.0 {
                        let c = h * ej;
                        for (e, k) in err.iter_mut().zip(&self.k[j]) {
                            *e += c * k;
                        }
                    }
                }
            }
            Integrator::CashKarp => {
                for s in 1..6 {
                    combine(&mut self.tmp, y, h, &CK_A[s][..s], &self.k);
                    let (_, after) = self.k.split_at_mut(s);
                    f(t + CK_C[s] * h, &self.tmp, &mut after[0]);
                    stats.rhs_evals += 1;
                }
                combine(ynew, y, h, &CK_B5, &self.k);
                err.iter_mut().for_each(|e| *e = 0.0);
                for j in 0..6 {
                    let c = h * (CK_B5[j] - CK_B4[j]);
                    for (e, k) in err.iter_mut().zip(&self.k[j]) {
                        *e += c * k;
                    }
                }
            }
        }
    }

    fn prepare_dense(&mut self, h: f64, y: &[f64], ynew: &[f64]) {
        let dim = y.len();
        for r in self.rcont.iter_mut() {
            r.resize(dim, 0.0);
        }
        for i in 0..dim {
            let dy = ynew[i] - y[i];
            let bspl = h * self.k[0][i] - dy;
            self.rcont[0][i] = y[i];
            self.rcont[1][i] = dy;
            self.rcont[2][i] = bspl;
            self.rcont[3][i] = dy - h * self.k[6][i] - bspl;
            let mut d = 0.0;
            for (j, dj) in DP_D.iter().enumerate() {
                if *dj != 0.0 {
                    d += dj * self.k[j][i];
                }
            }
            self.rcont[4][i] = h * d;
        }
    }

    fn dense(&self, theta: f64) -> Vec<f64> {
        let th1 = 1.0 - theta;
        let r = &self.rcont;
        (0..r[0].len())
            .map(|i| r[0][i] + theta * (r[1][i] + th1 * (r[2][i] + theta * (r[3][i] + th1 * r[4][i]))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = -y[0];
    }

    #[test]
    fn harmonic_oscillator_both_methods() {
        for method in [Integrator::DormandPrince, Integrator::CashKarp] {
            let samples: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
            let mut seen = Vec::new();
            let ctl = StepControl { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() };
            let (y, stats) = integrate(method, oscillator, 0.0, 10.0, &[1.0, 0.0], &samples, &ctl, |t, y| {
                seen.push((t, y[0]))
            })
            .unwrap();
            assert!((y[0] - 10f64.cos()).abs() < 1e-8, "{method:?} {}", y[0]);
            assert!((y[1] + 10f64.sin()).abs() < 1e-8);
            assert_eq!(seen.len(), samples.len());
            for (t, v) in seen {
                assert!((v - t.cos()).abs() < 1e-7, "{method:?} t={t} {v}");
            }
            assert!(stats.accepted > 0);
        }
    }

    #[test]
    fn exponential_decay_order() {
        let (y, _) = integrate(
            Integrator::DormandPrince,
            |_t, y: &[f64], dy: &mut [f64]| dy[0] = -y[0],
            0.0,
            5.0,
            &[1.0],
            &[],
            &StepControl::default(),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - (-5f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctl = StepControl::default();
        assert!(integrate(Integrator::CashKarp, oscillator, 1.0, 0.0, &[1.0, 0.0], &[], &ctl, |_, _| {}).is_err());
        assert!(integrate(Integrator::CashKarp, oscillator, 0.0, 1.0, &[1.0, 0.0], &[2.0], &ctl, |_, _| {}).is_err());
    }
}
