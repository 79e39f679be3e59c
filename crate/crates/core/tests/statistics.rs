//! Equilibrium and distributional checks of the Monte Carlo samplers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phwo::anneal::AnnealMode;
use phwo::math::LnFactorials;
use phwo::problems::{make_problem, CostFunction, ProblemKind, XorMask};
use phwo::sa::{hamming_descent_time, sa_batch, InitialState, SaConfig};
use phwo::sqa::{sqa_batch, JPerpConvention, SliceParams, SqaConfig, WorldlineConfigState};

/// Pearson χ² over bins with expected count >= 5, returned with its degrees of freedom.
fn chi_square(observed: &[f64], expected: &[f64]) -> (f64, usize) {
    let mut chi = 0.0;
    let mut bins = 0usize;
    for (o, e) in observed.iter().zip(expected) {
        if *e >= 5.0 {
            chi += (o - e).powi(2) / e;
            bins += 1;
        }
    }
    (chi, bins.saturating_sub(1))
}

/// Upper limit well past the 99.9% quantile of χ²(dof).
fn chi_limit(dof: usize) -> f64 {
    let k = dof as f64;
    k + 5.0 * (2.0 * k).sqrt() + 5.0
}

/// Two-sample Kolmogorov–Smirnov statistic.
fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

fn ks_limit(m: usize, n: usize) -> f64 {
    // α = 0.001
    1.95 * ((m + n) as f64 / (m * n) as f64).sqrt()
}

#[test]
fn sa_at_fixed_beta_samples_the_boltzmann_weights() {
    let beta = 0.8;
    let runs = 20_000;
    for kind in [ProblemKind::PlainHw, ProblemKind::FixedPlateau { l: 1, u: 5 }] {
        let cf = make_problem(kind, 8).unwrap();
        let n = cf.n();
        let cfg = SaConfig { mode: AnnealMode::Annealer, seed: 11, ..SaConfig::fixed_beta(beta, 60) };
        let (_, results) = sa_batch(&cf, &cfg, runs).unwrap();
        let mut hist = vec![0.0; n + 1];
        for r in &results {
            hist[r.reported_hw] += 1.0;
        }
        let lf = LnFactorials::new(n);
        let weights: Vec<f64> = (0..=n).map(|w| (lf.ln_binom(n, w) - beta * cf.at(w)).exp()).collect();
        let z: f64 = weights.iter().sum();
        let expected: Vec<f64> = weights.iter().map(|v| v / z * runs as f64).collect();
        let (chi, dof) = chi_square(&hist, &expected);
        assert!(chi < chi_limit(dof), "{}: chi2 = {chi:.1} on {dof} dof", cf.kind().name());
    }
}

#[test]
fn sqa_sweeps_sample_the_path_integral_weights() {
    let cf = CostFunction::from_table(vec![0.0, 1.5, 0.5]).unwrap();
    let (n, nt) = (2usize, 4usize);
    let config = SqaConfig { n_tau: nt, beta: 2.0, ..SqaConfig::new(2) };
    let p = SliceParams::at(0.5, &config);
    let states = 1usize << (n * nt);
    let decode = |code: usize| (0..n * nt).map(|k| code >> k & 1 == 1).collect::<Vec<bool>>();
    let weights: Vec<f64> = (0..states)
        .map(|c| {
            let st = WorldlineConfigState::from_bits(n, nt, decode(c), None).unwrap();
            (-st.action(cf.table(), &p)).exp()
        })
        .collect();
    let z: f64 = weights.iter().sum();

    let (chains, samples, thin) = (20, 10_000, 10);
    let mut hist = vec![0.0; states];
    for chain in 0..chains {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + chain);
        let mut st = WorldlineConfigState::random(n, nt, None, &mut rng).unwrap();
        for _ in 0..200 {
            st.sweep(cf.table(), &p, &mut rng);
        }
        for _ in 0..samples {
            for _ in 0..thin {
                st.sweep(cf.table(), &p, &mut rng);
            }
            let code = (0..n * nt).filter(|&k| st.bit(k / nt, k % nt)).map(|k| 1 << k).sum::<usize>();
            hist[code] += 1.0;
        }
    }
    let total = (chains * samples) as f64;
    let expected: Vec<f64> = weights.iter().map(|w| w / z * total).collect();
    let (chi, dof) = chi_square(&hist, &expected);
    assert!(chi < chi_limit(dof), "chi2 = {chi:.1} on {dof} dof");
}

#[test]
fn sqa_single_qubit_reaches_the_thermal_expectation() {
    let cf = CostFunction::from_table(vec![0.0, 1.0]).unwrap();
    let (beta, nt, s) = (3.0, 256usize, 0.5);
    let config = SqaConfig { n_tau: nt, beta, jperp: JPerpConvention::Trotter, ..SqaConfig::new(2) };
    let p = SliceParams::at(s, &config);
    let (a, b) = (1.0 - s, s);
    let h = (a * a + b * b).sqrt() / 2.0;
    let exact = (1.0 - b / (2.0 * h) * (beta * h).tanh()) / 2.0;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut st = WorldlineConfigState::random(1, nt, None, &mut rng).unwrap();
    for _ in 0..2000 {
        st.sweep(cf.table(), &p, &mut rng);
    }
    let (blocks, per_block) = (50, 4000);
    let means: Vec<f64> = (0..blocks)
        .map(|_| {
            let mut acc = 0.0;
            for _ in 0..per_block {
                st.sweep(cf.table(), &p, &mut rng);
                acc += st.weights().iter().sum::<usize>() as f64 / nt as f64;
            }
            acc / per_block as f64
        })
        .collect();
    let mean = means.iter().sum::<f64>() / blocks as f64;
    let se = (means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / ((blocks - 1) * blocks) as f64).sqrt();
    // Trotter bias is O((β/N_τ)²) ≈ 1e-4 here
    assert!((mean - exact).abs() < 4.0 * se + 5e-4, "<w> = {mean} ± {se}, exact {exact}");
}

#[test]
fn sa_outcome_distribution_is_mask_invariant() {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 2, u: 7 }, 16).unwrap();
    let mask = XorMask::parse("1011001110001011").unwrap();
    let runs = 3000;
    let base = SaConfig { beta_i: 0.2, beta_f: 4.0, ..SaConfig::new(30) };
    let plain = SaConfig { seed: 1, ..base.clone() };
    let masked = SaConfig { seed: 2, mask: Some(mask), ..base };
    let time = |cfg: &SaConfig| -> Vec<f64> {
        sa_batch(&cf, cfg, runs).unwrap().1.iter().map(|r| r.updates_to_gs.map_or(f64::INFINITY, |u| u as f64)).collect()
    };
    let d = ks_statistic(&mut time(&plain), &mut time(&masked));
    assert!(d < ks_limit(runs, runs), "KS D = {d}");
}

#[test]
fn sqa_outcome_distribution_is_mask_invariant() {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 4 }, 8).unwrap();
    let mask = XorMask::parse("01101001").unwrap();
    let runs = 2000;
    let base = SqaConfig { n_tau: 16, beta: 10.0, mode: AnnealMode::Annealer, ..SqaConfig::new(20) };
    let plain = SqaConfig { seed: 3, ..base.clone() };
    let masked = SqaConfig { seed: 4, mask: Some(mask), ..base };
    let hw = |cfg: &SqaConfig| -> Vec<f64> {
        sqa_batch(&cf, cfg, runs).unwrap().1.iter().map(|r| r.reported_hw as f64).collect()
    };
    let d = ks_statistic(&mut hw(&plain), &mut hw(&masked));
    assert!(d < ks_limit(runs, runs), "KS D = {d}");
}

#[test]
fn descent_at_log_n_beta_stays_between_n_log_n_and_n_squared() {
    for n in [2usize, 5, 16, 64, 300, 1000, 4000] {
        let nf = n as f64;
        let t = hamming_descent_time(n, nf.ln()).unwrap();
        assert!(t >= 0.5 * nf * nf.ln() && t <= 4.0 * nf * nf, "n = {n}: {t}");
    }
    let cf = make_problem(ProblemKind::PlainHw, 48).unwrap();
    let cfg = SaConfig { init: InitialState::AllOnes, seed: 9, ..SaConfig::fixed_beta(48f64.ln(), 2000) };
    let (summary, _) = sa_batch(&cf, &cfg, 400).unwrap();
    let mean = summary.mean_updates_to_gs.unwrap();
    let exact = hamming_descent_time(48, 48f64.ln()).unwrap();
    assert_eq!(summary.successes, 400);
    assert!((mean / exact - 1.0).abs() < 0.1, "simulated {mean}, exact {exact}");
}
