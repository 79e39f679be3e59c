use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

use phwo::anneal::AnnealMode;
use phwo::metrics::tts;
use phwo::problems::{pauli_z_expansion, CostFunction, XorMask};
use phwo::sa::{
    hitting_time_linear_solver, sa_run_stream, stefanov_expected_time, BirthDeathChain, InitialState, SaConfig,
    Selection,
};
use phwo::sqa::{SliceParams, SqaConfig, WorldlineConfigState};
use phwo::symspace::coherent_state;
use phwo::tridiag::TridiagonalOperator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn xor(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x != y).collect()
}

fn random_chain(steps: &[(f64, f64)]) -> BirthDeathChain {
    let w = steps.len();
    let mut a = vec![0.0; w + 1];
    let mut b = vec![0.0; w + 1];
    let mut c = vec![0.0; w + 2];
    b[0] = 1.0;
    for (i, &(down, up)) in steps.iter().enumerate() {
        let r = i + 1;
        a[r] = down;
        if r < w {
            c[r + 1] = up;
        }
        b[r] = 1.0 - a[r] - c[r + 1];
    }
    BirthDeathChain::new(a, b, c).unwrap()
}

proptest! {
    #[test]
    fn tridiagonal_eigenvalues_match_dense(
        diag in prop::collection::vec(-5.0f64..5.0, 1..40),
        seed_off in prop::collection::vec(-2.0f64..2.0, 40),
    ) {
        let m = diag.len();
        let off = seed_off[..m - 1].to_vec();
        let t = TridiagonalOperator::new(diag.clone(), off.clone()).unwrap();
        let mut dense = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
        for (i, &o) in off.iter().enumerate() {
            dense[(i, i + 1)] = o;
            dense[(i + 1, i)] = o;
        }
        let mut want: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
        want.sort_by(|a, b| a.total_cmp(b));
        let got = t.lowest_eigenvalues(m);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-10 * (1.0 + t.norm()), "{g} vs {w}");
        }
    }

    #[test]
    fn coherent_states_are_normalised(n in 0usize..300, theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
        let psi = coherent_state(n, theta, phi);
        prop_assert_eq!(psi.len(), n + 1);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tts_is_monotone(t in 0.01f64..100.0, dt in 0.0f64..10.0, p in 0.0f64..1.0, dp in 0.0f64..1.0, p_d in 0.01f64..0.999) {
        let q = (p + dp).min(1.0);
        prop_assert!(tts(t, q, p_d).unwrap() <= tts(t, p, p_d).unwrap());
        prop_assert!(tts(t, p, p_d).unwrap() <= tts(t + dt, p, p_d).unwrap());
        prop_assert!(tts(t, p, p_d).unwrap() >= t);
    }

    #[test]
    fn stefanov_agrees_with_linear_solver(steps in prop::collection::vec((0.02f64..0.6, 0.0f64..0.4), 1..30)) {
        let chain = random_chain(&steps);
        let (s, parts) = stefanov_expected_time(&chain).unwrap();
        let l = hitting_time_linear_solver(&chain).unwrap();
        prop_assert_eq!(parts.len(), steps.len());
        prop_assert!(((s - l) / l).abs() < 1e-10, "{s} vs {l}");
    }

    #[test]
    fn pauli_expansion_reproduces_the_cost(table in prop::collection::vec(-4i32..5, 2..10)) {
        let cf = CostFunction::from_table(table.iter().map(|&v| v as f64).collect()).unwrap();
        let n = cf.n();
        let coeffs = pauli_z_expansion(&cf).unwrap();
        for x in 0u32..1 << n {
            let v: f64 = coeffs.iter().map(|(&r, &j)| if (x & r).count_ones() % 2 == 0 { j } else { -j }).sum();
            prop_assert!((v - cf.at(x.count_ones() as usize)).abs() < 1e-9);
        }
    }

    #[test]
    fn sa_is_pathwise_mask_invariant(
        table in prop::collection::vec(-3i32..6, 2..14),
        bits in prop::collection::vec(any::<bool>(), 13),
        mask in prop::collection::vec(any::<bool>(), 13),
        sweeps in 1usize..40,
        beta_i in 0.0f64..2.0,
        beta_span in 0.0f64..10.0,
        solver in any::<bool>(),
        sequential in any::<bool>(),
        seed in any::<u64>(),
        stream in 0u64..100,
    ) {
        let cf = CostFunction::from_table(table.iter().map(|&v| v as f64).collect()).unwrap();
        let n = cf.n();
        let (x, m) = (bits[..n].to_vec(), mask[..n].to_vec());
        let base = SaConfig {
            beta_i,
            beta_f: beta_i + beta_span,
            sweeps,
            selection: if sequential { Selection::Sequential } else { Selection::Random },
            mode: if solver { AnnealMode::Solver } else { AnnealMode::Annealer },
            seed,
            record_hw: true,
            ..Default::default()
        };
        let plain = SaConfig { init: InitialState::Bits(x.clone()), ..base.clone() };
        let masked = SaConfig { init: InitialState::Bits(xor(&x, &m)), mask: Some(XorMask::new(m)), ..base };
        prop_assert_eq!(sa_run_stream(&cf, &plain, stream).unwrap(), sa_run_stream(&cf, &masked, stream).unwrap());
    }

    #[test]
    fn sqa_sweeps_are_pathwise_mask_invariant(
        table in prop::collection::vec(-3i32..6, 2..8),
        bits in prop::collection::vec(any::<bool>(), 7 * 8),
        mask in prop::collection::vec(any::<bool>(), 7),
        s in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let cf = CostFunction::from_table(table.iter().map(|&v| v as f64).collect()).unwrap();
        let (n, nt) = (cf.n(), 8);
        let raw = bits[..n * nt].to_vec();
        let m = mask[..n].to_vec();
        let flipped: Vec<bool> = raw.iter().enumerate().map(|(k, &b)| b != m[k / nt]).collect();
        let mut plain = WorldlineConfigState::from_bits(n, nt, raw, None).unwrap();
        let mut masked = WorldlineConfigState::from_bits(n, nt, flipped, Some(&XorMask::new(m))).unwrap();
        let p = SliceParams::at(s, &SqaConfig { n_tau: nt, beta: 4.0, ..SqaConfig::new(10) });
        let (mut r1, mut r2) = (ChaCha8Rng::seed_from_u64(seed), ChaCha8Rng::seed_from_u64(seed));
        for _ in 0..10 {
            plain.sweep(cf.table(), &p, &mut r1);
            masked.sweep(cf.table(), &p, &mut r2);
            prop_assert_eq!(plain.weights(), masked.weights());
        }
        prop_assert!(plain.audit() && masked.audit());
    }
}
