//! The permutation-symmetric reduction checked against the full 2^n space.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use phwo::problems::{make_problem, CostFunction, ProblemKind};
use phwo::schrodinger::{evolve, EvolutionConfig};
use phwo::symspace::{build_hamiltonian, eigen_values, ground_state, SymState};

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn dense_h(cf: &CostFunction, s: f64) -> DMatrix<f64> {
    let n = cf.n();
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let w = (x as u32).count_ones() as usize;
        h[(x, x)] = (1.0 - s) * n as f64 / 2.0 + s * cf.at(w);
        for i in 0..n {
            h[(x, x ^ (1 << i))] -= (1.0 - s) / 2.0;
        }
    }
    h
}

fn apply_full(cf: &CostFunction, s: f64, psi: &[Complex64], out: &mut [Complex64]) {
    let n = cf.n();
    for (x, o) in out.iter_mut().enumerate() {
        let w = (x as u32).count_ones() as usize;
        let mut acc = psi[x] * ((1.0 - s) * n as f64 / 2.0 + s * cf.at(w));
        for i in 0..n {
            acc -= psi[x ^ (1 << i)] * ((1.0 - s) / 2.0);
        }
        *o = acc;
    }
}

/// Fixed-step RK4 of dψ/ds = −i t_f H(s) ψ on the full space from |+⟩^n.
fn evolve_full(cf: &CostFunction, t_f: f64, steps: usize) -> Vec<Complex64> {
    let dim = 1usize << cf.n();
    let mut psi = vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim];
    let h = 1.0 / steps as f64;
    let mi = Complex64::new(0.0, -t_f);
    let mut k = vec![vec![Complex64::default(); dim]; 4];
    let mut tmp = vec![Complex64::default(); dim];
    for step in 0..steps {
        let s = step as f64 * h;
        apply_full(cf, s, &psi, &mut k[0]);
        k[0].iter_mut().for_each(|v| *v *= mi);
        for (stage, (ds, frac)) in [(0.5, 0.5), (0.5, 0.5), (1.0, 1.0)].into_iter().enumerate() {
            for x in 0..dim {
                tmp[x] = psi[x] + k[stage][x] * (frac * h);
            }
            apply_full(cf, s + ds * h, &tmp, &mut k[stage + 1]);
            k[stage + 1].iter_mut().for_each(|v| *v *= mi);
        }
        for x in 0..dim {
            psi[x] += (k[0][x] + k[1][x] * 2.0 + k[2][x] * 2.0 + k[3][x]) * (h / 6.0);
        }
    }
    psi
}

fn embed(psi: &SymState) -> Vec<Complex64> {
    let n = psi.n();
    (0..1usize << n)
        .map(|x| {
            let w = (x as u32).count_ones() as usize;
            psi.amps[w] / binom(n, w).sqrt()
        })
        .collect()
}

fn pure_trace_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ov: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (1.0 - ov.norm_sqr()).max(0.0).sqrt()
}

fn catalog(n: usize) -> Vec<CostFunction> {
    // kinds whose shape needs a larger n are skipped at small n
    [
        ProblemKind::PlainHw,
        ProblemKind::Grover,
        ProblemKind::Spike,
        ProblemKind::Precipice,
        ProblemKind::FixedPlateau { l: 0, u: 3 },
        ProblemKind::Reichardt { l: 1, u: 3, h: 0.7 },
    ]
    .into_iter()
    .filter_map(|k| make_problem(k, n).ok())
    .collect()
}

#[test]
fn symmetric_spectrum_is_part_of_full_spectrum() {
    for n in [2usize, 5, 8] {
        for cf in catalog(n) {
            for s in [0.0, 0.3, 0.7, 1.0] {
                let full = SymmetricEigen::new(dense_h(&cf, s)).eigenvalues;
                let sym = eigen_values(&build_hamiltonian(&cf, s).unwrap(), n + 1).unwrap().eigenvalues;
                for e in &sym {
                    let nearest = full.iter().map(|f| (f - e).abs()).fold(f64::INFINITY, f64::min);
                    assert!(nearest < 1e-9, "{} n={n} s={s}: {e} missing ({nearest:e})", cf.kind().name());
                }
                let full_min = full.iter().copied().fold(f64::INFINITY, f64::min);
                assert!((full_min - sym[0]).abs() < 1e-9, "ground energy differs");
            }
        }
    }
}

#[test]
fn symmetric_ground_state_embeds_into_full_ground_state() {
    let cf = make_problem(ProblemKind::FixedPlateau { l: 0, u: 4 }, 7).unwrap();
    for s in [0.2, 0.6, 0.9] {
        let eig = SymmetricEigen::new(dense_h(&cf, s));
        let k = eig.eigenvalues.imin();
        let full: Vec<Complex64> = eig.eigenvectors.column(k).iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let sym = embed(&SymState::from_real(&ground_state(&cf, s).unwrap()));
        let d = pure_trace_distance(&full, &sym);
        assert!(d < 1e-7, "s={s}: {d:e}");
    }
}

#[test]
fn evolution_matches_full_space_integration() {
    for n in [1usize, 4, 6] {
        for cf in catalog(n) {
            for t_f in [0.7, 4.0] {
                let tr = evolve(&cf, &EvolutionConfig::new(t_f).with_tolerances(1e-12, 1e-14)).unwrap();
                let full = evolve_full(&cf, t_f, 16000);
                let d = pure_trace_distance(&full, &embed(&tr.final_state));
                assert!(d < 1e-6, "{} n={n} t_f={t_f}: trace distance {d:e}", cf.kind().name());
            }
        }
    }
}
