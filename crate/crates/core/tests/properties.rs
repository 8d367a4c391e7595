//! Randomized invariants across the modules.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::{Blend, DegeneracyProfile, MetricFamily};
use degenerate_spectra::heatzeta::{heat_operator, trace_norm_distance};
use degenerate_spectra::jlinalg::{
    canonical_invariance_defect, dual_endomorphism, m1_norm_transfer, operator_norm, pullback_endomorphism, random_covector_10,
    random_pair, MixedCovector,
};
use degenerate_spectra::linalg::{c, hermitian_eigenvalues, CMat, CVec};
use degenerate_spectra::spectra::{family_spectrum, solve, Spectrum, Strategy};
use degenerate_spectra::varyhilbert::{strong_defect, weak_defect, GramSequence};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn synthetic(seed: u64, n: usize) -> Spectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMat::from_fn(n, n, |_, _| c(rand::Rng::random_range(&mut rng, -1.0..1.0), rand::Rng::random_range(&mut rng, -1.0..1.0)));
    let k = a.adjoint() * &a;
    let m = CMat::from_diagonal(&CVec::from_iterator(n, (0..n).map(|i| c(1.0 + 0.25 * i as f64, 0.0))));
    solve(&k, &m, n).unwrap().with_meta(None, 0, Strategy::Direct)
}

fn trace(spec: &Spectrum, t: f64) -> f64 {
    spec.eigenvalues.iter().map(|l| (-t * l).exp()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fiber_identities(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = random_pair(m, false, &mut rng);
        let f = pullback_endomorphism(&pair).unwrap();
        let mut real: Vec<f64> = f.matrix.complex_eigenvalues().iter().map(|z| z.re).collect();
        real.sort_by(f64::total_cmp);
        let scale = real.last().unwrap().abs().max(1.0);
        for (k, l) in f.paired_eigenvalues.iter().enumerate() {
            prop_assert!((real[2 * k] - l).abs() <= 1e-9 * scale && (real[2 * k + 1] - l).abs() <= 1e-9 * scale);
        }
        let det = f.matrix.determinant();
        let d10 = f.det_10();
        prop_assert!(((d10 * d10).re - det).abs() <= 1e-9 * det.abs().max(1.0));
        let g = dual_endomorphism(&f).unwrap();
        prop_assert!(operator_norm(&f) * operator_norm(&g) >= 1.0 - 1e-12);

        let covectors: Vec<CVec> = (0..m).map(|_| random_covector_10(pair.structure(), &mut rng)).collect();
        prop_assert!(canonical_invariance_defect(&covectors, &pair).unwrap() <= 1e-9);
        let psi = MixedCovector { holomorphic: covectors, antiholomorphic: random_covector_10(pair.structure(), &mut rng) };
        let t = m1_norm_transfer(&psi, &pair).unwrap();
        let slack = 1e-12 * t.g_upper.abs().max(1.0);
        prop_assert!(t.g_lower - slack <= t.h_value && t.h_value <= t.g_upper + slack);
    }

    #[test]
    fn blend_is_affine_and_monotone(s1 in 0.01f64..1.0, s2 in 0.01f64..1.0, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let family = MetricFamily::default();
        let rho0 = family.profile.eval(x, y);
        for s in [s1, s2] {
            let f = family.blend.eval(s);
            prop_assert!((family.rho(s, x, y).unwrap() - ((1.0 - f) * rho0 + f)).abs() < 1e-14);
        }
        let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        let change = family.rho(hi, x, y).unwrap() - family.rho(lo, x, y).unwrap();
        if rho0 <= 1.0 { prop_assert!(change >= -1e-15); } else { prop_assert!(change <= 1e-15); }
    }

    #[test]
    fn heat_traces_decrease_convexly(seed in any::<u64>(), t in 0.01f64..5.0, h in 0.001f64..1.0) {
        let spec = synthetic(seed, 6);
        let (a, b, c2) = (trace(&spec, t), trace(&spec, t + h), trace(&spec, t + 2.0 * h));
        prop_assert!(b < a);
        prop_assert!(a - 2.0 * b + c2 >= -1e-12);
    }

    #[test]
    fn trace_norm_dominates_trace_difference(seed in any::<u64>(), t in 0.01f64..3.0) {
        let a = synthetic(seed, 5);
        let b = synthetic(seed.wrapping_add(1), 5);
        let d = trace_norm_distance(&a, &b, t).unwrap();
        prop_assert!((trace(&a, t) - trace(&b, t)).abs() <= d + 1e-9);
        // agrees with the eigenvalues of the full difference
        let half = CMat::from_diagonal(&a.mass.diagonal().map(|z| z.sqrt()));
        let inv = CMat::from_diagonal(&a.mass.diagonal().map(|z| z.sqrt().inv()));
        let full = &half * (heat_operator(&a, t) - heat_operator(&b, t)) * &inv;
        let direct: f64 = hermitian_eigenvalues(&full).iter().map(|x| x.abs()).sum();
        prop_assert!((direct - d).abs() <= 1e-10 * direct.max(1.0));
    }

    #[test]
    fn semigroup(seed in any::<u64>(), t in 0.01f64..2.0, u in 0.01f64..2.0) {
        let spec = synthetic(seed, 5);
        let lhs = heat_operator(&spec, t) * heat_operator(&spec, u);
        prop_assert!((lhs - heat_operator(&spec, t + u)).norm() < 1e-8);
    }

    #[test]
    fn strong_implies_weak(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = || rand::Rng::random_range(&mut rng, -1.0..1.0);
        let m = CMat::from_diagonal(&CVec::from_iterator(3, (0..3).map(|_| c(1.5 + r(), 0.0))));
        let u = CVec::from_fn(3, |_, _| c(r(), r()));
        let drift = CVec::from_fn(3, |_, _| c(r(), r()));
        let probes: Vec<CVec> = (0..3).map(|_| CVec::from_fn(3, |_, _| c(r(), r()))).collect();
        let n = 20;
        let seq = GramSequence::new((1..=n).map(|k| m.scale(1.0 + 1.0 / k as f64)).collect(), m.clone()).unwrap();
        let u_seq: Vec<CVec> = (1..=n).map(|k| &u + drift.scale(1.0 / k as f64)).collect();
        let strong = strong_defect(&u_seq, &u, &seq).unwrap();
        let weak = weak_defect(&u_seq, &u, &probes, &seq).unwrap();
        prop_assert!(strong.last < 0.2);
        // ⟨u_n, w⟩_{M_n} − ⟨u, w⟩_M = ⟨u_n − u, w⟩_{M_n} + ⟨u, w⟩_M / n
        let norm = |v: &CVec| (v.adjoint() * &m * v)[0].re.sqrt();
        let nf = n as f64;
        let bound = probes.iter().map(|p| norm(p) * ((1.0 + 1.0 / nf).sqrt() * strong.last + norm(&u) / nf)).fold(0.0, f64::max);
        prop_assert!(weak.last <= bound + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Pointwise larger weights give smaller eigenvalues on the shared mass.
    #[test]
    fn minmax_monotone_in_the_weight(value in 1.1f64..5.0, s1 in 0.05f64..0.5, ds in 0.05f64..0.5) {
        let family = MetricFamily::new(DegeneracyProfile::Constant { value }, Blend::Identity);
        let forms = DiscreteForms::new(3, family);
        let lo = family_spectrum(&forms, s1, forms.dim()).unwrap();
        let hi = family_spectrum(&forms, s1 + ds, forms.dim()).unwrap();
        // ρ decreases in s here, so λ increases
        for (a, b) in lo.eigenvalues.iter().zip(&hi.eigenvalues) {
            prop_assert!(*a <= b + 1e-8);
        }
        prop_assert_eq!(lo.mass, hi.mass);
    }
}
