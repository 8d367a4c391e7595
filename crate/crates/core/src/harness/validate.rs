//! Property suites of every module, run with the configured seed. Each
//! property becomes one [`Check`] carrying its worst case over all samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::study::Study;
use super::{Check, Section};
use crate::assembly::DiscreteForms;
use crate::error::{Error, Result};
use crate::geometry::verify_domination;
use crate::heatzeta::{heat_operator, trace_norm_distance};
use crate::jlinalg::{
    canonical_invariance_defect, dual_endomorphism, m1_norm_transfer, operator_norm, pullback_endomorphism, random_covector_10,
    random_pair, wedge_norm_sqr, CompatiblePair, MixedCovector,
};
use crate::linalg::{c, frobenius, hermitian_eigenvalues, CMat, CVec, C64};
use crate::spectra::{cluster, cluster_projection, default_gap_tol, family_spectrum, Spectrum};
use crate::varyhilbert::{
    liminf_norm_check, mosco_diagnostic, space_convergence_defect, strong_defect, weak_defect, weak_subsequence, FormSequence, GramSequence,
};

/// A deliberate error planted in one check, to show the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Injection {
    #[default]
    None,
    /// Uses `ν/2` in the comparison `ν·λ_k(s) ≥ λ_k(1)`.
    UnderstateNuInMinmax,
}

/// Random fibers per complex dimension.
pub const FIBER_SAMPLES: usize = 1000;
/// Random coefficient vectors per assembled form.
const FORM_SAMPLES: usize = 200;
const RAYLEIGH_SAMPLES: usize = 1000;

pub fn validate(study: &Study, injection: Injection) -> Result<Section> {
    let mut sec = Section::new("validate");
    let seed = study.config.seed;
    for m in 1..=3 {
        sec.checks.extend(fiber_suite(m, FIBER_SAMPLES, &mut fiber_rng(seed, m)));
    }
    sec.checks.extend(hilbert_suite(study)?);
    sec.checks.extend(form_suite(study, injection, &mut ChaCha8Rng::seed_from_u64(seed ^ 0xF0F0)));
    sec.checks.extend(operator_suite(study)?);
    Ok(sec)
}

/// The generator [`validate`] hands to [`fiber_suite`] for fiber dimension `m`.
pub fn fiber_rng(seed: u64, m: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (0xF1BE_u64 << 8) ^ m as u64)
}

fn rng_unit(n: usize, rng: &mut impl Rng) -> nalgebra::DVector<f64> {
    let v = nalgebra::DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    let norm = v.norm();
    v / norm
}

/// Pairing, determinant identities, operator norm, canonical invariance and
/// the `(m,1)` sandwich on random J-compatible fibers.
pub fn fiber_suite(m: usize, samples: usize, rng: &mut impl Rng) -> Vec<Check> {
    let n = 2 * m;
    let mut pairing = 0.0_f64;
    let mut residual = 0.0_f64;
    let mut det = 0.0_f64;
    let mut opnorm = 0.0_f64;
    let mut product = f64::INFINITY;
    let mut invariance = 0.0_f64;
    let mut sandwich = f64::INFINITY;
    let mut errors = 0usize;
    for _ in 0..samples {
        let pair = random_pair(m, false, rng);
        let Ok(f) = pullback_endomorphism(&pair) else {
            errors += 1;
            continue;
        };
        let (g, h, j) = (pair.g(), pair.h(), pair.structure().matrix());
        let scale = operator_norm(&f).max(f64::MIN_POSITIVE);

        // spectrum of F from a Schur decomposition, independent of the pairing code
        let mut ev: Vec<f64> = f.matrix.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (i, l) in f.paired_eigenvalues.iter().enumerate() {
            pairing = pairing.max((ev[2 * i] - l).abs().max((ev[2 * i + 1] - l).abs()) / scale);
        }
        residual = residual.max((g * &f.matrix - h).amax() / h.amax()).max((&f.matrix * j - j * &f.matrix).amax() / f.matrix.amax());

        let det_f = f.matrix.determinant();
        let d10 = f.det_10();
        det = det.max((c(det_f, 0.0) - d10 * d10).norm() / det_f.abs());
        let Ok(dual) = dual_endomorphism(&f) else {
            errors += 1;
            continue;
        };
        det = det.max((dual.det_10() * d10 - c(1.0, 0.0)).norm());

        // sup of h(v,v)/g(v,v): sampling never exceeds it, Schur attains it
        let top = operator_norm(&f);
        let mut sampled = 0.0_f64;
        for _ in 0..RAYLEIGH_SAMPLES {
            let v = rng_unit(n, rng);
            sampled = sampled.max((h * &v).dot(&v) / (g * &v).dot(&v));
        }
        let schur_top = *ev.last().expect("nonempty spectrum");
        opnorm = opnorm.max(((sampled - top) / top).max(0.0)).max((schur_top - top).abs() / top);
        product = product.min(top * operator_norm(&dual));

        let covectors: Vec<CVec> = (0..m).map(|_| random_covector_10(pair.structure(), rng)).collect();
        match canonical_invariance_defect(&covectors, &pair) {
            Ok(d) => {
                let g_inv = g.clone().try_inverse().expect("g is positive definite");
                invariance = invariance.max(d / wedge_norm_sqr(&covectors, &g_inv));
            }
            Err(_) => errors += 1,
        }
        let beta = CVec::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let psi = MixedCovector { holomorphic: covectors, antiholomorphic: beta };
        match m1_norm_transfer(&psi, &pair) {
            Ok(t) => {
                let slack = (t.h_value - t.g_lower).min(t.g_upper - t.h_value) / t.g_norm;
                sandwich = sandwich.min(slack);
            }
            Err(_) => errors += 1,
        }
    }

    // scalar pairs reach equality in the norm product
    let mut scalar_product = 0.0_f64;
    for k in 1..=4 {
        let pair = random_pair(m, false, rng);
        let scaled = CompatiblePair::new(pair.g().clone(), pair.g() * (k as f64 * 0.7), pair.structure().clone());
        match scaled.as_ref().map(pullback_endomorphism) {
            Ok(Ok(f)) => match dual_endomorphism(&f) {
                Ok(d) => scalar_product = scalar_product.max((operator_norm(&f) * operator_norm(&d) - 1.0).abs()),
                Err(_) => errors += 1,
            },
            _ => errors += 1,
        }
    }

    // rank-deficient h: F exists, G does not
    let mut semidefinite = 0usize;
    for _ in 0..samples / 20 {
        let pair = random_pair(m, true, rng);
        match pullback_endomorphism(&pair) {
            Ok(f) if f.paired_eigenvalues[0] <= 1e-10 * operator_norm(&f).max(1.0) => {
                if !matches!(dual_endomorphism(&f), Err(Error::SingularFiber(_))) {
                    semidefinite += 1;
                }
            }
            _ => semidefinite += 1,
        }
    }

    let tag = |name: &str| format!("fiber/{name}/m={m}");
    vec![
        Check::equal(tag("errors"), errors as f64, 0.0),
        Check::at_most(tag("pairing"), pairing, 1e-9),
        Check::at_most(tag("pullback_residual"), residual, 1e-10),
        Check::at_most(tag("det_identity"), det, 1e-9),
        Check::at_most(tag("operator_norm"), opnorm, 1e-8),
        Check::at_least(tag("norm_product"), product, 1.0 - 1e-12),
        Check::at_most(tag("norm_product_scalar"), scalar_product, 1e-12),
        Check::at_most(tag("canonical_invariance"), invariance, 1e-9),
        Check::at_least(tag("m1_sandwich"), sandwich, -1e-12),
        Check::equal(tag("semidefinite"), semidefinite as f64, 0.0),
    ]
}

fn e(d: usize, k: usize) -> CVec {
    CVec::from_fn(d, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn diag(v: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0))))
}

/// Synthetic Hilbert-space sequences with known answers, plus the
/// assembled `(1,1)`-form Grams and eigenvector sequences of the sweep.
pub fn hilbert_suite(study: &Study) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut liminf_failures = 0usize;
    const N: usize = 12;

    // M_n = (1 + 1/n)·M: defect (√(1+1/n) − 1)·‖u‖
    let m = CMat::from_fn(3, 3, |i, j| if i == j { c(2.0 + i as f64, 0.0) } else { c(0.1, -0.05 * (i as f64 - j as f64)) });
    let seq = GramSequence::new((1..=N).map(|n| m.scale(1.0 + 1.0 / n as f64)).collect(), m.clone())?;
    let u = CVec::from_vec(vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.2, 0.2)]);
    let trend = space_convergence_defect(&seq, std::slice::from_ref(&u))?;
    let closed = trend
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - ((1.0 + 1.0 / (i + 1) as f64).sqrt() - 1.0) * seq.limit_norm(&u)).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("hilbert/scaled_grams", closed, 1e-12));

    // u_n = u + e_1/n converges strongly, hence weakly
    let u_seq: Vec<CVec> = (1..=N).map(|n| &u + e(3, 0).scale(1.0 / n as f64)).collect();
    let probes = [e(3, 0), e(3, 1), CVec::from_vec(vec![c(0.5, 0.5), c(0.0, 1.0), c(-1.0, 0.0)])];
    let strong = strong_defect(&u_seq, &u, &seq)?;
    let weak = weak_defect(&u_seq, &u, &probes, &seq)?;
    let probe_norm = probes.iter().map(|w| (0..N).map(|n| seq.norm(n, w)).fold(0.0, f64::max)).fold(0.0, f64::max);
    let excess = weak.values.iter().zip(&strong.values).map(|(w, s)| w - s * probe_norm).fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::at_most("hilbert/strong_implies_weak", excess, 1e-12));
    checks.push(Check::decreasing("hilbert/strong_defect_decreasing", &strong.values, 0.0));
    liminf_failures += usize::from(!liminf_norm_check(&u_seq, &u, &seq)?.holds);

    // u_n = (−1)ⁿ e_1 does not converge weakly; its even terms do
    let flat = GramSequence::new(vec![CMat::identity(2, 2); N], CMat::identity(2, 2))?;
    let alternating: Vec<CVec> = (0..N).map(|n| e(2, 0).scale(if n % 2 == 0 { 1.0 } else { -1.0 })).collect();
    let weak_alt = weak_defect(&alternating, &CVec::zeros(2), &[e(2, 0), e(2, 1)], &flat)?;
    checks.push(Check::at_least("hilbert/alternating_detected", weak_alt.last, 0.5));
    let sub = weak_subsequence(&alternating, &[e(2, 0), e(2, 1)], &flat, 1e-9)?;
    checks.push(Check::equal("hilbert/weak_subsequence", sub.len() as f64, (N / 2) as f64));

    // u_n = e_n: weakly null, norms stay 1
    let unit = GramSequence::new(vec![CMat::identity(N, N); N], CMat::identity(N, N))?;
    let walking: Vec<CVec> = (0..N).map(|n| e(N, n)).collect();
    let zero = CVec::zeros(N);
    let decaying = CVec::from_fn(N, |k, _| c(0.5f64.powi(k as i32), 0.0));
    let weak_walk = weak_defect(&walking, &zero, &[decaying, e(N, 0) + e(N, 1)], &unit)?;
    let report = liminf_norm_check(&walking, &zero, &unit)?;
    let witness_ok = weak_walk.settles(1e-3) && report.holds && !report.strong && report.norms.iter().all(|&x| (x - 1.0).abs() < 1e-15);
    checks.push(Check::equal("hilbert/weak_not_strong_witness", f64::from(u8::from(!witness_ok)), 0.0));
    liminf_failures += usize::from(!report.holds);

    // Mosco: constant, 1/n-perturbed and diverging-with-mask families
    let q = [3.0, 1.0, 2.0, 5.0];
    let constant = FormSequence::new(vec![diag(&q); N], diag(&q));
    let r = mosco_diagnostic(&constant, 1e-12)?;
    let ok_constant = r.liminf_condition && r.recovery_condition && r.spectra_converge && r.eigenvalue_defects.last == 0.0;
    let perturbed = FormSequence::new((1..=N).map(|n| diag(&q.map(|x| x + 1.0 / n as f64))).collect(), diag(&q));
    let r = mosco_diagnostic(&perturbed, 0.1)?;
    let defect_err = r.eigenvalue_defects.values.iter().enumerate().map(|(i, d)| (d - 1.0 / (i + 1) as f64).abs()).fold(0.0, f64::max);
    let ok_perturbed = r.liminf_condition && r.recovery_condition && r.spectra_converge && defect_err < 1e-14;
    let diverging = FormSequence::new((1..=N).map(|n| diag(&[3.0, 1.0, 2.0, 10f64.powi(n as i32)])).collect(), diag(&[3.0, 1.0, 2.0, 0.0]))
        .with_masks(vec![vec![true; 4]; N], vec![true, true, true, false]);
    let r = mosco_diagnostic(&diverging, 1e-9)?;
    let ok_diverging = r.liminf_condition && r.recovery_condition && r.spectra_converge && r.limit_eigenvalues == vec![1.0, 2.0, 3.0];
    let bad = [ok_constant, ok_perturbed, ok_diverging].iter().filter(|ok| !**ok).count();
    checks.push(Check::equal("hilbert/mosco_families", bad as f64, 0.0));
    checks.push(Check::equal("hilbert/mosco_enumeration", mosco_enumeration()? as f64, 0.0));

    // assembled (1,1)-form Grams on the vanishing subspace
    let small = DiscreteForms::new(study.config.kernel_band_limit, study.config.family);
    let trend_s = study.config.trend_grid();
    if study.config.family.profile.is_degenerate() && trend_s.len() >= 2 {
        let (basis, limit) = small.top_form_limit_gram()?;
        let grams = trend_s.iter().map(|&s| small.top_form_gram(s)).collect::<Result<Vec<_>>>()?;
        let embeddings = vec![basis.clone(); grams.len()];
        let seq = GramSequence::with_embeddings(grams, limit, embeddings)?;
        let mut rng = ChaCha8Rng::seed_from_u64(study.config.seed ^ 0x6A6A);
        let probes: Vec<CVec> =
            (0..3).map(|_| CVec::from_fn(basis.ncols(), |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))).collect();
        let t = space_convergence_defect(&seq, &probes)?;
        checks.push(Check::decreasing("hilbert/assembled_gram_defect", &t.values, 1e-12));
    }

    // eigenvectors of a simple limit eigenvalue converge strongly
    let limit = study.reference();
    let window = limit.truncated(study.config.depth);
    if let Ok(clusters) = cluster(&window, default_gap_tol(&window)) {
        if let Some(cl) = clusters.iter().find(|c| c.first > 0 && c.multiplicity() == 1 && c.last + 1 < window.len()) {
            let k = cl.first;
            let target: CVec = limit.eigenvectors.column(k).into_owned();
            let family = study.trend();
            let aligned: Vec<CVec> = family
                .iter()
                .map(|sp| {
                    let v: CVec = sp.eigenvectors.column(k).into_owned();
                    let p = target.dotc(&(&limit.mass * &v));
                    let phase = if p.norm() > 0.0 { p.conj() / p.norm() } else { c(1.0, 0.0) };
                    v * phase
                })
                .collect();
            let seq = GramSequence::new(vec![limit.mass.clone(); aligned.len()], limit.mass.clone())?;
            let strong = strong_defect(&aligned, &target, &seq)?;
            checks.push(Check::decreasing(format!("hilbert/eigenvector_strong_defect/k={}", k + 1), &strong.values, 1e-8));
            let report = liminf_norm_check(&aligned, &target, &seq)?;
            checks.push(Check::at_most(
                format!("hilbert/eigenvector_norms/k={}", k + 1),
                (report.liminf_estimate - report.limit_norm).abs(),
                1e-6,
            ));
            liminf_failures += usize::from(!report.holds);
        }
    }
    checks.push(Check::equal("hilbert/liminf", liminf_failures as f64, 0.0));
    Ok(checks)
}

/// Mismatches between the Mosco flags and entrywise convergence over every
/// limit domain in dimension 4, for a convergent and an offset family.
fn mosco_enumeration() -> Result<usize> {
    const D: usize = 4;
    const N: usize = 8;
    let tol = 1e-9;
    let q = [0.5, 1.5, 4.0, 2.5];
    let mut mismatches = 0;
    for mask in 0..(1u32 << D) {
        let limit_mask: Vec<bool> = (0..D).map(|k| mask & (1 << k) != 0).collect();
        for offset in [0.0, 1.0] {
            let stiffness: Vec<CMat> = (1..=N)
                .map(|n| {
                    let v: Vec<f64> = (0..D)
                        .map(|k| if limit_mask[k] { q[k] + offset + 10f64.powi(-(n as i32) * 2) } else { 10f64.powi(2 * n as i32) })
                        .collect();
                    diag(&v)
                })
                .collect();
            let last = stiffness.last().expect("nonempty").clone();
            let fam = FormSequence::new(stiffness, diag(&q)).with_masks(vec![vec![true; D]; N], limit_mask.clone());
            let r = mosco_diagnostic(&fam, tol)?;
            let entrywise = (0..D).all(|k| {
                let v = last[(k, k)].re;
                if limit_mask[k] {
                    (v - q[k]).abs() <= tol * q[k].max(1.0)
                } else {
                    v >= 1.0 / tol
                }
            });
            if (r.liminf_condition && r.recovery_condition) != entrywise {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

fn random_coefficients(d: usize, rng: &mut impl Rng) -> CVec {
    CVec::from_fn(d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn form(k: &CMat, w: &CVec) -> f64 {
    w.dotc(&(k * w)).re
}

fn bits(m: &CMat) -> Vec<u64> {
    m.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect()
}

/// Inequalities between the assembled forms along the family.
fn form_suite(study: &Study, injection: Injection, rng: &mut impl Rng) -> Vec<Check> {
    let cfg = &study.config;
    let forms = &study.forms;
    let bounds = study.bounds;
    let d = forms.dim();
    let mut checks = Vec::new();

    let mass = bits(&forms.mass());
    let differing =
        study.family.iter().filter(|sp| bits(&sp.mass) != mass).count() + study.limits().iter().filter(|sp| bits(&sp.mass) != mass).count();
    checks.push(Check::equal("family/mass_invariance", differing as f64, 0.0));

    let nu = match injection {
        Injection::UnderstateNuInMinmax => bounds.nu / 2.0,
        Injection::None => bounds.nu,
    };
    let flat = study.family_at(1.0).cloned().or_else(|| family_spectrum(forms, 1.0, d).ok());
    let minmax = match &flat {
        Some(flat) => {
            let depth = cfg.minmax_depth.min(d);
            study
                .family
                .iter()
                .flat_map(|sp| (0..depth).map(move |k| nu * sp.eigenvalues[k] - flat.eigenvalues[k]))
                .fold(f64::INFINITY, f64::min)
        }
        None => f64::NAN,
    };
    checks.push(Check::at_least("family/minmax", minmax, -1e-8));

    let stiffness: Vec<(f64, CMat)> = cfg.s_grid.iter().filter_map(|&s| forms.stiffness(s).ok().map(|k| (s, k))).collect();
    checks.push(Check::equal("family/assembly_errors", (cfg.s_grid.len() - stiffness.len()) as f64, 0.0));
    let k1 = forms.stiffness(1.0).ok();

    let mut hermitian = 0.0_f64;
    let mut psd = f64::INFINITY;
    for (_, k) in &stiffness {
        hermitian = hermitian.max(frobenius(&(k - k.adjoint())) / frobenius(k));
    }
    for sp in &study.family {
        let top = sp.eigenvalues.last().copied().unwrap_or(1.0).abs().max(1.0);
        psd = psd.min(sp.eigenvalues[0] / top);
    }
    checks.push(Check::at_most("family/hermitian", hermitian, 1e-12));
    checks.push(Check::at_least("family/positive_semidefinite", psd, -1e-12));

    // ‖∂̄ω‖²_{g_1} ≤ ν‖∂̄ω‖²_{g_s}
    let mut fiacco = f64::NEG_INFINITY;
    if let Some(k1) = &k1 {
        for (_, ks) in &stiffness {
            for _ in 0..FORM_SAMPLES {
                let w = random_coefficients(d, rng);
                let lhs = form(k1, &w);
                fiacco = fiacco.max((lhs - bounds.nu * form(ks, &w)) / lhs);
            }
        }
    }
    checks.push(Check::at_most("family/flat_domination", fiacco, 1e-10));

    // ‖∂̄ω‖²_{g_s} ≤ 𝔞‖∂̄ω‖²_{g_0} on the constrained subspace
    if let Some((limit, _)) = &study.constrained {
        let r = limit.null_basis.ncols();
        let mut decia = f64::NEG_INFINITY;
        for (_, ks) in &stiffness {
            for _ in 0..FORM_SAMPLES {
                let v = random_coefficients(r, rng);
                let w = &limit.null_basis * &v;
                let rhs = bounds.a * form(&limit.stiffness, &v);
                decia = decia.max((form(ks, &w) - rhs) / rhs);
            }
        }
        checks.push(Check::at_most("family/limit_domination", decia, 1e-10));
    }

    // Rayleigh quotients of s₁ < s₂ compare through the weight extremes:
    // (min ρ_{s₁}/max ρ_{s₂})·R_{s₁} ≤ R_{s₂} ≤ (max ρ_{s₁}/min ρ_{s₂})·R_{s₁}
    let sup_rho = |s: f64| {
        let f = cfg.family.blend.eval(s);
        (1.0 - f) * bounds.b + f
    };
    let inf_rho = |s: f64| cfg.family.min_weight(s);
    let mut sandwich = f64::INFINITY;
    for pair in stiffness.windows(2) {
        let ((s2, k2), (s1, k1)) = (&pair[0], &pair[1]);
        let lo = inf_rho(*s1) / sup_rho(*s2);
        let hi = sup_rho(*s1) / inf_rho(*s2);
        for _ in 0..FORM_SAMPLES {
            let w = random_coefficients(d, rng);
            let (r1, r2) = (form(k1, &w), form(k2, &w));
            sandwich = sandwich.min((r2 - lo * r1) / r2).min((hi * r1 - r2) / r2);
        }
    }
    checks.push(Check::at_least("family/rayleigh_sandwich", sandwich, -1e-10));

    checks.push(Check::at_least("family/weight_domination", verify_domination(&cfg.family, &bounds, 128, &cfg.s_grid), 0.0));
    checks
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Projector and heat-semigroup contracts on the computed spectra.
fn operator_suite(study: &Study) -> Result<Vec<Check>> {
    let limit = study.reference();
    let last = study.family.last().expect("validated grid is nonempty");
    let specs: [&Spectrum; 2] = [limit, last];
    let mut projector = 0.0_f64;
    for spec in specs {
        let window = spec.truncated(study.config.depth);
        let Ok(clusters) = cluster(&window, default_gap_tol(&window)) else {
            projector = f64::INFINITY;
            continue;
        };
        for cl in clusters.iter().filter(|c| c.last + 1 < window.len()).take(study.config.clusters) {
            let p = cluster_projection(spec, cl);
            let m = &spec.mass;
            let idempotent = max_abs(&(&p * &p - &p));
            let self_adjoint = max_abs(&(m * &p - p.adjoint() * m)) / max_abs(m);
            let trace = (p.trace() - C64::from(cl.multiplicity() as f64)).norm();
            projector = projector.max(idempotent).max(self_adjoint).max(trace);
        }
    }
    let mut semigroup = 0.0_f64;
    let mut spectrum_range = 0.0_f64;
    for spec in specs {
        let e = heat_operator(spec, 0.3) * heat_operator(spec, 0.7) - heat_operator(spec, 1.0);
        semigroup = semigroup.max(max_abs(&e));
        // M^{1/2} E_t M^{-1/2} has eigenvalues in [0, 1]
        let half = crate::linalg::hermitian_function(&spec.mass, f64::sqrt)?;
        let inv = crate::linalg::hermitian_function(&spec.mass, |x| 1.0 / x.sqrt())?;
        for ev in hermitian_eigenvalues(&(&half * heat_operator(spec, 0.5) * &inv)) {
            spectrum_range = spectrum_range.max(-ev).max(ev - 1.0);
        }
    }
    let mut dominance = f64::INFINITY;
    for t in [study.config.heat.t0, 1.0] {
        for sp in &study.family {
            let norm = trace_norm_distance(sp, limit, t)?;
            let diff = (heat_operator(sp, t).trace() - heat_operator(limit, t).trace()).norm();
            dominance = dominance.min(norm - diff);
        }
    }
    Ok(vec![
        Check::at_most("operators/projector_contracts", projector, 1e-9),
        Check::at_most("operators/semigroup", semigroup, 1e-8),
        Check::at_most("operators/heat_spectrum_in_unit_interval", spectrum_range, 1e-10),
        Check::at_least("operators/trace_norm_dominates_trace", dominance, -1e-10),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_suite_passes_on_a_small_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=2 {
            for check in fiber_suite(m, 40, &mut rng) {
                assert!(check.pass, "{check:?}");
            }
        }
    }

    #[test]
    fn mosco_flags_match_entrywise_convergence() {
        assert_eq!(mosco_enumeration().unwrap(), 0);
    }
}
