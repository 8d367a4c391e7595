//! Heat traces, heat kernels and zeta values of the flat torus against
//! lattice sums computed here.

use std::f64::consts::PI;

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::heatzeta::special::gamma;
use degenerate_spectra::heatzeta::{heat_kernel_eval, heat_trace, log_grid, zeta_mellin, zeta_sum, HeatProfile};
use degenerate_spectra::linalg::c;
use degenerate_spectra::spectra::{family_spectrum, Spectrum};

fn flat(band_limit: usize) -> (DiscreteForms, Spectrum) {
    let forms = DiscreteForms::new(band_limit, MetricFamily::default());
    let spec = family_spectrum(&forms, 1.0, forms.dim()).unwrap();
    (forms, spec)
}

#[test]
fn flat_heat_trace_at_unit_time() {
    let (_, spec) = flat(8);
    let one_d: f64 = (-30i32..=30).map(|m| (-2.0 * PI * PI * (m * m) as f64).exp()).sum();
    let want = one_d * one_d;
    let got = heat_trace(&spec, 1.0, 1.0, 1e-14).unwrap();
    // the kernel eigenvalue is zero only to solver precision, ~1e-12
    assert!((got.value - want).abs() < 1e-11, "{} vs {want}", got.value);
    assert!((want - 1.0 - 4.0 * (-2.0 * PI * PI).exp()).abs() < 1e-15);
}

#[test]
fn flat_kernel_matches_the_dual_theta_series() {
    let (forms, spec) = flat(8);
    let t = 0.5;
    // Poisson summation: Σ_n e^{−2π²tn²}e^{2πinu} = (2πt)^{−1/2} Σ_k e^{−(u−k)²/(2t)}
    let theta = |u: f64| (-20i32..=20).map(|k| (-(u - k as f64).powi(2) / (2.0 * t)).exp()).sum::<f64>() / (2.0 * PI * t).sqrt();
    for &(x, y) in &[((0.1, 0.2), (0.1, 0.2)), ((0.3, 0.7), (0.9, 0.05)), ((0.0, 0.0), (0.5, 0.5))] {
        let got = heat_kernel_eval(&spec, forms.basis(), t, x, y, spec.len()).unwrap();
        // M = 2I, so the M-orthonormal coefficient vectors carry a factor 1/√2 each
        let want = 0.5 * theta(x.0 - y.0) * theta(x.1 - y.1);
        assert!((got - c(want, 0.0)).norm() < 1e-8, "{got} vs {want}");
    }
}

#[test]
fn flat_zeta_at_two() {
    let (_, spec) = flat(8);
    // Σ'(m² + n²)^{−2} over the disc of radius R, plus the tail ∫_R^∞ 2πr·r^{−4} dr
    let r = 1200i64;
    let mut lattice = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            let q = m * m + n * n;
            if q != 0 && q <= r * r {
                lattice += 1.0 / (q as f64).powi(2);
            }
        }
    }
    lattice += PI / (r * r) as f64;
    assert!((lattice - 6.0268).abs() < 1e-4, "{lattice}");
    let full = lattice / (4.0 * PI.powi(4));
    assert!((full - 0.015468).abs() < 1e-6, "{full}");

    let x = c(2.0, 0.0);
    let sum = zeta_sum(&spec, x, 1, 1.0).unwrap();
    let boxed: f64 = (-8i32..=8)
        .flat_map(|m| (-8i32..=8).map(move |n| m * m + n * n))
        .filter(|&q| q != 0)
        .map(|q| (2.0 * PI * PI * q as f64).powi(-2))
        .sum();
    assert!((sum.value().re - boxed).abs() < 1e-12 * boxed);
    // the bound covers the true eigenvalues past the first N, which are the
    // N smallest lattice values rather than the box of the basis
    let mut smallest: Vec<i32> = (-20i32..=20).flat_map(|m| (-20i32..=20).map(move |n| m * m + n * n)).collect();
    smallest.sort_unstable();
    let head: f64 = smallest[1..spec.len()].iter().map(|&q| (2.0 * PI * PI * q as f64).powi(-2)).sum();
    let tail = full - head;
    assert!(tail > 0.0 && tail <= sum.error, "tail {tail} exceeds bound {}", sum.error);

    let heat = HeatProfile::new(&spec, &log_grid(0.05, 4.0, 8), 1.0, 1e-12).unwrap();
    let mellin = zeta_mellin(&heat, x, 1, 1e-9).unwrap();
    assert!((mellin.value() - sum.value()).norm() < 1e-6);
}

#[test]
fn gamma_against_factorials_and_the_duplication_formula() {
    let mut factorial = 1.0;
    for n in 1..15 {
        assert!((gamma(c(n as f64, 0.0)).re - factorial).abs() < 1e-12 * factorial);
        factorial *= n as f64;
    }
    // Γ(z)Γ(z + ½) = 2^{1−2z}√π Γ(2z)
    for z in [c(0.7, 0.3), c(1.5, -2.0), c(3.2, 1.1)] {
        let lhs = gamma(z) * gamma(z + 0.5);
        let rhs = (c(2.0, 0.0).powc(c(1.0, 0.0) - z * 2.0)) * PI.sqrt() * gamma(z * 2.0);
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }
}
