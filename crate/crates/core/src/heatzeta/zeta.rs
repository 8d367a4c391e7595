use serde::Serialize;

use super::lattice::FlatLattice;
use super::special::{gamma, integrate};
use super::HeatProfile;
use crate::error::{Error, Result};
use crate::linalg::{c, C64};
use crate::spectra::Spectrum;

/// `ζ(x) = Σ_{k>ℓ} λ_k^{−x}` by direct summation and, optionally, by the
/// Mellin transform of the heat trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaSample {
    pub x: (f64, f64),
    pub value: (f64, f64),
    /// Certified bound on what the value leaves out.
    pub error: f64,
    pub ell: usize,
}

impl ZetaSample {
    pub fn value(&self) -> C64 {
        c(self.value.0, self.value.1)
    }
}

fn check_abscissa(x: C64) -> Result<()> {
    if !(x.re > 1.0) {
        return Err(Error::AbscissaViolation(x.re));
    }
    Ok(())
}

/// Sum over the computed eigenvalues past the kernel; `error` bounds the
/// eigenvalues beyond the computed window through `λ_k ≥ λ_k(1)/ν`.
pub fn zeta_sum(spec: &Spectrum, x: C64, ell: usize, nu: f64) -> Result<ZetaSample> {
    check_abscissa(x)?;
    super::ell_checked(spec, ell)?;
    let value: C64 = spec.eigenvalues.iter().skip(ell).map(|&l| (-x * l.ln()).exp()).sum();
    let lattice = FlatLattice::covering(spec.len());
    let tail = lattice.power_tail(spec.len(), 2.0 * std::f64::consts::PI.powi(2) / nu, x.re);
    Ok(ZetaSample { x: (x.re, x.im), value: (value.re, value.im), error: tail, ell })
}

/// `Γ(x)^{−1} ∫_0^∞ t^{x−1}(Tr e^{−tΔ} − ℓ) dt` over the profile's eigenvalues,
/// by adaptive quadrature in `ln t`. The integral is cut to
/// `[t_min, t_max]`: below `t_min` the integrand is at most
/// `(N − ℓ)·t^{σ−1}`, above `t_max` the exponential decay bound applies.
/// `error` sums both cut-offs and the quadrature estimate.
pub fn zeta_mellin(heat: &HeatProfile, x: C64, ell: usize, eps: f64) -> Result<ZetaSample> {
    check_abscissa(x)?;
    let n = heat.eigenvalues.len();
    if ell >= n {
        return Err(Error::DepthExceeded { depth: ell, available: n });
    }
    let sigma = x.re;
    let g = gamma(x);
    let budget = eps * g.norm() / 3.0;
    let t_min = (budget * sigma / (n - ell) as f64).powf(1.0 / sigma).min(1e-3);
    let head = (n - ell) as f64 * t_min.powf(sigma) / sigma;

    let gap = heat.eigenvalues[ell];
    if !(gap > 0.0) {
        return Err(Error::TailUncertified(gap));
    }
    let a: f64 = heat.eigenvalues.iter().skip(ell).map(|l| (-l / 2.0).exp()).sum();
    let rate = gap / 2.0;
    let tail_bound = |t: f64| {
        let denom = rate - (sigma - 1.0) / t;
        if denom > 0.0 {
            a * t.powf(sigma - 1.0) * (-rate * t).exp() / denom
        } else {
            f64::INFINITY
        }
    };
    let mut t_max = 1.0;
    while tail_bound(t_max) > budget {
        t_max *= 2.0;
        if t_max > 1e8 {
            return Err(Error::TailUncertified(t_max));
        }
    }
    let tail = tail_bound(t_max);

    let f = |u: f64| {
        let t = u.exp();
        (x * u).exp() * heat.reduced_trace(t, ell)
    };
    let (integral, quad_err) = integrate(f, t_min.ln(), t_max.ln(), budget);
    let value = integral / g;
    Ok(ZetaSample { x: (x.re, x.im), value: (value.re, value.im), error: (head + tail + quad_err) / g.norm(), ell })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMat, CVec};
    use crate::spectra::{solve, Strategy};

    fn single(l: f64) -> Spectrum {
        let k = CMat::from_diagonal(&CVec::from_vec(vec![c(0.0, 0.0), c(l, 0.0)]));
        solve(&k, &CMat::identity(2, 2), 2).unwrap().with_meta(None, 0, Strategy::Direct)
    }

    #[test]
    fn single_eigenvalue_both_paths() {
        let spec = single(3.7);
        let x = c(2.0, 0.5);
        let s = zeta_sum(&spec, x, 1, 1.0).unwrap();
        let want = (-x * 3.7f64.ln()).exp();
        assert!((s.value() - want).norm() < 1e-15);
        let heat = HeatProfile { eigenvalues: spec.eigenvalues.clone(), nu: 1.0, t: vec![], traces: vec![], tails: vec![], depths: vec![] };
        let m = zeta_mellin(&heat, x, 1, 1e-11).unwrap();
        assert!((m.value() - want).norm() < 1e-9, "{:?} {:?}", m.value(), want);
    }

    #[test]
    fn abscissa_is_enforced() {
        assert!(matches!(zeta_sum(&single(2.0), c(1.0, 0.0), 1, 1.0), Err(Error::AbscissaViolation(_))));
    }
}
