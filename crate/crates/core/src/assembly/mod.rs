//! Galerkin discretization of the `(1,0)`-form Hilbert spaces `H_s`.
//!
//! With `ω = w dz` and `w = Σ ŵ_k e_k`, the family norm is
//! `‖ω‖²_s = 2∫|w|²` (conformal invariance of `(1,0)`-forms in complex
//! dimension one), so the mass matrix is `2I`. The energy is
//! `E_s(ω) = ‖∂̄ω‖²_{g_s} = 4∫|∂_z̄ w|²/ρ_s`, which gives a Toeplitz-like
//! stiffness from the Fourier coefficients of `1/ρ_s`.

pub mod basis;
pub mod limit;
pub mod quadrature;
pub mod weights;

pub use basis::FourierBasis;
pub use limit::{constrained_limit, extrapolate, regularized_stiffness, ConstrainedLimit, Extrapolation, LimitConstraint};
pub use quadrature::{limit_form_by_refinement, SingularRule, SingularRuleSpec};
pub use weights::DifferenceCoefficients;

use crate::error::{Error, Result};
use crate::geometry::MetricFamily;
use crate::linalg::CMat;

/// Largest FFT grid the assembler will allocate.
pub const MAX_GRID: usize = 2048;

/// Smallest FFT grid that keeps aliasing away from the difference set.
pub fn min_grid(band_limit: usize) -> usize {
    8 * (2 * band_limit + 1)
}

/// FFT resolution needed for `1/ρ_s`: its Fourier coefficients decay like
/// `e^{−2π|p|δ}` where `δ` is the distance of the nearest complex zero of
/// `ρ_s`, so `n` is chosen with `2πnδ ≳ 40`.
pub fn resolving_grid(family: &MetricFamily, band_limit: usize, s: f64) -> usize {
    let base = min_grid(band_limit);
    let Some(order) = family.profile.vanishing_order() else {
        return base;
    };
    let f = family.blend.eval(s);
    if f >= 1.0 {
        return base;
    }
    let k = order as f64 / 2.0;
    let delta = (std::f64::consts::PI / (2.0 * k)).sin() * (f / (1.0 - f)).powf(1.0 / (2.0 * k)) / std::f64::consts::PI;
    // no finite grid resolves a weight that vanishes (f = 0)
    let need = (40.0 / (2.0 * std::f64::consts::PI * delta)).ceil().min(1e12) as usize;
    base.max(need.next_multiple_of(2))
}

/// Mass and stiffness assembly for one metric family at a fixed band limit.
#[derive(Debug, Clone)]
pub struct DiscreteForms {
    basis: FourierBasis,
    family: MetricFamily,
    grid: Option<usize>,
}

impl DiscreteForms {
    pub fn new(band_limit: usize, family: MetricFamily) -> Self {
        Self { basis: FourierBasis::new(band_limit), family, grid: None }
    }

    /// Pins the FFT grid instead of choosing it from `s`.
    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn basis(&self) -> &FourierBasis {
        &self.basis
    }

    pub fn family(&self) -> &MetricFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn mass(&self) -> CMat {
        CMat::identity(self.dim(), self.dim()).scale(2.0)
    }

    /// FFT grid used at parameter `s`.
    pub fn grid_for(&self, s: f64) -> Result<usize> {
        let required = min_grid(self.basis.band_limit());
        match self.grid {
            Some(n) if n < required => Err(Error::AliasingRisk { grid: n, required }),
            Some(n) => Ok(n),
            None => {
                let n = resolving_grid(&self.family, self.basis.band_limit(), s);
                if n > MAX_GRID {
                    Err(Error::AliasingRisk { grid: MAX_GRID, required: n })
                } else {
                    Ok(n)
                }
            }
        }
    }

    /// Fourier coefficients of `1/ρ_s` over the difference set.
    pub fn weight_coefficients(&self, s: f64) -> Result<DifferenceCoefficients> {
        if !(0.0..=1.0).contains(&s) || (s == 0.0 && self.family.profile.is_degenerate()) {
            return Err(Error::OutOfRange { what: "s", value: s });
        }
        let n = self.grid_for(s)?;
        let fam = self.family;
        Ok(weights::fft_coefficients(move |x, y| 1.0 / fam.weight(s, x, y), n, 2 * self.basis.band_limit()))
    }

    /// Stiffness `K_s` for `s ∈ (0, 1]`; `s = 0` needs a limit strategy.
    pub fn stiffness(&self, s: f64) -> Result<CMat> {
        let co = self.weight_coefficients(s)?;
        Ok(weights::stiffness_from_coefficients(&self.basis, &co))
    }

    pub fn constrained_limit(&self) -> Result<ConstrainedLimit> {
        constrained_limit(&self.basis, &self.family.profile, SingularRuleSpec::for_band_limit(self.basis.band_limit()))
    }

    pub fn regularized_stiffness(&self, eps: f64) -> Result<CMat> {
        regularized_stiffness(&self.basis, &self.family.profile, eps)
    }

    /// Gram matrix `4∫ φ_j·conj(φ_k)/ρ_s` of the coefficients of
    /// `(1,1)`-forms `φ dz ∧ dz̄`.
    pub fn top_form_gram(&self, s: f64) -> Result<CMat> {
        let co = self.weight_coefficients(s)?;
        Ok(weights::toeplitz_from_coefficients(&self.basis, &co, 4.0))
    }

    /// `s = 0` counterpart of [`Self::top_form_gram`] on `(1,1)`-forms
    /// vanishing at the degeneracy point to the required order: returns the
    /// orthonormal basis of that subspace and the reduced Gram.
    pub fn top_form_limit_gram(&self) -> Result<(CMat, CMat)> {
        let profile = self.family.profile;
        let reach = 2 * self.basis.band_limit();
        let spec = SingularRuleSpec::for_band_limit(self.basis.band_limit()).refined();
        let co = limit::finite_part_coefficients(&profile, spec, reach);
        let g = weights::toeplitz_from_coefficients(&self.basis, &co, 4.0);
        let n = LimitConstraint::vanishing(&self.basis, profile.constraint_order()).null_basis();
        let reduced = crate::linalg::hermitize(&(n.adjoint() * g * &n));
        Ok((n, reduced))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Blend, DegeneracyProfile};

    #[test]
    fn flat_stiffness_is_diagonal() {
        let fam = MetricFamily::new(DegeneracyProfile::SinSquared { power: 1 }, Blend::Identity);
        let forms = DiscreteForms::new(3, fam);
        let k = forms.stiffness(1.0).unwrap();
        for (j, &(m, n)) in forms.basis().indices().iter().enumerate() {
            let want = 4.0 * std::f64::consts::PI.powi(2) * (m * m + n * n) as f64;
            assert!((k[(j, j)].re - want).abs() < 1e-9 * want.max(1.0));
        }
        let off = k.iter().enumerate().filter(|(i, _)| i % (forms.dim() + 1) != 0).map(|(_, z)| z.norm()).fold(0.0, f64::max);
        assert!(off < 1e-9);
    }

    #[test]
    fn grid_choices() {
        let fam = MetricFamily::default();
        let forms = DiscreteForms::new(8, fam);
        assert_eq!(forms.grid_for(1.0).unwrap(), 136);
        assert!(forms.grid_for(0.01).unwrap() >= 136);
        assert!(matches!(forms.clone().with_grid(64).grid_for(0.5), Err(Error::AliasingRisk { .. })));
        assert!(matches!(forms.stiffness(0.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(forms.grid_for(0.0), Err(Error::AliasingRisk { .. })));
    }
}
