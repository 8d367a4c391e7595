//! Spectra along the family and at `s = 0` by either limit strategy.

use rayon::prelude::*;

use super::{solve, Spectrum, Strategy};
use crate::assembly::{extrapolate, ConstrainedLimit, DiscreteForms, Extrapolation};
use crate::error::{Error, Result};

/// Regularization parameters used when none are given.
pub const DEFAULT_EPS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Smallest `count` eigenpairs of `K_s` for `s ∈ (0, 1]`.
pub fn family_spectrum(forms: &DiscreteForms, s: f64, count: usize) -> Result<Spectrum> {
    let k = forms.stiffness(s)?;
    Ok(solve(&k, &forms.mass(), count.min(forms.dim()))?.with_meta(Some(s), forms.basis().band_limit(), Strategy::Direct))
}

/// The constrained `s = 0` problem; eigenvectors are extended by zero to the
/// full basis, residuals refer to the reduced problem.
pub fn constrained_spectrum(forms: &DiscreteForms, count: usize) -> Result<Spectrum> {
    constrained_spectrum_from(forms, &forms.constrained_limit()?, count)
}

/// [`constrained_spectrum`] from an already assembled limit problem.
pub fn constrained_spectrum_from(forms: &DiscreteForms, limit: &ConstrainedLimit, count: usize) -> Result<Spectrum> {
    let reduced = solve(&limit.stiffness, &limit.mass, count.min(limit.stiffness.nrows()))?;
    Ok(Spectrum { eigenvectors: limit.extend(&reduced.eigenvectors), mass: forms.mass(), ..reduced }.with_meta(
        Some(0.0),
        forms.basis().band_limit(),
        Strategy::Constrained,
    ))
}

/// `ε`-regularized `s = 0` spectrum.
#[derive(Debug, Clone)]
pub struct RegularizedLimit {
    /// Extrapolated eigenvalues for the first `depth` indices, the
    /// smallest-`ε` solve elsewhere; eigenvectors and residuals are those of
    /// the smallest-`ε` solve.
    pub spectrum: Spectrum,
    pub extrapolation: Extrapolation,
    pub eps: Vec<f64>,
    /// Eigenvalues per `ε`, first `depth` indices.
    pub raw: Vec<Vec<f64>>,
}

pub fn regularized_spectrum(forms: &DiscreteForms, eps: &[f64], count: usize, depth: usize) -> Result<RegularizedLimit> {
    let count = count.min(forms.dim());
    let depth = depth.min(count);
    let mass = forms.mass();
    let solves: Vec<Spectrum> = eps.par_iter().map(|&e| solve(&forms.regularized_stiffness(e)?, &mass, count)).collect::<Result<_>>()?;
    let raw: Vec<Vec<f64>> = solves.iter().map(|s| s.eigenvalues[..depth].to_vec()).collect();
    let extrapolation = extrapolate(eps, &raw)?;
    let finest = eps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(Error::OutOfRange { what: "regularization list length", value: 0.0 })?;
    let base = solves[finest].clone();
    let mut values = base.eigenvalues.clone();
    values[..depth].copy_from_slice(&extrapolation.limits);
    // keep the pairs ascending after the substitution
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let vectors = crate::linalg::CMat::from_fn(base.dim(), order.len(), |r, k| base.eigenvectors[(r, order[k])]);
    let spectrum = Spectrum {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: vectors,
        residuals: order.iter().map(|&i| base.residuals[i]).collect(),
        ..base
    }
    .with_meta(Some(0.0), forms.basis().band_limit(), Strategy::Regularized);
    Ok(RegularizedLimit { spectrum, extrapolation, eps: eps.to_vec(), raw })
}
