//! Two discretizations of the `s = 0` form, whose weight `1/ρ_0` is not
//! integrable at the degeneracy point.
//!
//! *Constrained*: restrict to `∂_z̄ w` vanishing at the origin to the order
//! the profile requires. On that subspace the form only sees the finite
//! part of `ĉ`, obtained by subtracting the Taylor polynomial of the
//! exponential before integrating.
//!
//! *Regularized*: replace `ρ_0` by `ρ_0 + ε` and extrapolate eigenvalues
//! in `ε`.

use nalgebra::DMatrix;

use super::basis::FourierBasis;
use super::quadrature::{SingularRule, SingularRuleSpec};
use super::weights::{fft_coefficients, stiffness_from_coefficients, DifferenceCoefficients};
use crate::error::{Error, Result};
use crate::geometry::DegeneracyProfile;
use crate::linalg::{c, CMat, C64};

/// Linear conditions `∂_x^α ∂_y^β ∂_z̄ w(0) = 0`, `α + β < order`.
#[derive(Debug, Clone)]
pub struct LimitConstraint {
    rows: CMat,
}

impl LimitConstraint {
    pub fn new(basis: &FourierBasis, profile: &DegeneracyProfile) -> Self {
        Self::build(basis, profile.constraint_order(), true)
    }

    /// Conditions `∂_x^α ∂_y^β w(0) = 0`, `α + β < order`, on the function itself.
    pub fn vanishing(basis: &FourierBasis, order: usize) -> Self {
        Self::build(basis, order, false)
    }

    fn build(basis: &FourierBasis, order: usize, dbar: bool) -> Self {
        let d = basis.dim();
        let two_pi_i = c(0.0, 2.0 * std::f64::consts::PI);
        let pi_i = c(0.0, std::f64::consts::PI);
        let mut rows = Vec::new();
        for total in 0..order {
            for alpha in 0..=total {
                let beta = total - alpha;
                let row: Vec<C64> = basis
                    .indices()
                    .iter()
                    .enumerate()
                    .map(|(k, &(m, n))| {
                        let lead = if dbar { pi_i * basis.symbol(k) } else { c(1.0, 0.0) };
                        lead * (two_pi_i * m as f64).powi(alpha as i32) * (two_pi_i * n as f64).powi(beta as i32)
                    })
                    .collect();
                rows.push(row);
            }
        }
        let rows = CMat::from_fn(rows.len(), d, |i, k| rows[i][k]);
        Self { rows }
    }

    pub fn rows(&self) -> &CMat {
        &self.rows
    }

    pub fn count(&self) -> usize {
        self.rows.nrows()
    }

    /// Values of the constraint functionals on `w`.
    pub fn apply(&self, w: &[C64]) -> Vec<C64> {
        self.rows.row_iter().map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum()).collect()
    }

    /// Orthonormal basis of the kernel, from Householder reflections of the
    /// (row-normalized) constraint matrix.
    pub fn null_basis(&self) -> CMat {
        let d = self.rows.ncols();
        let r = self.rows.nrows();
        if r == 0 {
            return CMat::identity(d, d);
        }
        let mut a = self.rows.adjoint();
        for mut col in a.column_iter_mut() {
            let nrm = col.norm();
            col.unscale_mut(nrm);
        }
        let mut reflectors: Vec<(usize, Vec<C64>)> = Vec::with_capacity(r);
        for j in 0..r {
            let x: Vec<C64> = (j..d).map(|i| a[(i, j)]).collect();
            let xn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { c(1.0, 0.0) };
            let mut v = x.clone();
            v[0] += phase * xn;
            let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vn2 == 0.0 {
                continue;
            }
            for col in j..r {
                let dot: C64 = (j..d).map(|i| v[i - j].conj() * a[(i, col)]).sum();
                let f = dot * 2.0 / vn2;
                for i in j..d {
                    a[(i, col)] -= v[i - j] * f;
                }
            }
            reflectors.push((j, v));
        }
        // Q = H_0 ⋯ H_{r−1}; the trailing d − r columns span the kernel.
        let mut q = CMat::zeros(d, d - r);
        for k in 0..d - r {
            q[(r + k, k)] = c(1.0, 0.0);
        }
        for (j, v) in reflectors.iter().rev() {
            let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            for col in 0..d - r {
                let dot: C64 = (*j..d).map(|i| v[i - j].conj() * q[(i, col)]).sum();
                let f = dot * 2.0 / vn2;
                for i in *j..d {
                    q[(i, col)] -= v[i - j] * f;
                }
            }
        }
        q
    }
}

/// Constrained `s = 0` problem on the kernel of [`LimitConstraint`].
#[derive(Debug, Clone)]
pub struct ConstrainedLimit {
    /// `d × (d − r)`, orthonormal columns.
    pub null_basis: CMat,
    /// Reduced stiffness `Nᴴ K N`.
    pub stiffness: CMat,
    /// Reduced mass `Nᴴ M N`.
    pub mass: CMat,
    /// Relative change of the weight coefficients under one refinement of the rule.
    pub quadrature_defect: f64,
}

impl ConstrainedLimit {
    /// Extends reduced coefficient vectors by zero to the full basis.
    pub fn extend(&self, reduced: &CMat) -> CMat {
        &self.null_basis * reduced
    }
}

/// Finite-part coefficients of `1/ρ_0` for constrained forms.
pub fn finite_part_coefficients(profile: &DegeneracyProfile, spec: SingularRuleSpec, reach: usize) -> DifferenceCoefficients {
    let rule = SingularRule::new(spec);
    let order = 2 * profile.constraint_order();
    let p = *profile;
    rule.coefficients(move |x, y| 1.0 / p.eval(x, y), order, reach)
}

pub fn constrained_limit(basis: &FourierBasis, profile: &DegeneracyProfile, spec: SingularRuleSpec) -> Result<ConstrainedLimit> {
    profile.validate()?;
    let d = basis.dim();
    let mass = CMat::identity(d, d).scale(2.0);
    let reach = 2 * basis.band_limit();
    if !profile.is_degenerate() {
        let p = *profile;
        let n = super::min_grid(basis.band_limit());
        let co = fft_coefficients(move |x, y| 1.0 / p.eval(x, y), n, reach);
        let k = stiffness_from_coefficients(basis, &co);
        return Ok(ConstrainedLimit { null_basis: CMat::identity(d, d), stiffness: k, mass, quadrature_defect: 0.0 });
    }
    let co = finite_part_coefficients(profile, spec, reach);
    let fine = finite_part_coefficients(profile, spec.refined(), reach);
    let defect = co.max_abs_diff(&fine) / co.max_abs().max(1e-300);
    if defect > 1e-6 {
        return Err(Error::QuadratureDivergence { ratio: defect });
    }
    let k = stiffness_from_coefficients(basis, &fine);
    let n = LimitConstraint::new(basis, profile).null_basis();
    let reduced = crate::linalg::hermitize(&(n.adjoint() * &k * &n));
    let reduced_mass = crate::linalg::hermitize(&(n.adjoint() * &mass * &n));
    Ok(ConstrainedLimit { null_basis: n, stiffness: reduced, mass: reduced_mass, quadrature_defect: defect })
}

/// Stiffness of the form with weight `1/(ρ_0 + ε)`.
pub fn regularized_stiffness(basis: &FourierBasis, profile: &DegeneracyProfile, eps: f64) -> Result<CMat> {
    if !(1e-6..=1e-1).contains(&eps) {
        return Err(Error::OutOfRange { what: "regularization parameter", value: eps });
    }
    profile.validate()?;
    let p = *profile;
    let reach = 2 * basis.band_limit();
    let co = if p.is_degenerate() {
        let k = p.constraint_order() as f64;
        let scale = eps.powf(1.0 / (2.0 * k)) / std::f64::consts::PI;
        let spec = SingularRuleSpec::for_band_limit(basis.band_limit()).resolving(scale);
        SingularRule::new(spec).coefficients(move |x, y| 1.0 / (p.eval(x, y) + eps), 0, reach)
    } else {
        fft_coefficients(move |x, y| 1.0 / (p.eval(x, y) + eps), super::min_grid(basis.band_limit()), reach)
    };
    Ok(stiffness_from_coefficients(basis, &co))
}

/// Least-squares fit `λ(ε) ≈ a + b/ln(1/ε) + c·ε` per eigenvalue index.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    /// `a`, the extrapolated `ε → 0` value per index.
    pub limits: Vec<f64>,
    /// Root-mean-square fit residual per index.
    pub residuals: Vec<f64>,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
}

/// `series[i]` holds the eigenvalues computed at `eps[i]`.
pub fn extrapolate(eps: &[f64], series: &[Vec<f64>]) -> Result<Extrapolation> {
    if eps.len() < 4 || eps.len() != series.len() {
        return Err(Error::OutOfRange { what: "regularization list length", value: eps.len() as f64 });
    }
    if let Some(&bad) = eps.iter().find(|e| !(1e-6..=1e-1).contains(*e)) {
        return Err(Error::OutOfRange { what: "regularization parameter", value: bad });
    }
    let width = series.iter().map(Vec::len).min().unwrap_or(0);
    let rows = eps.len();
    let mut design = DMatrix::<f64>::from_fn(rows, 3, |i, j| match j {
        0 => 1.0,
        1 => 1.0 / (1.0 / eps[i]).ln(),
        _ => eps[i],
    });
    let scales: Vec<f64> = (0..3).map(|j| design.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        design.column_mut(j).unscale_mut(*s);
    }
    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = smax / smin;
    if !(condition <= 1e8) {
        return Err(Error::IllConditioned(condition));
    }
    let rhs = DMatrix::<f64>::from_fn(rows, width, |i, k| series[i][k]);
    let coef = svd.solve(&rhs, 1e-14).map_err(|e| Error::Config(e.to_string()))?;
    let fitted = &design * &coef;
    let limits = (0..width).map(|k| coef[(0, k)] / scales[0]).collect();
    let residuals =
        (0..width).map(|k| ((0..rows).map(|i| (fitted[(i, k)] - rhs[(i, k)]).powi(2)).sum::<f64>() / rows as f64).sqrt()).collect();
    Ok(Extrapolation { limits, residuals, condition })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_basis_is_orthonormal_kernel() {
        let basis = FourierBasis::new(3);
        for power in [1, 2] {
            let profile = DegeneracyProfile::SinSquared { power };
            let con = LimitConstraint::new(&basis, &profile);
            assert_eq!(con.count(), (power * (power + 1) / 2) as usize);
            let n = con.null_basis();
            assert_eq!(n.ncols(), basis.dim() - con.count());
            let g = n.adjoint() * &n;
            assert!((g - CMat::identity(n.ncols(), n.ncols())).norm() < 1e-12);
            let cn = con.rows() * &n;
            assert!(cn.norm() < 1e-10 * con.rows().norm());
        }
    }

    #[test]
    fn extrapolation_recovers_model_exactly() {
        let eps: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let series: Vec<Vec<f64>> = eps.iter().map(|&e| vec![5.0, 1.0 + 3.0 / (1.0 / e).ln() + 7.0 * e]).collect();
        let x = extrapolate(&eps, &series).unwrap();
        assert!((x.limits[0] - 5.0).abs() < 1e-10);
        assert!((x.limits[1] - 1.0).abs() < 1e-9);
        assert!(x.residuals.iter().all(|r| *r < 1e-10));
        assert!(extrapolate(&eps[..3], &series[..3]).is_err());
    }
}
