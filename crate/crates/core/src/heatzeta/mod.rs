//! Heat traces, heat operators and kernels, and zeta functions computed from
//! a [`Spectrum`].
//!
//! Tails beyond the computed eigenpairs are certified by comparison with the
//! flat spectrum: `λ_k(s) ≥ λ_k(1)/ν` for every index `k`.

pub mod lattice;
pub mod special;
mod zeta;

pub use lattice::FlatLattice;
pub use zeta::{zeta_mellin, zeta_sum, ZetaSample};

use serde::Serialize;

use crate::assembly::FourierBasis;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat, C64};
use crate::spectra::Spectrum;

/// Default certificate tolerance for truncated sums.
pub const DEFAULT_EPS: f64 = 1e-10;

/// A heat trace value with its certified truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatValue {
    pub t: f64,
    pub value: f64,
    /// Bound on `Σ_{k > depth} e^{−tλ_k}`.
    pub tail: f64,
    pub depth: usize,
}

/// `Σ_{k ≤ k̄} e^{−tλ_k}` with the smallest `k̄` whose flat-comparison tail
/// is below `eps`.
pub fn heat_trace(spec: &Spectrum, t: f64, nu: f64, eps: f64) -> Result<HeatValue> {
    if !(t > 0.0) {
        return Err(Error::OutOfRange { what: "t", value: t });
    }
    let lattice = FlatLattice::covering(spec.len());
    let a = t * 2.0 * std::f64::consts::PI.powi(2) / nu;
    let tail_at = |k: usize| lattice.gaussian_tail(k, a);
    let last = tail_at(spec.len());
    if last > eps {
        return Err(Error::InsufficientDepth { t, tail: last });
    }
    // tails decrease with the index
    let (mut lo, mut hi) = (0, spec.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if tail_at(mid) <= eps {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let depth = lo;
    let value = spec.eigenvalues[..depth].iter().map(|l| (-t * l).exp()).sum();
    Ok(HeatValue { t, value, tail: tail_at(depth), depth })
}

/// Heat traces over a t-grid, with the eigenvalues kept for later quadrature.
#[derive(Debug, Clone, Serialize)]
pub struct HeatProfile {
    pub eigenvalues: Vec<f64>,
    pub nu: f64,
    pub t: Vec<f64>,
    pub traces: Vec<f64>,
    pub tails: Vec<f64>,
    pub depths: Vec<usize>,
}

impl HeatProfile {
    pub fn new(spec: &Spectrum, t_grid: &[f64], nu: f64, eps: f64) -> Result<Self> {
        let values: Vec<HeatValue> = t_grid.iter().map(|&t| heat_trace(spec, t, nu, eps)).collect::<Result<_>>()?;
        Ok(Self {
            eigenvalues: spec.eigenvalues.clone(),
            nu,
            t: t_grid.to_vec(),
            traces: values.iter().map(|v| v.value).collect(),
            tails: values.iter().map(|v| v.tail).collect(),
            depths: values.iter().map(|v| v.depth).collect(),
        })
    }

    /// `Σ_k e^{−tλ_k} − ℓ` over all stored eigenvalues.
    pub fn reduced_trace(&self, t: f64, ell: usize) -> f64 {
        self.eigenvalues.iter().skip(ell).map(|l| (-t * l).exp()).sum::<f64>()
            + self.eigenvalues.iter().take(ell).map(|l| (-t * l).exp_m1()).sum::<f64>()
    }
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `A = Σ_{k>ℓ} e^{−λ_k/2}` of the bound `Tr e^{−tΔ} − ℓ ≤ A·e^{−tλ_{ℓ+1}/2}`
/// (valid for `t ≥ 1`).
pub fn decay_constant(spec: &Spectrum, ell: usize) -> f64 {
    spec.eigenvalues.iter().skip(ell).map(|l| (-l / 2.0).exp()).sum()
}

/// Smallest doubling of `1` beyond which `Tr e^{−tΔ} − ℓ ≤ eps` for every
/// spectrum in `specs`.
pub fn decay_horizon(specs: &[&Spectrum], ell: usize, eps: f64) -> Result<f64> {
    let mut t = 1.0;
    for _ in 0..60 {
        let worst = specs
            .iter()
            .map(|s| decay_constant(s, ell) * (-t * s.eigenvalues.get(ell).copied().unwrap_or(f64::INFINITY) / 2.0).exp())
            .fold(0.0, f64::max);
        if worst <= eps {
            return Ok(t);
        }
        t *= 2.0;
    }
    Err(Error::TailUncertified(t))
}

/// Pointwise check of `Tr e^{−tΔ} − ℓ ≤ A·e^{−tλ_{ℓ+1}/2}` on `t ≥ 1`
/// grid points; returns the worst slack (nonnegative when it holds).
pub fn check_decay_bound(spec: &Spectrum, ell: usize, t_grid: &[f64]) -> f64 {
    let a = decay_constant(spec, ell);
    let gap = spec.eigenvalues.get(ell).copied().unwrap_or(f64::INFINITY);
    t_grid
        .iter()
        .filter(|&&t| t >= 1.0)
        .map(|&t| {
            let lhs: f64 = spec.eigenvalues.iter().skip(ell).map(|l| (-t * l).exp()).sum();
            a * (-t * gap / 2.0).exp() * (1.0 + 1e-12) - lhs
        })
        .fold(f64::INFINITY, f64::min)
}

/// `E_t = Σ e^{−tλ_k} v_k v_kᴴ M`.
pub fn heat_operator(spec: &Spectrum, t: f64) -> CMat {
    coefficient_kernel(spec, t, spec.len()) * &spec.mass
}

/// `C = Σ_{k<depth} e^{−tλ_k} v_k v_kᴴ`, the coefficient matrix of the heat kernel.
fn coefficient_kernel(spec: &Spectrum, t: f64, depth: usize) -> CMat {
    let v = spec.eigenvectors.columns(0, depth);
    let mut scaled = v.clone_owned();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col.scale_mut((-t * spec.eigenvalues[k]).exp());
    }
    scaled * v.adjoint()
}

fn check_geometry(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.dim() != b.dim() || a.mass != b.mass {
        return Err(Error::GeometryMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// `M^{1/2} E_t M^{−1/2} = U e^{−tΛ} Uᴴ` with `U = M^{1/2} V`, Hermitian.
fn symmetric_heat(spec: &Spectrum, t: f64) -> Result<CMat> {
    let half = crate::linalg::hermitian_function(&spec.mass, f64::sqrt)?;
    Ok(&half * coefficient_kernel(spec, t, spec.len()) * &half)
}

/// Heat weights below this are dropped before compressing a difference; the
/// omitted part has trace norm at most `dim · WEIGHT_CUT`.
const WEIGHT_CUT: f64 = 1e-18;

/// Columns of `u` whose weight `e^{−tλ}` survives the cut, with their weights.
fn live_columns(u: &CMat, values: &[f64], t: f64) -> (CMat, Vec<f64>) {
    let keep: Vec<usize> = (0..values.len()).filter(|&k| (-t * values[k]).exp() > WEIGHT_CUT).collect();
    let cols = CMat::from_fn(u.nrows(), keep.len(), |r, j| u[(r, keep[j])]);
    (cols, keep.iter().map(|&k| (-t * values[k]).exp()).collect())
}

fn heat_difference(ua: &CMat, a: &[f64], ub: &CMat, b: &[f64], t: f64) -> CMat {
    let (xa, wa) = live_columns(ua, a, t);
    let (xb, wb) = live_columns(ub, b, t);
    crate::linalg::compressed_difference(&xa, &wa, &xb, &wb)
}

/// `Tr|E_t^a − E_t^b|` in the M-geometry.
pub fn trace_norm_distance(a: &Spectrum, b: &Spectrum, t: f64) -> Result<f64> {
    Ok(trace_norm_profile(a, b, &[t])?[0])
}

/// [`trace_norm_distance`] over a grid of times, sharing the factorizations.
pub fn trace_norm_profile(a: &Spectrum, b: &Spectrum, t_grid: &[f64]) -> Result<Vec<f64>> {
    check_geometry(a, b)?;
    let half = crate::linalg::hermitian_function(&a.mass, f64::sqrt)?;
    let ua = &half * &a.eigenvectors;
    let ub = &half * &b.eigenvectors;
    Ok(t_grid
        .iter()
        .map(|&t| {
            let d = heat_difference(&ua, &a.eigenvalues, &ub, &b.eigenvalues, t);
            hermitian_eigenvalues(&d).iter().map(|x| x.abs()).sum()
        })
        .collect())
}

/// Same as [`trace_norm_distance`] after compressing both operators to the
/// subspace spanned by the orthonormal columns of `frame`.
pub fn trace_norm_distance_projected(a: &Spectrum, b: &Spectrum, t: f64, frame: &CMat) -> Result<f64> {
    check_geometry(a, b)?;
    let d = symmetric_heat(a, t)? - symmetric_heat(b, t)?;
    Ok(hermitian_eigenvalues(&(frame.adjoint() * d * frame)).iter().map(|x| x.abs()).sum())
}

/// `Σ_{k<depth} e^{−tλ_k} w_k(x)·conj(w_k(y))`, the coefficient of the heat
/// kernel in the `dz ⊗ dz*` trivialization.
pub fn heat_kernel_eval(spec: &Spectrum, basis: &FourierBasis, t: f64, x: (f64, f64), y: (f64, f64), depth: usize) -> Result<C64> {
    if depth > spec.len() {
        return Err(Error::DepthExceeded { depth, available: spec.len() });
    }
    let ex = point_row(basis, x);
    let ey = point_row(basis, y);
    Ok((0..depth)
        .map(|k| {
            let col = spec.eigenvectors.column(k);
            let wx: C64 = ex.iter().zip(col.iter()).map(|(e, v)| e * v).sum();
            let wy: C64 = ey.iter().zip(col.iter()).map(|(e, v)| e * v).sum();
            wx * wy.conj() * (-t * spec.eigenvalues[k]).exp()
        })
        .sum())
}

fn point_row(basis: &FourierBasis, p: (f64, f64)) -> Vec<C64> {
    basis.indices().iter().map(|&(m, n)| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (m as f64 * p.0 + n as f64 * p.1))).collect()
}

/// `L²(A×A)` distance of the heat kernels, `(4∫∫|k_a − k_b|²)^{1/2}`, by Parseval.
pub fn kernel_l2_distance(a: &Spectrum, b: &Spectrum, t: f64) -> Result<f64> {
    Ok(kernel_l2_profile(a, b, &[t])?[0])
}

/// [`kernel_l2_distance`] over a grid of times.
pub fn kernel_l2_profile(a: &Spectrum, b: &Spectrum, t_grid: &[f64]) -> Result<Vec<f64>> {
    check_geometry(a, b)?;
    Ok(t_grid
        .iter()
        .map(|&t| {
            let d = heat_difference(&a.eigenvectors, &a.eigenvalues, &b.eigenvectors, &b.eigenvalues, t);
            2.0 * crate::linalg::frobenius(&d)
        })
        .collect())
}

/// [`kernel_l2_distance`] by direct quadrature on an `n × n` grid in each variable.
pub fn kernel_l2_distance_quadrature(a: &Spectrum, b: &Spectrum, basis: &FourierBasis, t: f64, n: usize) -> Result<f64> {
    check_geometry(a, b)?;
    let required = 4 * (2 * basis.band_limit() + 1);
    if n < required {
        return Err(Error::AliasingRisk { grid: n, required });
    }
    let nodes = crate::geometry::half_offset_nodes(n);
    let pts: Vec<(f64, f64)> = nodes.iter().flat_map(|&x| nodes.iter().map(move |&y| (x, y))).collect();
    let s = CMat::from_fn(pts.len(), basis.dim(), |i, j| {
        let (m, k) = basis.indices()[j];
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (m as f64 * pts[i].0 + k as f64 * pts[i].1))
    });
    let d = coefficient_kernel(a, t, a.len()) - coefficient_kernel(b, t, b.len());
    let k = &s * d * s.adjoint();
    let cell = 1.0 / (n * n) as f64;
    let sum: f64 = k.iter().map(|z| z.norm_sqr()).sum();
    Ok((4.0 * sum * cell * cell).sqrt())
}

pub(crate) fn ell_checked(spec: &Spectrum, ell: usize) -> Result<()> {
    if ell > spec.len() {
        return Err(Error::DepthExceeded { depth: ell, available: spec.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVec};
    use crate::spectra::{solve, Strategy};

    fn diagonal_spectrum(values: &[f64]) -> Spectrum {
        let d = values.len();
        let m = CMat::identity(d, d);
        let k = CMat::from_diagonal(&CVec::from_iterator(d, values.iter().map(|&x| c(x, 0.0))));
        solve(&k, &m, d).unwrap().with_meta(None, 0, Strategy::Direct)
    }

    #[test]
    fn commuting_diagonals() {
        let a = diagonal_spectrum(&[0.0, 1.0, 3.0]);
        let b = diagonal_spectrum(&[0.0, 2.0, 3.5]);
        let t = 0.7;
        let want = ((-t * 1.0f64).exp() - (-t * 2.0f64).exp()).abs() + ((-t * 3.0f64).exp() - (-t * 3.5f64).exp()).abs();
        assert!((trace_norm_distance(&a, &b, t).unwrap() - want).abs() < 1e-14);
        assert!(trace_norm_distance(&a, &a, t).unwrap() < 1e-15);
        let profile = trace_norm_profile(&a, &b, &[0.2, t]).unwrap();
        assert!((profile[1] - want).abs() < 1e-14);
        assert!((profile[0] - trace_norm_distance(&a, &b, 0.2).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn semigroup_on_synthetic_spectrum() {
        let a = diagonal_spectrum(&[0.0, 1.0, 3.0, 10.0]);
        let e = heat_operator(&a, 0.3) * heat_operator(&a, 0.7) - heat_operator(&a, 1.0);
        assert!(e.norm() < 1e-14);
    }

    #[test]
    fn grids() {
        let g = log_grid(0.05, 20.0, 5);
        assert!((g[0] - 0.05).abs() < 1e-15 && (g[4] - 20.0).abs() < 1e-12);
    }
}
