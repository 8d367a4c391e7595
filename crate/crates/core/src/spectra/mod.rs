//! Generalized eigenproblems `K v = λ M v`, eigenvalue clusters and the
//! M-orthogonal projectors onto them.

mod iterative;
pub mod limit;

pub use iterative::{solve_iterative, IterativeOptions};
pub use limit::{constrained_spectrum, constrained_spectrum_from, family_spectrum, regularized_spectrum, RegularizedLimit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{canonicalize_phases, generalized_eigen, hermitian_function, spectral_norm, CMat};

/// Above this dimension [`solve`] switches to the iterative path.
pub const DENSE_LIMIT: usize = 4000;

/// How a spectrum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// `K_s` at some `s > 0`.
    Direct,
    /// The `s = 0` problem on the constrained subspace.
    Constrained,
    /// The `s = 0` problem through `ε`-regularization and extrapolation.
    Regularized,
}

impl Strategy {
    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::Constrained => "constrained",
            Strategy::Regularized => "regularized",
        }
    }
}

/// Ascending eigenvalues with M-orthonormal eigenvectors in the full basis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `d × k`, columns M-orthonormal.
    pub eigenvectors: CMat,
    pub mass: CMat,
    /// `‖K v − λ M v‖` per pair, `‖v‖_M = 1`.
    pub residuals: Vec<f64>,
    pub s: Option<f64>,
    pub band_limit: usize,
    pub strategy: Strategy,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.mass.nrows()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// The first `k` pairs.
    pub fn truncated(&self, k: usize) -> Spectrum {
        let k = k.min(self.len());
        Spectrum {
            eigenvalues: self.eigenvalues[..k].to_vec(),
            eigenvectors: self.eigenvectors.columns(0, k).into_owned(),
            mass: self.mass.clone(),
            residuals: self.residuals[..k].to_vec(),
            s: self.s,
            band_limit: self.band_limit,
            strategy: self.strategy,
        }
    }

    pub fn with_meta(mut self, s: Option<f64>, band_limit: usize, strategy: Strategy) -> Self {
        self.s = s;
        self.band_limit = band_limit;
        self.strategy = strategy;
        self
    }
}

pub(crate) fn residuals(k: &CMat, m: &CMat, values: &[f64], vectors: &CMat) -> Vec<f64> {
    let kv = k * vectors;
    let mv = m * vectors;
    (0..values.len()).map(|j| (kv.column(j) - mv.column(j) * crate::linalg::c(values[j], 0.0)).norm()).collect()
}

/// Dense generalized solve, all pairs kept up to `count`.
pub fn solve_dense(k: &CMat, m: &CMat, count: usize) -> Result<Spectrum> {
    let (vals, mut vecs) = generalized_eigen(k, m)?;
    let count = count.min(vals.len());
    let values = vals[..count].to_vec();
    let mut v = vecs.columns(0, count).into_owned();
    canonicalize_phases(&mut v);
    vecs = v;
    let res = residuals(k, m, &values, &vecs);
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: vecs,
        mass: m.clone(),
        residuals: res,
        s: None,
        band_limit: 0,
        strategy: Strategy::Direct,
    })
}

/// Smallest `count` eigenpairs of `K v = λ M v`.
pub fn solve(k: &CMat, m: &CMat, count: usize) -> Result<Spectrum> {
    if k.nrows() != m.nrows() || !k.is_square() || !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: k.nrows() });
    }
    if count > k.nrows() {
        return Err(Error::OutOfRange { what: "eigenpair count", value: count as f64 });
    }
    if k.nrows() < DENSE_LIMIT {
        solve_dense(k, m, count)
    } else {
        solve_iterative(k, m, count, &IterativeOptions::default())
    }
}

/// Number of eigenvalues `≤ tol`, provided the next one exceeds them by a
/// factor of at least 100 (split as `≤ tol/10` and `≥ 10·tol`).
pub fn kernel_dim(spec: &Spectrum, tol: f64) -> Result<usize> {
    let l = spec.eigenvalues.iter().take_while(|&&v| v <= tol).count();
    let below_ok = spec.eigenvalues[..l].iter().all(|&v| v <= tol / 10.0);
    let above_ok = spec.eigenvalues.get(l).is_none_or(|&v| v >= 10.0 * tol);
    if !(below_ok && above_ok) {
        let culprit = if below_ok { spec.eigenvalues[l] } else { spec.eigenvalues[l - 1] };
        return Err(Error::AmbiguousKernel(culprit));
    }
    Ok(l)
}

/// Consecutive eigenvalues within `gap_tol` of each other, as an index range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCluster {
    pub first: usize,
    pub last: usize,
    pub representative: f64,
}

impl EigenCluster {
    pub fn multiplicity(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }
}

/// Default gap tolerance, `1e-3·λ_max` over the computed window.
pub fn default_gap_tol(spec: &Spectrum) -> f64 {
    1e-3 * spec.eigenvalues.last().copied().unwrap_or(0.0).abs()
}

pub fn cluster(spec: &Spectrum, gap_tol: f64) -> Result<Vec<EigenCluster>> {
    if !(gap_tol > 10.0 * spec.max_residual()) {
        return Err(Error::NoStableClustering(gap_tol));
    }
    let ev = &spec.eigenvalues;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=ev.len() {
        if i == ev.len() || ev[i] - ev[i - 1] > gap_tol {
            if i > start {
                if ev[i - 1] - ev[start] > gap_tol {
                    return Err(Error::NoStableClustering(gap_tol));
                }
                let mean = ev[start..i].iter().sum::<f64>() / (i - start) as f64;
                out.push(EigenCluster { first: start, last: i - 1, representative: mean });
            }
            start = i;
        }
    }
    Ok(out)
}

/// `P = V_c V_cᴴ M`.
pub fn cluster_projection(spec: &Spectrum, cluster: &EigenCluster) -> CMat {
    let v = spec.eigenvectors.columns(cluster.first, cluster.multiplicity());
    v * v.adjoint() * &spec.mass
}

/// `‖M^{1/2}(P − Q)M^{−1/2}‖₂`.
pub fn projection_gap(p: &CMat, q: &CMat, m: &CMat) -> Result<f64> {
    let half = hermitian_function(m, f64::sqrt)?;
    let inv_half = hermitian_function(m, |x| 1.0 / x.sqrt())?;
    Ok(spectral_norm(&(half * (p - q) * inv_half)))
}

/// [`projection_gap`] of the cluster projections of two spectra over the
/// same mass matrix, without forming the projections.
pub fn cluster_gap(a: &Spectrum, b: &Spectrum, cluster: &EigenCluster) -> Result<f64> {
    if a.mass != b.mass {
        return Err(Error::GeometryMismatch(a.dim(), b.dim()));
    }
    let available = a.len().min(b.len());
    if cluster.last >= available {
        return Err(Error::DepthExceeded { depth: cluster.last + 1, available });
    }
    let half = hermitian_function(&a.mass, f64::sqrt)?;
    let m = cluster.multiplicity();
    let x = &half * a.eigenvectors.columns(cluster.first, m);
    let y = &half * b.eigenvectors.columns(cluster.first, m);
    let ones = vec![1.0; m];
    let d = crate::linalg::compressed_difference(&x, &ones, &y, &ones);
    Ok(crate::linalg::hermitian_eigenvalues(&d).iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
}
