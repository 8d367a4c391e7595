//! Dense complex linear algebra shared by the assembly, spectra and heat modules.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Returns `(a + aᴴ) / 2`.
pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitize(a));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(a.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(a).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn cholesky(a: &CMat) -> Option<Cholesky<C64, Dyn>> {
    Cholesky::new(hermitize(a))
}

/// Applies `f` to the eigenvalues of a Hermitian positive definite matrix.
pub fn hermitian_function(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    if is_diagonal(a) {
        let d: Vec<f64> = a.diagonal().iter().map(|z| z.re).collect();
        if d.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::MassNotSpd);
        }
        return Ok(CMat::from_diagonal(&CVec::from_iterator(d.len(), d.iter().map(|&v| c(f(v), 0.0)))));
    }
    let (vals, vecs) = hermitian_eigen(a);
    if vals.first().is_none_or(|&v| v <= 0.0) {
        return Err(Error::MassNotSpd);
    }
    let scaled = CMat::from_fn(vecs.nrows(), vecs.ncols(), |r, k| vecs[(r, k)] * f(vals[k]));
    Ok(&scaled * vecs.adjoint())
}

fn is_diagonal(a: &CMat) -> bool {
    a.is_square()
        && a.row_iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, z)| i == j || *z == c(0.0, 0.0)))
        && a.diagonal().iter().all(|z| z.im == 0.0)
}

/// `X·diag(wx)·Xᴴ − Y·diag(wy)·Yᴴ` restricted to the span of `[X Y]`: from
/// `[X Y] = Q R` this is `R·diag(wx, −wy)·Rᴴ`, which has the same nonzero
/// eigenvalues and the same unitarily invariant norms. Falls back to the full
/// matrix when `[X Y]` is not tall.
pub fn compressed_difference(x: &CMat, wx: &[f64], y: &CMat, wy: &[f64]) -> CMat {
    let n = x.nrows();
    let k = x.ncols() + y.ncols();
    let weights: Vec<f64> = wx.iter().copied().chain(wy.iter().map(|w| -w)).collect();
    let stacked = CMat::from_fn(n, k, |r, j| if j < x.ncols() { x[(r, j)] } else { y[(r, j - x.ncols())] });
    let frame = if k >= n { stacked } else { stacked.qr().r() };
    let mut scaled = frame.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col.scale_mut(weights[j]);
    }
    hermitize(&(scaled * frame.adjoint()))
}

/// Generalized Hermitian eigenproblem `K v = λ M v` with `M` positive definite.
/// Eigenvectors come back M-orthonormal, eigenvalues ascending.
pub fn generalized_eigen(k: &CMat, m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let chol = cholesky(m).ok_or(Error::MassNotSpd)?;
    let l = chol.l();
    // C = L⁻¹ K L⁻ᴴ
    let mut x = k.clone();
    l.solve_lower_triangular_mut(&mut x);
    let mut c = x.adjoint();
    l.solve_lower_triangular_mut(&mut c);
    let (vals, y) = hermitian_eigen(&c);
    let mut v = y;
    l.adjoint().solve_upper_triangular_mut(&mut v);
    Ok((vals, v))
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> f64 {
    a.clone().singular_values().iter().fold(0.0_f64, |m, &s| m.max(s))
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Makes the first significant coefficient of each column real and positive.
pub fn canonicalize_phases(v: &mut CMat) {
    for mut col in v.column_iter_mut() {
        let max = col.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if max == 0.0 {
            continue;
        }
        if let Some(z) = col.iter().find(|z| z.norm() > 1e-8 * max).copied() {
            let phase = z.conj() / z.norm();
            col.iter_mut().for_each(|e| *e *= phase);
        }
    }
}

pub fn real_to_complex(a: &DMatrix<f64>) -> CMat {
    a.map(|x| c(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn generalized_eigen_recovers_scaled_identity() {
        let m = CMat::identity(5, 5).scale(2.0);
        let k = CMat::from_diagonal(&CVec::from_fn(5, |i, _| c(i as f64, 0.0)));
        let (vals, v) = generalized_eigen(&k, &m).unwrap();
        for (i, l) in vals.iter().enumerate() {
            assert!((l - i as f64 / 2.0).abs() < 1e-14);
        }
        let g = v.adjoint() * &m * &v;
        assert!((g - CMat::identity(5, 5)).norm() < 1e-13);
    }

    #[test]
    fn compressed_difference_keeps_spectrum() {
        let x = CMat::from_fn(7, 2, |i, j| c((i * j) as f64 + 1.0, i as f64 - 2.0 * j as f64));
        let y = CMat::from_fn(7, 3, |i, j| c((i + j) as f64, 0.5 * (i * j) as f64 - 1.0));
        let (wx, wy) = ([0.7, 0.2], [0.5, 0.1, 0.05]);
        let scale = |m: &CMat, w: &[f64]| {
            let mut s = m.clone();
            for (j, mut col) in s.column_iter_mut().enumerate() {
                col.scale_mut(w[j]);
            }
            s * m.adjoint()
        };
        let full = scale(&x, &wx) - scale(&y, &wy);
        let small = compressed_difference(&x, &wx, &y, &wy);
        assert_eq!(small.nrows(), 5);
        let abs_sum = |m: &CMat| hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum::<f64>();
        assert!((abs_sum(&full) - abs_sum(&small)).abs() < 1e-10 * abs_sum(&full));
        assert!((full.norm() - small.norm()).abs() < 1e-10 * full.norm());
    }

    #[test]
    fn diagonal_functions_skip_the_eigensolver() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let h = hermitian_function(&m, f64::sqrt).unwrap();
        assert_eq!(h[(1, 1)], c(3.0, 0.0));
        assert!(hermitian_function(&m.scale(-1.0), f64::sqrt).is_err());
    }

    #[test]
    fn complex_hermitian_eigen_is_accurate() {
        let a = CMat::from_fn(6, 6, |i, j| c((i + j) as f64, i as f64 - j as f64));
        let (vals, v) = hermitian_eigen(&a);
        let r = &a * &v - &v * CMat::from_diagonal(&CVec::from_iterator(6, vals.iter().map(|&x| c(x, 0.0))));
        assert!(r.norm() < 1e-12);
    }
}
