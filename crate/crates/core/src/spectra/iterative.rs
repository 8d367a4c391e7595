//! Shift-invert block subspace iteration with Rayleigh–Ritz extraction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{residuals, Spectrum, Strategy};
use crate::error::{Error, Result};
use crate::linalg::{c, canonicalize_phases, cholesky, generalized_eigen, hermitize, CMat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeOptions {
    /// Solves with `K + shift·M`, positive definite for PSD `K`.
    pub shift: f64,
    /// Relative residual target, `‖K v − λ M v‖ ≤ tol·(1 + λ)`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        Self { shift: 1e-2, tol: 1e-11, max_iter: 400, seed: 7 }
    }
}

pub fn solve_iterative(k: &CMat, m: &CMat, count: usize, opts: &IterativeOptions) -> Result<Spectrum> {
    let d = k.nrows();
    let block = (2 * count).max(count + 8).min(d);
    cholesky(m).ok_or(Error::MassNotSpd)?;
    let shifted = cholesky(&(k + m.scale(opts.shift))).ok_or(Error::NotPositiveDefinite("shifted stiffness"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = CMat::from_fn(d, block, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let knorm = k.iter().map(|z| z.norm()).fold(0.0, f64::max) * d as f64;
    let floor = 10.0 * f64::EPSILON * knorm;
    for _ in 0..opts.max_iter {
        let y = shifted.solve(&(m * &x));
        let q = y.qr().q();
        let a = hermitize(&(q.adjoint() * k * &q));
        let b = hermitize(&(q.adjoint() * m * &q));
        let (theta, z) = generalized_eigen(&a, &b)?;
        x = &q * z;
        let vals = &theta[..count];
        let vecs = x.columns(0, count).into_owned();
        let res = residuals(k, m, vals, &vecs);
        let done = res.iter().zip(vals).all(|(r, l)| *r <= (opts.tol * (1.0 + l.abs())).max(floor));
        if done {
            let mut vecs = vecs;
            canonicalize_phases(&mut vecs);
            let res = residuals(k, m, vals, &vecs);
            return Ok(Spectrum {
                eigenvalues: vals.to_vec(),
                eigenvectors: vecs,
                mass: m.clone(),
                residuals: res,
                s: None,
                band_limit: 0,
                strategy: Strategy::Direct,
            });
        }
    }
    Err(Error::ConvergenceFailure(opts.max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;

    #[test]
    fn matches_dense_on_random_hermitian() {
        let d = 60;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = CMat::from_fn(d, d, |_, _| c(rng.random::<f64>(), rng.random::<f64>()));
        let k = &a * a.adjoint();
        let m = CMat::from_diagonal(&CVec::from_fn(d, |i, _| c(1.0 + i as f64 / d as f64, 0.0)));
        let dense = super::super::solve_dense(&k, &m, 6).unwrap();
        let it = solve_iterative(&k, &m, 6, &IterativeOptions::default()).unwrap();
        for (x, y) in dense.eigenvalues.iter().zip(&it.eigenvalues) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }
}
