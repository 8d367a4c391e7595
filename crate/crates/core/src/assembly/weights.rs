//! Fourier coefficients of scalar weights over the difference set
//! `[-2B, 2B]²`, and the Toeplitz-structured stiffness built from them.

use rayon::prelude::*;
use rustfft::FftPlanner;

use super::basis::FourierBasis;
use crate::geometry::half_offset_nodes;
use crate::linalg::{c, CMat, C64};

/// `ĉ_{(p,q)} = ∫ weight(x, y)·e^{-2πi(px + qy)}` for `|p|, |q| ≤ reach`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceCoefficients {
    reach: i32,
    values: Vec<C64>,
}

impl DifferenceCoefficients {
    pub fn zeros(reach: usize) -> Self {
        let w = 2 * reach + 1;
        Self { reach: reach as i32, values: vec![c(0.0, 0.0); w * w] }
    }

    pub fn reach(&self) -> usize {
        self.reach as usize
    }

    fn offset(&self, p: i32, q: i32) -> usize {
        let w = 2 * self.reach + 1;
        ((p + self.reach) * w + (q + self.reach)) as usize
    }

    pub fn get(&self, p: i32, q: i32) -> C64 {
        self.values[self.offset(p, q)]
    }

    pub fn set(&mut self, p: i32, q: i32, value: C64) {
        let o = self.offset(p, q);
        self.values[o] = value;
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Fourier coefficients of `weight` by a 2-D FFT on the half-offset grid
/// `((i + ½)/n, (j + ½)/n)`.
pub fn fft_coefficients(weight: impl Fn(f64, f64) -> f64 + Sync, n: usize, reach: usize) -> DifferenceCoefficients {
    let nodes = half_offset_nodes(n);
    let mut grid: Vec<C64> = nodes
        .par_iter()
        .flat_map_iter(|&x| nodes.iter().map(move |&y| (x, y)).collect::<Vec<_>>())
        .map(|(x, y)| c(weight(x, y), 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    // rows (y direction)
    grid.par_chunks_mut(n).for_each(|row| fft.process(row));
    // columns (x direction)
    let mut t = vec![c(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = grid[i * n + j];
        }
    }
    t.par_chunks_mut(n).for_each(|col| fft.process(col));
    // t[q * n + p] = Σ_{i,j} W(x_i, y_j) e^{-2πi(p i + q j)/n}
    let mut out = DifferenceCoefficients::zeros(reach);
    let r = reach as i32;
    let scale = 1.0 / (n * n) as f64;
    for p in -r..=r {
        for q in -r..=r {
            let pi = p.rem_euclid(n as i32) as usize;
            let qi = q.rem_euclid(n as i32) as usize;
            // half-offset shift: x_i = (i + ½)/n
            let shift = C64::from_polar(1.0, -std::f64::consts::PI * (p + q) as f64 / n as f64);
            let o = out.offset(p, q);
            out.values[o] = t[qi * n + pi] * shift * scale;
        }
    }
    out
}

/// `K[j, k] = 4π²·conj(a_j)·a_k·ĉ_{j−k}` with `a = m + in`.
pub fn stiffness_from_coefficients(basis: &FourierBasis, coeffs: &DifferenceCoefficients) -> CMat {
    let d = basis.dim();
    let idx = basis.indices();
    let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut k = CMat::zeros(d, d);
    for j in 0..d {
        let aj = basis.symbol(j).conj();
        for l in 0..d {
            let (p, q) = (idx[j].0 - idx[l].0, idx[j].1 - idx[l].1);
            k[(j, l)] = aj * basis.symbol(l) * coeffs.get(p, q) * four_pi2;
        }
    }
    crate::linalg::hermitize(&k)
}

/// Toeplitz Gram `G[j, k] = scale·ĉ_{j−k}` over the basis index set.
pub fn toeplitz_from_coefficients(basis: &FourierBasis, coeffs: &DifferenceCoefficients, scale: f64) -> CMat {
    let d = basis.dim();
    let idx = basis.indices();
    let g = CMat::from_fn(d, d, |j, l| coeffs.get(idx[j].0 - idx[l].0, idx[j].1 - idx[l].1) * scale);
    crate::linalg::hermitize(&g)
}
