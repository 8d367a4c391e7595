//! Quadrature for weights that blow up at the origin.
//!
//! The cell `[-½, ½]²` is split into four triangles with apex at the origin
//! and each triangle is mapped from the unit square by a Duffy transform
//! `(u, v) ↦ u·(P + v·(Q − P))`. The Jacobian `u·|det(P, Q − P)|` absorbs one
//! power of `1/r`, and the radial variable is graded geometrically toward
//! `u = 0`.

use rayon::prelude::*;

use super::basis::FourierBasis;
use super::weights::DifferenceCoefficients;
use crate::error::{Error, Result};
use crate::geometry::DegeneracyProfile;
use crate::linalg::{c, gauss_legendre, CMat, C64};

const CORNERS: [(f64, f64); 4] = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)];

/// Tensor rule on the Duffy square, pulled back to `[-½, ½]²`.
#[derive(Debug, Clone)]
pub struct SingularRule {
    points: Vec<(f64, f64)>,
    weights: Vec<f64>,
}

/// Parameters of a [`SingularRule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularRuleSpec {
    /// Gauss points per uniform panel.
    pub gauss_points: usize,
    /// Gauss points per geometrically graded panel.
    pub graded_points: usize,
    /// Uniform panels on `[ratio, 1]` in `u` and on `[0, 1]` in `v`.
    pub panels: usize,
    /// Geometric panels `[ratio^{ℓ+1}, ratio^ℓ]`, `ℓ = 1..levels`, plus `[0, ratio^levels]`.
    pub levels: usize,
    pub ratio: f64,
}

impl SingularRuleSpec {
    /// Default resolution for coefficients up to `|p|, |q| ≤ 2B`.
    pub fn for_band_limit(band_limit: usize) -> Self {
        Self { gauss_points: 16, graded_points: 10, panels: band_limit + 2, levels: 6, ratio: 0.25 }
    }

    /// One step finer in every direction, for self-convergence checks.
    pub fn refined(&self) -> Self {
        Self {
            gauss_points: self.gauss_points + 4,
            graded_points: self.graded_points + 4,
            panels: self.panels + 2,
            levels: self.levels + 3,
            ratio: self.ratio,
        }
    }

    /// Enough grading levels to resolve a feature of width `scale` at the origin.
    pub fn resolving(mut self, scale: f64) -> Self {
        let need = ((0.01 * scale).ln() / self.ratio.ln()).ceil().max(1.0) as usize;
        self.levels = self.levels.max(need);
        self
    }
}

fn panel_rule(edges: &[f64], points: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::new();
    let mut w = Vec::new();
    for (e, &n) in edges.windows(2).zip(points) {
        let (gx, gw) = gauss_legendre(n);
        let (a, b) = (e[0], e[1]);
        let h = 0.5 * (b - a);
        for (t, wt) in gx.iter().zip(&gw) {
            x.push(a + h * (t + 1.0));
            w.push(h * wt);
        }
    }
    (x, w)
}

impl SingularRule {
    pub fn new(spec: SingularRuleSpec) -> Self {
        let mut u_edges = vec![0.0];
        let mut u_points = Vec::new();
        for l in (1..=spec.levels).rev() {
            u_edges.push(spec.ratio.powi(l as i32));
            u_points.push(spec.graded_points);
        }
        for i in 1..=spec.panels {
            u_edges.push(spec.ratio + (1.0 - spec.ratio) * i as f64 / spec.panels as f64);
            u_points.push(spec.gauss_points);
        }
        let v_edges: Vec<f64> = (0..=spec.panels).map(|i| i as f64 / spec.panels as f64).collect();
        let (us, uw) = panel_rule(&u_edges, &u_points);
        let (vs, vw) = panel_rule(&v_edges, &vec![spec.gauss_points; spec.panels]);
        let mut points = Vec::with_capacity(4 * us.len() * vs.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for t in 0..4 {
            let p = CORNERS[t];
            let q = CORNERS[(t + 1) % 4];
            let e = (q.0 - p.0, q.1 - p.1);
            let jac = (p.0 * e.1 - p.1 * e.0).abs();
            for (&u, &wu) in us.iter().zip(&uw) {
                for (&v, &wv) in vs.iter().zip(&vw) {
                    points.push((u * (p.0 + v * e.0), u * (p.1 + v * e.1)));
                    weights.push(wu * wv * u * jac);
                }
            }
        }
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64 + Sync) -> f64 {
        let terms: Vec<f64> = self.points.par_iter().zip(&self.weights).map(|(&(x, y), w)| w * f(x, y)).collect();
        terms.iter().sum()
    }

    /// `ĉ_{(p,q)} = ∫ weight·(e^{iθ} − T_order(iθ))`, `θ = −2π(px + qy)`,
    /// where `T_order` is the Taylor polynomial of `exp` with `order` terms.
    /// With `order = 0` these are plain Fourier coefficients.
    ///
    /// Points close to the origin are summed pair by pair with a series for
    /// the remainder. Elsewhere the exponential part is a matrix product and
    /// the polynomial part comes from moments of the weight.
    pub fn coefficients(&self, weight: impl Fn(f64, f64) -> f64 + Sync, order: usize, reach: usize) -> DifferenceCoefficients {
        let r = reach as i32;
        let width = 2 * reach + 1;
        let near_radius = 1.0 / (2.0 * std::f64::consts::PI * reach.max(1) as f64);
        let weighted: Vec<(f64, f64, f64)> =
            self.points.par_iter().zip(&self.weights).map(|(&(x, y), &w)| (x, y, w * weight(x, y))).filter(|t| t.2 != 0.0).collect();
        let (near, far): (Vec<_>, Vec<_>) = weighted.into_iter().partition(|&(x, y, _)| order > 0 && x.abs() + y.abs() <= near_radius);

        let chunk = 4096;
        let exp_part = far
            .par_chunks(chunk)
            .map(|pts| {
                let mut ex = CMat::zeros(width, pts.len());
                let mut ey = CMat::zeros(pts.len(), width);
                let mut buf = vec![c(0.0, 0.0); width];
                for (i, &(x, y, w)) in pts.iter().enumerate() {
                    fill_powers(&mut buf, x, r);
                    ex.column_mut(i).copy_from_slice(&buf);
                    fill_powers(&mut buf, y, r);
                    for (j, b) in buf.iter().enumerate() {
                        ey[(i, j)] = b * w;
                    }
                }
                ex * ey
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(CMat::zeros(width, width), |a, b| a + b);

        let moments = weighted_moments(&far, order);
        let near_moments = weighted_moments(&near, order + NEAR_TERMS);

        let mut out = DifferenceCoefficients::zeros(reach);
        for p in -r..=r {
            for q in -r..=r {
                let (pf, qf) = (p as f64, q as f64);
                let v = exp_part[((p + r) as usize, (q + r) as usize)] - taylor_moments(&moments, pf, qf, 0, order)
                    + taylor_moments(&near_moments, pf, qf, order, order + NEAR_TERMS);
                out.set(p, q, v);
            }
        }
        out
    }
}

/// Series terms kept for points with `|θ| ≤ 1`; the next term is below `1/22!`.
const NEAR_TERMS: usize = 22;

/// `μ[a][b] = Σ w·x^a·y^b` for `a + b < order`.
fn weighted_moments(points: &[(f64, f64, f64)], order: usize) -> Vec<Vec<f64>> {
    let mut moments = vec![vec![0.0; order]; order];
    for &(x, y, w) in points {
        let mut xa = w;
        for (a, row) in moments.iter_mut().enumerate() {
            let mut term = xa;
            for m in row.iter_mut().take(order - a) {
                *m += term;
                term *= y;
            }
            xa *= x;
        }
    }
    moments
}

/// `Σ_{from ≤ j < to} (−2πi)^j/j! Σ_{a+b=j} binom(j, a)·p^a·q^b·μ_{ab}`.
fn taylor_moments(moments: &[Vec<f64>], p: f64, q: f64, from: usize, to: usize) -> C64 {
    let mut total = c(0.0, 0.0);
    let mut coef = c(1.0, 0.0);
    for j in 0..to {
        if j >= from {
            let mut s = 0.0;
            let mut binom = 1.0;
            for a in 0..=j {
                s += binom * p.powi(a as i32) * q.powi((j - a) as i32) * moments[a][j - a];
                binom = binom * (j - a) as f64 / (a + 1) as f64;
            }
            total += coef * s;
        }
        coef *= c(0.0, -2.0 * std::f64::consts::PI) / (j + 1) as f64;
    }
    total
}

/// `e[p + r] = e^{−2πi p x}` for `|p| ≤ r`.
fn fill_powers(e: &mut [C64], x: f64, r: i32) {
    let base = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * x);
    let r = r as usize;
    e[r] = c(1.0, 0.0);
    for k in 1..=r {
        e[r + k] = e[r + k - 1] * base;
        e[r - k] = e[r + 1 - k] * base.conj();
    }
}

/// Midpoint rule on half-offset cells, with each cell within `ring` cells
/// of the degeneracy point split into `4 × 4` sub-cells.
pub fn refined_midpoint(n: usize, ring: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let h = 1.0 / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            // centers in [-½, ½)
            let (cx, cy) = ((i as f64 + 0.5) * h - 0.5, (j as f64 + 0.5) * h - 0.5);
            let near = cx.abs() < ring as f64 * h && cy.abs() < ring as f64 * h;
            if near {
                let sub = h / 4.0;
                for a in 0..4 {
                    for b in 0..4 {
                        let x = cx - 0.5 * h + (a as f64 + 0.5) * sub;
                        let y = cy - 0.5 * h + (b as f64 + 0.5) * sub;
                        sum += f(x, y) * sub * sub;
                    }
                }
            } else {
                sum += f(cx, cy) * h * h;
            }
        }
    }
    sum
}

/// `4∫|∂_z̄ w|²/ρ_0` by the refined midpoint rule at grids `n, 2n, 4n`;
/// fails with `QuadratureDivergence` when the last two values differ by more
/// than a factor `1.05`, i.e. when `w` is outside the limit form domain.
pub fn limit_form_by_refinement(basis: &FourierBasis, profile: &DegeneracyProfile, coeffs: &[C64], n: usize) -> Result<f64> {
    let eval = |m: usize| {
        refined_midpoint(m, 2, |x, y| {
            let d = basis.evaluate_dbar(coeffs, x, y).norm_sqr();
            4.0 * d / profile.eval(x, y)
        })
    };
    let q2 = eval(2 * n);
    let q4 = eval(4 * n);
    let ratio = if q2 > 0.0 {
        q4 / q2
    } else if q4 > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    if !(ratio <= 1.05) {
        return Err(Error::QuadratureDivergence { ratio });
    }
    Ok(q4)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Σ_{j ≥ order} (iθ)^j / j!` for `|θ| ≤ 1`.
    fn exp_remainder_series(theta: f64, order: usize) -> C64 {
        let mut term = c(1.0, 0.0);
        for j in 0..order {
            term *= c(0.0, theta) / (j + 1) as f64;
        }
        let mut sum = c(0.0, 0.0);
        let mut j = order;
        while term.norm() > 1e-18 * sum.norm().max(1e-300) || j == order {
            sum += term;
            j += 1;
            term *= c(0.0, theta) / j as f64;
            if term.norm() == 0.0 {
                break;
            }
        }
        sum
    }

    fn taylor(theta: f64, order: usize) -> C64 {
        let mut term = c(1.0, 0.0);
        let mut sum = c(0.0, 0.0);
        for j in 0..order {
            sum += term;
            term *= c(0.0, theta) / (j + 1) as f64;
        }
        sum
    }

    #[test]
    fn moment_path_matches_pairwise_remainders() {
        let rule = SingularRule::new(SingularRuleSpec::for_band_limit(2));
        let p0 = DegeneracyProfile::SinSquared { power: 1 };
        let weight = |x: f64, y: f64| 1.0 / p0.eval(x, y);
        let fast = rule.coefficients(weight, 2, 4);
        for p in -4..=4 {
            for q in -4..=4 {
                let mut slow = c(0.0, 0.0);
                for (&(x, y), &w) in rule.points.iter().zip(&rule.weights) {
                    let theta = -2.0 * std::f64::consts::PI * (p as f64 * x + q as f64 * y);
                    let rem =
                        if theta.abs() <= 1.0 { exp_remainder_series(theta, 2) } else { C64::from_polar(1.0, theta) - taylor(theta, 2) };
                    slow += rem * w * weight(x, y);
                }
                assert!((fast.get(p, q) - slow).norm() < 1e-11, "{p} {q}");
            }
        }
    }

    #[test]
    fn rule_integrates_smooth_and_singular_functions() {
        let rule = SingularRule::new(SingularRuleSpec::for_band_limit(4));
        assert!((rule.integrate(|_, _| 1.0) - 1.0).abs() < 1e-13);
        assert!((rule.integrate(|x, y| x * x + y * y) - 1.0 / 6.0).abs() < 1e-13);
        // ∫_{[-½,½]²} 1/r = 4·ln(1 + √2)
        let exact = 4.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((rule.integrate(|x, y| 1.0 / (x * x + y * y).sqrt()) - exact).abs() < 1e-12);
    }

    #[test]
    fn plain_coefficients_match_closed_form() {
        let rule = SingularRule::new(SingularRuleSpec::for_band_limit(4));
        let w = |x: f64, _y: f64| 2.0 + (2.0 * std::f64::consts::PI * x).cos();
        let co = rule.coefficients(w, 0, 3);
        assert!((co.get(0, 0) - c(2.0, 0.0)).norm() < 1e-12);
        assert!((co.get(1, 0) - c(0.5, 0.0)).norm() < 1e-12);
        assert!(co.get(2, 1).norm() < 1e-12);
    }

    #[test]
    fn remainder_series_matches_direct_formula() {
        for &t in &[0.9, -0.7, 0.3, 1e-3] {
            for order in 0..5 {
                let direct = C64::from_polar(1.0, t) - taylor(t, order);
                let series = exp_remainder_series(t, order);
                assert!((direct - series).norm() < 1e-15 * (1.0 + direct.norm()).max(1.0), "{t} {order}");
            }
        }
    }
}
