//! The model manifold: the flat unit torus with complex coordinate
//! `z = x + iy`, the reference metric `g_1 = dx² + dy²`, and the conformal
//! family `g_s = ρ_s (dx² + dy²)` with `ρ_s = (1 − f(s))·ρ_0 + f(s)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Conformal factor of the degenerate end `g_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DegeneracyProfile {
    /// `(sin²(πx) + sin²(πy))^power`, vanishing to order `2·power` at the origin.
    SinSquared { power: u32 },
    /// `ρ_0 ≡ value`, non-degenerate.
    Constant { value: f64 },
}

impl Default for DegeneracyProfile {
    fn default() -> Self {
        DegeneracyProfile::SinSquared { power: 1 }
    }
}

impl DegeneracyProfile {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            DegeneracyProfile::SinSquared { power } => {
                let (sx, sy) = ((std::f64::consts::PI * x).sin(), (std::f64::consts::PI * y).sin());
                (sx * sx + sy * sy).powi(power as i32)
            }
            DegeneracyProfile::Constant { value } => value,
        }
    }

    /// Points where `ρ_0` vanishes.
    pub fn degeneracy_set(&self) -> Vec<(f64, f64)> {
        match self {
            DegeneracyProfile::SinSquared { .. } => vec![(0.0, 0.0)],
            DegeneracyProfile::Constant { .. } => Vec::new(),
        }
    }

    /// Vanishing order of `ρ_0` at the degeneracy point, if any.
    pub fn vanishing_order(&self) -> Option<u32> {
        match *self {
            DegeneracyProfile::SinSquared { power } => Some(2 * power),
            DegeneracyProfile::Constant { .. } => None,
        }
    }

    /// Number of derivative orders of `∂_z̄ w` that must vanish at the
    /// degeneracy point for `|∂_z̄ w|²/ρ_0` to be integrable.
    pub fn constraint_order(&self) -> usize {
        self.vanishing_order().map_or(0, |k| (k / 2) as usize)
    }

    pub fn infimum(&self) -> f64 {
        match *self {
            DegeneracyProfile::SinSquared { .. } => 0.0,
            DegeneracyProfile::Constant { value } => value,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.vanishing_order().is_some()
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DegeneracyProfile::SinSquared { power } if power == 0 || power > 4 => {
                Err(Error::OutOfRange { what: "profile power", value: power as f64 })
            }
            DegeneracyProfile::Constant { value } if !(value > 0.0) => Err(Error::OutOfRange { what: "constant profile value", value }),
            _ => Ok(()),
        }
    }
}

/// Blend function `f` with `f(0) = 0`, `f(1) = 1`, `0 < f ≤ 1` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Blend {
    #[default]
    Identity,
    Square,
    Smoothstep,
}

impl Blend {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Blend::Identity => s,
            Blend::Square => s * s,
            Blend::Smoothstep => s * s * (3.0 - 2.0 * s),
        }
    }
}

/// The pair (profile, blend) defining `ρ_s`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricFamily {
    pub profile: DegeneracyProfile,
    pub blend: Blend,
}

impl MetricFamily {
    pub fn new(profile: DegeneracyProfile, blend: Blend) -> Self {
        Self { profile, blend }
    }

    /// `ρ_s(x, y)`; no range check on `s`.
    pub fn weight(&self, s: f64, x: f64, y: f64) -> f64 {
        let f = self.blend.eval(s);
        (1.0 - f) * self.profile.eval(x, y) + f
    }

    pub fn rho(&self, s: f64, x: f64, y: f64) -> Result<f64> {
        rho(&self.profile, &self.blend, s, x, y)
    }

    /// Infimum of `ρ_s` over the torus.
    pub fn min_weight(&self, s: f64) -> f64 {
        let f = self.blend.eval(s);
        (1.0 - f) * self.profile.infimum() + f
    }
}

pub fn rho(profile: &DegeneracyProfile, blend: &Blend, s: f64, x: f64, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange { what: "s", value: s });
    }
    let f = blend.eval(s);
    Ok((1.0 - f) * profile.eval(x, y) + f)
}

/// Nodes `(i + 1/2)/n`, which never hit the degeneracy point at the origin.
pub fn half_offset_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyBounds {
    /// `g_0 ≤ 𝔟·g_1`.
    pub b: f64,
    /// `𝔞 = 𝔟 + 1`, so that `g_0 ≤ 𝔞·g_s` for every `s`.
    pub a: f64,
    /// `ν = max_s sup |F_s|_{g_1} = max_s sup ρ_s`.
    pub nu: f64,
}

fn grid_sup(profile: &DegeneracyProfile, n: usize) -> f64 {
    let nodes = half_offset_nodes(n);
    let (mut best, mut bx, mut by) = (f64::NEG_INFINITY, 0.0, 0.0);
    for &x in &nodes {
        for &y in &nodes {
            let v = profile.eval(x, y);
            if v > best {
                (best, bx, by) = (v, x, y);
            }
        }
    }
    // zoom on the best node; the grid only brackets the maximizer
    let mut h = 1.0 / n as f64;
    for _ in 0..40 {
        let (cx, cy) = (bx, by);
        for i in -4..=4 {
            for j in -4..=4 {
                let (x, y) = (cx + i as f64 * h / 4.0, cy + j as f64 * h / 4.0);
                let v = profile.eval(x, y);
                if v > best {
                    (best, bx, by) = (v, x, y);
                }
            }
        }
        h /= 4.0;
    }
    best
}

/// Family constants `(𝔟, 𝔞, ν)` from a grid search refined around the maximizer.
pub fn family_constants(family: &MetricFamily, grid_resolution: usize) -> Result<FamilyBounds> {
    if grid_resolution < 64 {
        return Err(Error::OutOfRange { what: "grid resolution", value: grid_resolution as f64 });
    }
    family.profile.validate()?;
    let sup = grid_sup(&family.profile, grid_resolution);
    let b = (sup / 1e-12).ceil() * 1e-12;
    // sup_p ρ_s(p) = (1 − f)·sup ρ_0 + f since ρ_s is increasing in ρ_0
    let nu = (0..=1000)
        .map(|i| {
            let f = family.blend.eval(i as f64 / 1000.0);
            (1.0 - f) * sup + f
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FamilyBounds { b, a: b + 1.0, nu })
}

/// `min (𝔞·ρ_s − ρ_0)` over the half-offset grid and `s_grid`.
pub fn verify_domination(family: &MetricFamily, bounds: &FamilyBounds, grid: usize, s_grid: &[f64]) -> f64 {
    let nodes = half_offset_nodes(grid);
    let mut worst = f64::INFINITY;
    for &s in s_grid {
        for &x in &nodes {
            for &y in &nodes {
                let d = bounds.a * family.weight(s, x, y) - family.profile.eval(x, y);
                worst = worst.min(d);
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULT: MetricFamily = MetricFamily { profile: DegeneracyProfile::SinSquared { power: 1 }, blend: Blend::Identity };

    #[test]
    fn rho_examples() {
        assert_eq!(DEFAULT.rho(1.0, 0.3, 0.8).unwrap(), 1.0);
        assert!((DEFAULT.rho(0.0, 0.5, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!((DEFAULT.rho(0.5, 0.5, 0.5).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(DEFAULT.rho(0.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(matches!(DEFAULT.rho(1.5, 0.0, 0.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn blends_hit_endpoints() {
        for b in [Blend::Identity, Blend::Square, Blend::Smoothstep] {
            assert_eq!(b.eval(0.0), 0.0);
            assert_eq!(b.eval(1.0), 1.0);
            for i in 1..100 {
                let f = b.eval(i as f64 / 100.0);
                assert!(f > 0.0 && f <= 1.0);
            }
        }
    }

    #[test]
    fn constants_for_reference_profiles() {
        let k = family_constants(&DEFAULT, 1024).unwrap();
        assert!((k.b - 2.0).abs() < 1e-9 && (k.a - 3.0).abs() < 1e-9 && (k.nu - 2.0).abs() < 1e-9);
        let flat = MetricFamily::new(DegeneracyProfile::Constant { value: 1.0 }, Blend::Identity);
        let k = family_constants(&flat, 64).unwrap();
        assert!((k.b - 1.0).abs() < 1e-9 && (k.a - 2.0).abs() < 1e-9 && (k.nu - 1.0).abs() < 1e-9);
        let cusp = MetricFamily::new(DegeneracyProfile::SinSquared { power: 2 }, Blend::Smoothstep);
        let k = family_constants(&cusp, 256).unwrap();
        assert!((k.b - 4.0).abs() < 1e-9 && (k.a - 5.0).abs() < 1e-9 && (k.nu - 4.0).abs() < 1e-9);
        assert!(family_constants(&DEFAULT, 32).is_err());
    }

    #[test]
    fn domination_holds() {
        let k = family_constants(&DEFAULT, 256).unwrap();
        let s_grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let d = verify_domination(&DEFAULT, &k, 128, &s_grid);
        assert!(d >= -1e-12);
        // s = 1 slice: 𝔞 − ρ_0 ≥ 1
        assert!(verify_domination(&DEFAULT, &k, 128, &[1.0]) >= 1.0 - 1e-9);
    }

    #[test]
    fn pointwise_monotonicity_in_s() {
        let nodes = half_offset_nodes(16);
        for &x in &nodes {
            for &y in &nodes {
                let r0 = DEFAULT.profile.eval(x, y);
                let vals: Vec<f64> = (0..=10).map(|i| DEFAULT.weight(i as f64 / 10.0, x, y)).collect();
                for w in vals.windows(2) {
                    if r0 <= 1.0 {
                        assert!(w[1] >= w[0] - 1e-15);
                    } else {
                        assert!(w[1] <= w[0] + 1e-15);
                    }
                }
            }
        }
    }
}
