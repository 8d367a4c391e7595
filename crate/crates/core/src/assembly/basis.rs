use crate::linalg::{c, C64};

/// Truncated exponential basis `e_{mn}(x, y) = e^{2πi(mx + ny)}`, `|m|, |n| ≤ B`.
/// A `(1,0)`-form is `ω = w dz` with `w = Σ ŵ_{mn} e_{mn}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBasis {
    band_limit: usize,
    indices: Vec<(i32, i32)>,
}

impl FourierBasis {
    pub fn new(band_limit: usize) -> Self {
        let b = band_limit as i32;
        let indices = (-b..=b).flat_map(|m| (-b..=b).map(move |n| (m, n))).collect();
        Self { band_limit, indices }
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[(i32, i32)] {
        &self.indices
    }

    pub fn position(&self, m: i32, n: i32) -> Option<usize> {
        let b = self.band_limit as i32;
        if m.abs() > b || n.abs() > b {
            return None;
        }
        Some(((m + b) * (2 * b + 1) + (n + b)) as usize)
    }

    /// `∂_z̄ e_{mn} = πi(m + in)·e_{mn}`; returns the factor `m + in`.
    pub fn symbol(&self, k: usize) -> C64 {
        let (m, n) = self.indices[k];
        c(m as f64, n as f64)
    }

    /// Evaluates `w(x, y)` from coefficients.
    pub fn evaluate(&self, coeffs: &[C64], x: f64, y: f64) -> C64 {
        self.indices
            .iter()
            .zip(coeffs)
            .map(|(&(m, n), &w)| w * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (m as f64 * x + n as f64 * y)))
            .sum()
    }

    /// Evaluates `∂_z̄ w(x, y)`.
    pub fn evaluate_dbar(&self, coeffs: &[C64], x: f64, y: f64) -> C64 {
        let pi_i = c(0.0, std::f64::consts::PI);
        self.indices
            .iter()
            .enumerate()
            .zip(coeffs)
            .map(|((k, &(m, n)), &w)| {
                w * pi_i * self.symbol(k) * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (m as f64 * x + n as f64 * y))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_are_unique_and_positioned() {
        let b = FourierBasis::new(3);
        assert_eq!(b.dim(), 49);
        for (k, &(m, n)) in b.indices().iter().enumerate() {
            assert_eq!(b.position(m, n), Some(k));
        }
        let mut sorted = b.indices().to_vec();
        sorted.dedup();
        assert_eq!(sorted.len(), 49);
        assert_eq!(b.position(4, 0), None);
    }
}
