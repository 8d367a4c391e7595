//! The flat comparison spectrum `2π²|n|²`, `n ∈ ℤ²`, and certified bounds
//! on its tails.
//!
//! Tail sums over `|n| > R` of a radial decreasing `f(|n|)` are dominated by
//! `∫_{|x| > R − c} f(|x| − c) dx` with `c = √2/2`: each lattice point owns
//! the unit cell around it, every point of that cell is within `c` of it.

const CELL: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Sorted squared radii `|n|²` of `ℤ²` up to an enumeration radius, with
/// an integral bound for everything beyond it.
#[derive(Debug, Clone)]
pub struct FlatLattice {
    norms: Vec<u64>,
    radius: f64,
}

impl FlatLattice {
    /// Enumerates enough points to index `count` eigenvalues with a wide margin.
    pub fn covering(count: usize) -> Self {
        let radius = 2.0 * (count as f64).sqrt() + 24.0;
        let r = radius.floor() as i64;
        let mut norms: Vec<u64> =
            (-r..=r).flat_map(|m| (-r..=r).map(move |n| (m * m + n * n) as u64)).filter(|&q| (q as f64) <= radius * radius).collect();
        norms.sort_unstable();
        Self { norms, radius }
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// `λ_k(1) = 2π²|n_k|²`, zero-based.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI.powi(2) * self.norms[k] as f64
    }

    /// `Σ_{k ≥ from} e^{−a·|n_k|²}` (zero-based `from`), rigorous upper bound.
    pub fn gaussian_tail(&self, from: usize, a: f64) -> f64 {
        let listed: f64 = self.norms.iter().skip(from).map(|&q| (-a * q as f64).exp()).sum();
        let r0 = self.radius - 2.0 * CELL;
        // 2π ∫_{r0}^∞ e^{−aρ²}(ρ + c) dρ with erfc(z) ≤ e^{−z²}/(z√π)
        let beyond = std::f64::consts::PI * (-a * r0 * r0).exp() / a * (1.0 + CELL / r0);
        listed + beyond
    }

    /// `Σ_{k ≥ from} (b·|n_k|²)^{−σ}` for `σ > 1`, skipping `n = 0`.
    pub fn power_tail(&self, from: usize, b: f64, sigma: f64) -> f64 {
        let listed: f64 = self.norms.iter().skip(from).filter(|&&q| q > 0).map(|&q| (b * q as f64).powf(-sigma)).sum();
        let r0 = self.radius - 2.0 * CELL;
        // 2π b^{−σ} ∫_{r0}^∞ ρ^{−2σ}(ρ + c) dρ
        let beyond = 2.0
            * std::f64::consts::PI
            * b.powf(-sigma)
            * (r0.powf(2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0) + CELL * r0.powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0));
        listed + beyond
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicities() {
        let l = FlatLattice::covering(50);
        let counts: Vec<usize> = [0u64, 1, 2, 4, 5].iter().map(|q| l.norms.iter().filter(|&&x| x == *q).count()).collect();
        assert_eq!(counts, vec![1, 4, 4, 4, 8]);
    }

    #[test]
    fn tails_dominate_the_explicit_sum() {
        let small = FlatLattice::covering(10);
        let big = FlatLattice::covering(4000);
        for &a in &[0.05, 0.3, 1.0] {
            let exact: f64 = big.norms.iter().skip(40).map(|&q| (-a * q as f64).exp()).sum();
            let bound = small.gaussian_tail(40, a);
            assert!(bound >= exact && bound <= exact * 1.5 + 1e-300, "{a} {bound} {exact}");
        }
        // Σ'|n|^{−4} ≈ 6.0268
        let s = big.power_tail(0, 1.0, 2.0);
        assert!(s > 6.0268 && s < 6.03);
    }
}
