//! The sweep configuration, read from TOML.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::MetricFamily;
use crate::spectra::limit::DEFAULT_EPS;

/// Which `s = 0` strategies a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StrategySelection {
    Constrained,
    Regularized,
    #[default]
    Both,
}

impl StrategySelection {
    pub fn constrained(&self) -> bool {
        matches!(self, Self::Constrained | Self::Both)
    }

    pub fn regularized(&self) -> bool {
        matches!(self, Self::Regularized | Self::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatGrid {
    /// Left end of the time window `[t0, ∞)`.
    pub t0: f64,
    /// Log-spaced points between `t0` and the certified horizon.
    pub points: usize,
    /// Accuracy of truncated heat traces and of the horizon certificate.
    pub eps: f64,
}

impl Default for HeatGrid {
    fn default() -> Self {
        Self { t0: 0.05, points: 40, eps: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZetaGrid {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub re_points: usize,
    pub im_points: usize,
    /// Accuracy requested from the Mellin path.
    pub eps: f64,
}

impl Default for ZetaGrid {
    fn default() -> Self {
        Self { re: [1.5, 3.0], im: [-2.0, 2.0], re_points: 5, im_points: 5, eps: 1e-9 }
    }
}

impl ZetaGrid {
    fn axis(range: [f64; 2], n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![range[0]];
        }
        (0..n).map(|i| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64).collect()
    }

    /// Grid points, real part outermost.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let im = Self::axis(self.im, self.im_points);
        Self::axis(self.re, self.re_points).into_iter().flat_map(|r| im.iter().map(move |&i| (r, i))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Final relative eigenvalue delta.
    pub eigen: f64,
    /// Relative disagreement allowed between the two limit strategies.
    pub agreement: f64,
    /// Final projection gap.
    pub projection: f64,
    /// Final trace-norm sup.
    pub tracenorm: f64,
    /// Final zeta defect.
    pub zeta: f64,
    /// Sum versus Mellin evaluation of the same zeta value.
    pub mellin: f64,
    /// Threshold below which an eigenvalue counts as kernel.
    pub kernel: f64,
    /// Parseval versus quadrature kernel distance.
    pub parseval: f64,
    /// Values below these floors count as converged in monotonicity checks.
    pub eigen_floor: f64,
    pub projection_floor: f64,
    pub heat_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eigen: 0.02,
            agreement: 0.01,
            projection: 0.1,
            tracenorm: 5e-2,
            zeta: 1e-3,
            mellin: 1e-6,
            kernel: 1e-8,
            parseval: 1e-6,
            eigen_floor: 1e-8,
            projection_floor: 1e-6,
            heat_floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub family: MetricFamily,
    pub band_limit: usize,
    /// Values of `s` in `(0, 1]`; the limit `s = 0` is always added.
    pub s_grid: Vec<f64>,
    /// Eigenvalues tracked in the tables.
    pub depth: usize,
    /// Eigenvalue clusters whose projections are compared.
    pub clusters: usize,
    /// Indices `k ≤ minmax_depth` enter the comparison with the flat spectrum.
    pub minmax_depth: usize,
    pub strategy: StrategySelection,
    /// Regularization parameters of the regularized strategy.
    pub regularization: Vec<f64>,
    pub heat: HeatGrid,
    pub zeta: ZetaGrid,
    /// Band limit of the Parseval-versus-quadrature kernel comparison.
    pub kernel_band_limit: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            family: MetricFamily::default(),
            band_limit: 8,
            s_grid: vec![1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01],
            depth: 12,
            clusters: 4,
            minmax_depth: 50,
            strategy: StrategySelection::Both,
            regularization: DEFAULT_EPS.to_vec(),
            heat: HeatGrid::default(),
            zeta: ZetaGrid::default(),
            kernel_band_limit: 4,
            tolerances: Tolerances::default(),
            seed: 20_240_611,
        }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.family.profile.validate()?;
        if self.band_limit == 0 || self.kernel_band_limit == 0 {
            return bad("band limits must be positive".into());
        }
        if self.s_grid.is_empty() {
            return bad("s_grid is empty".into());
        }
        if let Some(s) = self.s_grid.iter().find(|s| !(**s > 0.0 && **s <= 1.0)) {
            return bad(format!("s = {s} lies outside (0, 1]"));
        }
        if self.s_grid.windows(2).any(|w| w[1] >= w[0]) {
            return bad("s_grid must be strictly decreasing".into());
        }
        if self.depth < 2 || self.clusters == 0 || self.minmax_depth == 0 {
            return bad("depth must be at least 2, clusters and minmax_depth positive".into());
        }
        if !(self.heat.t0 > 0.0) || self.heat.points < 2 || !(self.heat.eps > 0.0) {
            return bad("heat grid needs t0 > 0, at least 2 points and eps > 0".into());
        }
        if !(self.zeta.re[0].min(self.zeta.re[1]) > 1.0) {
            return bad("zeta grid must satisfy Re x > 1".into());
        }
        if self.zeta.re_points == 0 || self.zeta.im_points == 0 || !(self.zeta.eps > 0.0) {
            return bad("zeta grid needs points and eps > 0".into());
        }
        if self.regularization.len() < 4 {
            return bad("the regularized strategy needs at least 4 parameters".into());
        }
        Ok(())
    }

    /// The grid values strictly inside `(0, 1)`, over which convergence is judged.
    pub fn trend_grid(&self) -> Vec<f64> {
        self.s_grid.iter().copied().filter(|&s| s < 1.0).collect()
    }

    /// Hex SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }
}
