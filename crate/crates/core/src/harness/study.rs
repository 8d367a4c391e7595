use std::time::Instant;

use rayon::prelude::*;

use super::config::SweepConfig;
use super::report::Timings;
use crate::assembly::{ConstrainedLimit, DiscreteForms};
use crate::error::Result;
use crate::geometry::{family_constants, FamilyBounds};
use crate::spectra::{constrained_spectrum_from, family_spectrum, regularized_spectrum, RegularizedLimit, Spectrum, Strategy};

/// Resolution of the grid search behind the family constants.
const CONSTANTS_GRID: usize = 256;

/// Every spectrum a sweep needs, computed once.
#[derive(Debug, Clone)]
pub struct Study {
    pub config: SweepConfig,
    pub forms: DiscreteForms,
    pub bounds: FamilyBounds,
    /// Full spectra along `config.s_grid`, in grid order.
    pub family: Vec<Spectrum>,
    pub constrained: Option<(ConstrainedLimit, Spectrum)>,
    pub regularized: Option<RegularizedLimit>,
    pub timings: Timings,
}

impl Study {
    pub fn run(config: &SweepConfig) -> Result<Self> {
        config.validate()?;
        let mut timings = Timings::default();
        let forms = DiscreteForms::new(config.band_limit, config.family);
        let bounds = family_constants(&config.family, CONSTANTS_GRID)?;
        let dim = forms.dim();

        let clock = Instant::now();
        let family = config.s_grid.par_iter().map(|&s| family_spectrum(&forms, s, dim)).collect::<Result<Vec<_>>>()?;
        timings.record("family spectra", clock);

        let constrained = if config.strategy.constrained() {
            let clock = Instant::now();
            let limit = forms.constrained_limit()?;
            let spec = constrained_spectrum_from(&forms, &limit, dim)?;
            timings.record("constrained limit", clock);
            Some((limit, spec))
        } else {
            None
        };
        let regularized = if config.strategy.regularized() {
            let clock = Instant::now();
            let reg = regularized_spectrum(&forms, &config.regularization, dim, config.depth)?;
            timings.record("regularized limit", clock);
            Some(reg)
        } else {
            None
        };
        Ok(Self { config: config.clone(), forms, bounds, family, constrained, regularized, timings })
    }

    /// The `s = 0` spectra, constrained first.
    pub fn limits(&self) -> Vec<&Spectrum> {
        self.constrained.iter().map(|c| &c.1).chain(self.regularized.iter().map(|r| &r.spectrum)).collect()
    }

    /// The limit the deltas are measured against: constrained when available.
    pub fn reference(&self) -> &Spectrum {
        self.limits()[0]
    }

    pub fn family_at(&self, s: f64) -> Option<&Spectrum> {
        self.family.iter().find(|sp| sp.s == Some(s))
    }

    /// Family spectra inside `(0, 1)`, over which convergence is judged.
    pub fn trend(&self) -> Vec<&Spectrum> {
        self.family.iter().filter(|sp| sp.s.is_some_and(|s| s < 1.0)).collect()
    }

    /// All spectra: the family in grid order, then the limits.
    pub fn all(&self) -> Vec<&Spectrum> {
        self.family.iter().chain(self.limits()).collect()
    }
}

/// File-name label: `s0.5`, `constrained`, `regularized`.
pub fn label(spec: &Spectrum) -> String {
    match spec.strategy {
        Strategy::Direct => format!("s{}", spec.s.unwrap_or(f64::NAN)),
        other => other.tag().to_string(),
    }
}
