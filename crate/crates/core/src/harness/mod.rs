//! Experiment orchestration: a [`Study`] computes every spectrum of a sweep
//! once, the section functions turn it into tables and pass/fail checks,
//! and a [`Report`] writes them to disk.

pub mod config;
mod report;
mod sections;
mod study;
pub mod validate;

pub use config::{HeatGrid, StrategySelection, SweepConfig, Tolerances, ZetaGrid};
pub use report::{Report, Timings};
pub use sections::{sweep_kernel, sweep_projections, sweep_spectrum, sweep_tracenorm, sweep_zeta};
pub use study::{label, Study};
pub use validate::{validate, Injection};

use serde::Serialize;

use crate::io::Table;

/// One pass/fail entry; `value` is compared with `tolerance` as `relation` says.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Equal,
    /// `value` is the largest ratio of consecutive values above the floor
    /// in `tolerance`; it passes when every such ratio is below 1.
    DecreasingAboveFloor,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), pass: value <= tolerance, value, relation: Relation::AtMost, tolerance }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), pass: value >= tolerance, value, relation: Relation::AtLeast, tolerance }
    }

    pub fn equal(name: impl Into<String>, value: f64, target: f64) -> Self {
        Self { name: name.into(), pass: value == target, value, relation: Relation::Equal, tolerance: target }
    }

    /// Each value is strictly below its predecessor unless it is already at
    /// most `floor`.
    pub fn decreasing(name: impl Into<String>, values: &[f64], floor: f64) -> Self {
        let worst =
            values.windows(2).filter(|w| w[1] > floor).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY }).fold(0.0, f64::max);
        let pass = values.iter().all(|v| v.is_finite()) && worst < 1.0;
        Self { name: name.into(), pass, value: worst, relation: Relation::DecreasingAboveFloor, tolerance: floor }
    }

    /// A failed computation, recorded instead of aborting the section.
    pub fn failed(name: impl Into<String>) -> Self {
        Self { name: name.into(), pass: false, value: f64::NAN, relation: Relation::Equal, tolerance: 0.0 }
    }
}

/// A CSV table and the file name it is written to.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTable {
    pub file: String,
    pub table: Table,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub checks: Vec<Check>,
    pub tables: Vec<NamedTable>,
    /// Observations that do not gate the section, e.g. strategy disagreements.
    pub flags: Vec<String>,
}

impl Section {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), checks: Vec::new(), tables: Vec::new(), flags: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    fn table(&mut self, file: impl Into<String>, table: Table) {
        self.tables.push(NamedTable { file: file.into(), table });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_with_floor() {
        assert!(Check::decreasing("a", &[3.0, 2.0, 1.0], 0.0).pass);
        assert!(!Check::decreasing("a", &[3.0, 3.0, 1.0], 0.0).pass);
        // noise below the floor does not count
        assert!(Check::decreasing("a", &[1e-13, 3e-13, 2e-14], 1e-8).pass);
        assert!(!Check::decreasing("a", &[1.0, 0.5, 0.7], 1e-8).pass);
        let c = Check::decreasing("a", &[4.0, 2.0, 1.5], 0.0);
        assert_eq!(c.value, 0.75);
        assert!(!Check::decreasing("a", &[1.0, f64::NAN], 0.0).pass);
    }
}
