use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::config::SweepConfig;
use super::{Check, Section};
use crate::error::Result;

/// Wall-clock durations, kept apart from the reproducible outputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub entries: Vec<(String, f64)>,
}

impl Timings {
    pub fn record(&mut self, what: &str, since: Instant) {
        self.entries.push((what.to_string(), since.elapsed().as_secs_f64()));
    }

    pub fn extend(&mut self, other: &Timings) {
        self.entries.extend(other.entries.iter().cloned());
    }
}

/// Sections of one run with the configuration that produced them.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: SweepConfig,
    pub sections: Vec<Section>,
    pub timings: Timings,
}

#[derive(Serialize)]
struct SectionEntry<'a> {
    name: &'a str,
    pass: bool,
    checks: &'a [Check],
    flags: &'a [String],
    files: Vec<&'a str>,
}

impl Report {
    pub fn new(config: &SweepConfig) -> Self {
        Self { config: config.clone(), sections: Vec::new(), timings: Timings::default() }
    }

    pub fn pass(&self) -> bool {
        self.sections.iter().all(Section::pass)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// The manifest: config and its hash, tolerances, and every check.
    pub fn manifest(&self) -> serde_json::Value {
        let sections: Vec<SectionEntry> = self
            .sections
            .iter()
            .map(|s| SectionEntry {
                name: &s.name,
                pass: s.pass(),
                checks: &s.checks,
                flags: &s.flags,
                files: s.tables.iter().map(|t| t.file.as_str()).collect(),
            })
            .collect();
        json!({
            "package": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": self.config.hash(),
            "config": self.config,
            "tolerances": self.config.tolerances,
            "pass": self.pass(),
            "sections": sections,
        })
    }

    /// Writes every table, `manifest.json`, and `timings.json`. Everything
    /// except the timings is a function of the configuration alone.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for section in &self.sections {
            for t in &section.tables {
                t.table.write_csv(std::fs::File::create(dir.join(&t.file))?)?;
            }
        }
        let mut manifest = serde_json::to_string_pretty(&self.manifest())?;
        manifest.push('\n');
        std::fs::write(dir.join("manifest.json"), manifest)?;
        let mut timings = serde_json::to_string_pretty(&self.timings)?;
        timings.push('\n');
        std::fs::write(dir.join("timings.json"), timings)?;
        Ok(())
    }

    /// One line per check: `PASS|FAIL section/name value relation tolerance`.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            for c in &s.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                out.push_str(&format!("{verdict} {}/{} value={:e} {:?} {:e}\n", s.name, c.name, c.value, c.relation, c.tolerance));
            }
            for f in &s.flags {
                out.push_str(&format!("FLAG {}: {f}\n", s.name));
            }
        }
        out
    }
}
