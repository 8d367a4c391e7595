//! The property suites on a small sweep, and the same suites with the
//! domination constant deliberately understated.

use degenerate_spectra::harness::{validate, Injection, Study, SweepConfig};

fn main() -> degenerate_spectra::Result<()> {
    let cfg = SweepConfig { band_limit: 4, kernel_band_limit: 4, s_grid: vec![1.0, 0.5, 0.2, 0.1, 0.05], ..SweepConfig::default() };
    let study = Study::run(&cfg)?;
    let honest = validate(&study, Injection::None)?;
    println!("{} checks, failures: {:?}", honest.checks.len(), honest.failures().iter().map(|c| &c.name).collect::<Vec<_>>());
    let injected = validate(&study, Injection::UnderstateNuInMinmax)?;
    for c in injected.failures() {
        println!("injected violation caught: {} value {:.3e}", c.name, c.value);
    }
    Ok(())
}
