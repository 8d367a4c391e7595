//! Spectral zeta function by direct summation and by the Mellin transform of
//! the heat trace.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::heatzeta::{log_grid, zeta_mellin, zeta_sum, HeatProfile};
use degenerate_spectra::linalg::c;
use degenerate_spectra::spectra::{family_spectrum, kernel_dim};

fn main() -> degenerate_spectra::Result<()> {
    let forms = DiscreteForms::new(8, MetricFamily::default());
    let spec = family_spectrum(&forms, 0.1, forms.dim())?;
    let ell = kernel_dim(&spec, 1e-8)?;
    let heat = HeatProfile::new(&spec, &log_grid(0.05, 4.0, 8), 2.0, 1e-10)?;
    for x in [c(1.5, 0.0), c(2.0, 0.0), c(2.0, 1.0), c(3.0, -2.0)] {
        let sum = zeta_sum(&spec, x, ell, 2.0)?;
        let mellin = zeta_mellin(&heat, x, ell, 1e-9)?;
        println!(
            "x = {x}: sum {:.10} (tail ≤ {:.1e}), Mellin {:.10}, |difference| {:.1e}",
            sum.value(),
            sum.error,
            mellin.value(),
            (sum.value() - mellin.value()).norm()
        );
    }
    Ok(())
}
