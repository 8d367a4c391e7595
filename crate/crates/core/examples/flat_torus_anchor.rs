//! At `s = 1` the metric is flat and the Galerkin problem is diagonal in the
//! Fourier basis: eigenvalues are `2π²(m² + n²)` with lattice multiplicities.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::spectra::{cluster, default_gap_tol, family_spectrum};

fn main() -> degenerate_spectra::Result<()> {
    let forms = DiscreteForms::new(8, MetricFamily::default());
    let spec = family_spectrum(&forms, 1.0, forms.dim())?;
    let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
    for cl in cluster(&spec, default_gap_tol(&spec))?.iter().take(8) {
        println!("λ = {:>10.4} = 2π²·{:<3} multiplicity {}", cl.representative, (cl.representative / two_pi_sq).round(), cl.multiplicity());
    }
    Ok(())
}
