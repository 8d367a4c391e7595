//! The `s = 0` problem two ways: restricting to the finite-energy subspace
//! with a finite-part quadrature, and regularizing the weight by `ε` then
//! extrapolating `ε → 0`.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::spectra::limit::DEFAULT_EPS;
use degenerate_spectra::spectra::{constrained_spectrum, regularized_spectrum};

fn main() -> degenerate_spectra::Result<()> {
    let forms = DiscreteForms::new(6, MetricFamily::default());
    let depth = 10;
    let constrained = constrained_spectrum(&forms, depth)?;
    let regularized = regularized_spectrum(&forms, &DEFAULT_EPS, depth, depth)?;
    println!("fit condition number {:.2e}", regularized.extrapolation.condition);
    println!("{:>3} {:>14} {:>14} {:>10}", "k", "constrained", "regularized", "rel diff");
    for k in 0..depth {
        let (a, b) = (constrained.eigenvalues[k], regularized.spectrum.eigenvalues[k]);
        let rel = if a.abs() > 1e-8 { (a - b).abs() / a } else { (a - b).abs() };
        println!("{:>3} {a:>14.6} {b:>14.6} {rel:>10.2e}", k + 1);
    }
    Ok(())
}
