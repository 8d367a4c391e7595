//! Pointwise heat-kernel values and the `L²` distance between kernels,
//! by Parseval and by direct quadrature.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::heatzeta::{heat_kernel_eval, kernel_l2_distance, kernel_l2_distance_quadrature};
use degenerate_spectra::spectra::{constrained_spectrum, family_spectrum};

fn main() -> degenerate_spectra::Result<()> {
    let forms = DiscreteForms::new(4, MetricFamily::default());
    let dim = forms.dim();
    let flat = family_spectrum(&forms, 1.0, dim)?;
    let limit = constrained_spectrum(&forms, dim)?;
    for t in [0.05, 0.5, 5.0] {
        let k = heat_kernel_eval(&flat, forms.basis(), t, (0.1, 0.2), (0.1, 0.2), dim)?;
        println!("flat kernel on the diagonal, t = {t}: {:.6}", k.re);
    }
    let half = family_spectrum(&forms, 0.5, dim)?;
    for t in [0.05, 1.0] {
        let parseval = kernel_l2_distance(&half, &limit, t)?;
        let quadrature = kernel_l2_distance_quadrature(&half, &limit, forms.basis(), t, 40)?;
        println!("t = {t}: Parseval {parseval:.10}, quadrature {quadrature:.10}");
    }
    Ok(())
}
