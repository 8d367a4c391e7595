//! `λ_k(s)` along the sweep against the constrained limit, with the cluster
//! projection gaps.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::spectra::{cluster, cluster_gap, constrained_spectrum, default_gap_tol, family_spectrum};

fn main() -> degenerate_spectra::Result<()> {
    let forms = DiscreteForms::new(6, MetricFamily::default());
    let dim = forms.dim();
    let limit = constrained_spectrum(&forms, dim)?;
    let window = limit.truncated(12);
    let clusters = cluster(&window, default_gap_tol(&window))?;
    println!("limit: {:?}", &limit.eigenvalues[..6]);
    for s in [0.5, 0.2, 0.1, 0.05, 0.02, 0.01] {
        let spec = family_spectrum(&forms, s, dim)?;
        let delta = (1..6).map(|k| (spec.eigenvalues[k] - limit.eigenvalues[k]).abs() / limit.eigenvalues[k]).fold(0.0, f64::max);
        let gap = cluster_gap(&limit, &spec, &clusters[1])?;
        println!("s = {s:<5} max relative delta (k ≤ 6) {delta:.3e}, gap of the second cluster {gap:.3e}");
    }
    Ok(())
}
