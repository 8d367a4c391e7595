//! The blended metric family `ρ_s = (1 − f(s))ρ_0 + f(s)` and its domination
//! constants.

use degenerate_spectra::geometry::{family_constants, verify_domination, MetricFamily};

fn main() -> degenerate_spectra::Result<()> {
    let family = MetricFamily::default();
    for s in [1.0, 0.5, 0.1, 0.01] {
        println!("s = {s:<5} min ρ_s = {:.4}  ρ_s(0.5, 0.5) = {:.4}", family.min_weight(s), family.rho(s, 0.5, 0.5)?);
    }
    let bounds = family_constants(&family, 256)?;
    println!("𝔟 = {}, 𝔞 = {}, ν = {}", bounds.b, bounds.a, bounds.nu);
    println!(
        "worst domination slack on the sweep: {:.3e}",
        verify_domination(&family, &bounds, 128, &[1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01])
    );
    Ok(())
}
