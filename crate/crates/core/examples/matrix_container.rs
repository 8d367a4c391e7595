//! Writes the eigenvectors of one spectrum to the binary container and reads
//! them back, along with a CSV table of the eigenvalues.

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::geometry::MetricFamily;
use degenerate_spectra::io::{read_matrix, spectrum_table, write_matrix};
use degenerate_spectra::spectra::family_spectrum;

fn main() -> degenerate_spectra::Result<()> {
    let forms = DiscreteForms::new(3, MetricFamily::default());
    let s = 0.2;
    let spec = family_spectrum(&forms, s, forms.dim())?;
    let mut bytes = Vec::new();
    write_matrix(&mut bytes, 3, Some(s), spec.strategy, forms.grid_for(s)?, &spec.eigenvectors)?;
    let (header, matrix) = read_matrix(bytes.as_slice())?;
    println!("{header:?}");
    println!("{} bytes, round trip exact: {}", bytes.len(), matrix == spec.eigenvectors);
    print!("{}", spectrum_table(&spec.truncated(5)).to_csv_string());
    Ok(())
}
