//! Strong and weak convergence along Hilbert spaces with varying Gram
//! matrices, the weakly-but-not-strongly convergent witness, and a diagonal
//! Mosco family whose spectra converge.

use degenerate_spectra::linalg::{c, CMat, CVec};
use degenerate_spectra::varyhilbert::{liminf_norm_check, mosco_diagnostic, strong_defect, weak_defect, FormSequence, GramSequence};

fn diag(v: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0))))
}

fn unit(n: usize, k: usize) -> CVec {
    CVec::from_fn(n, |i, _| c(if i == k { 1.0 } else { 0.0 }, 0.0))
}

fn main() -> degenerate_spectra::Result<()> {
    const N: usize = 12;
    let m = diag(&[1.0, 2.0, 3.0]);
    let seq = GramSequence::new((1..=N).map(|n| m.scale(1.0 + 1.0 / n as f64)).collect(), m.clone())?;
    let u = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5)]);
    let u_seq: Vec<CVec> = (1..=N).map(|n| &u + unit(3, 0).scale(1.0 / n as f64)).collect();
    let strong = strong_defect(&u_seq, &u, &seq)?;
    println!("strong defect: {:.3e} -> {:.3e}, monotone {}", strong.values[0], strong.last, strong.monotone);

    // e_n in a fixed space: weakly null but every norm is 1
    let flat = GramSequence::new(vec![CMat::identity(N, N); N], CMat::identity(N, N))?;
    let walking: Vec<CVec> = (0..N).map(|n| unit(N, n)).collect();
    let zero = CVec::zeros(N);
    let probe = CVec::from_fn(N, |k, _| c(0.5f64.powi(k as i32), 0.0));
    let weak = weak_defect(&walking, &zero, &[probe], &flat)?;
    let liminf = liminf_norm_check(&walking, &zero, &flat)?;
    println!("walking basis: weak defect {:.3e}, strong {}, liminf holds {}", weak.last, liminf.strong, liminf.holds);

    // one direction diverges and drops out of the limit domain
    let family = FormSequence::new(
        (1..=N).map(|n| diag(&[3.0 + 1.0 / n as f64, 1.0, 2.0, 10f64.powi(n as i32)])).collect(),
        diag(&[3.0, 1.0, 2.0, 0.0]),
    )
    .with_masks(vec![vec![true; 4]; N], vec![true, true, true, false]);
    let report = mosco_diagnostic(&family, 0.1)?;
    println!(
        "Mosco: liminf {}, recovery {}, limit eigenvalues {:?}, eigenvalue defect {:.3e}",
        report.liminf_condition, report.recovery_condition, report.limit_eigenvalues, report.eigenvalue_defects.last
    );
    Ok(())
}
