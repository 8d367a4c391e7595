//! Pointwise algebra of a J-compatible pair `(g, h)`: the endomorphism
//! `F = g⁻¹h`, its paired spectrum, the determinant identity and the
//! operator norm on `(m,0)`-forms.

use degenerate_spectra::jlinalg::{
    canonical_invariance_defect, dual_endomorphism, operator_norm, pullback_endomorphism, random_covector_10, random_pair,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> degenerate_spectra::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pair = random_pair(2, false, &mut rng);
    let f = pullback_endomorphism(&pair)?;
    println!("paired eigenvalues of F: {:?}", f.paired_eigenvalues);

    let det_real = f.matrix.determinant();
    let det_10 = f.det_10();
    println!("det F = {det_real:.12}, (det F|(1,0))² = {:.12}", (det_10 * det_10).re);

    let g = dual_endomorphism(&f)?;
    println!("det F · det G = {:.12}", det_real * g.matrix.determinant());
    println!("|F| = {:.6}, |G| = {:.6}", operator_norm(&f), operator_norm(&g));

    let covectors: Vec<_> = (0..2).map(|_| random_covector_10(pair.structure(), &mut rng)).collect();
    println!("canonical invariance defect: {:.2e}", canonical_invariance_defect(&covectors, &pair)?);

    let degenerate = random_pair(2, true, &mut rng);
    let f0 = pullback_endomorphism(&degenerate)?;
    println!("semidefinite pair, paired eigenvalues {:?}; dual: {:?}", f0.paired_eigenvalues, dual_endomorphism(&f0).err());
    Ok(())
}
