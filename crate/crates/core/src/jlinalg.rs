//! Fiberwise linear algebra for pairs of J-compatible Hermitian forms.
//!
//! A fiber of the tangent bundle is modelled as `R^{2m}` carrying an almost
//! complex structure `J`, a positive definite J-invariant form `g` and a
//! semidefinite J-invariant form `h`. Everything here is a pure function of
//! those matrices.
//!
//! Conventions:
//! - `h = g·F` as bilinear forms, i.e. `h(u, v) = g(F u, v)`.
//! - `G = (F⁻¹)ᵀ` acts on covectors; on `T*` the complex structure is `Jᵀ`.
//! - Complex covectors pair sesquilinearly: `g*(α, β) = αᵀ g⁻¹ β̄`.
//! - `T^{1,0}` is the `+i` eigenspace of `J`, spanned by `v − iJv`;
//!   `Λ^{1,0}` is the `+i` eigenspace of `Jᵀ` (it contains `dz = dx + i dy`).
//! - On `Λ^{m,0}` the induced metric is the Gram determinant of the factors.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, C64};

const J_TOL: f64 = 1e-12;
const PAIR_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct AlmostComplexStructure {
    j: DMatrix<f64>,
}

impl AlmostComplexStructure {
    pub fn new(j: DMatrix<f64>) -> Result<Self> {
        let n = j.nrows();
        if j.ncols() != n || !n.is_multiple_of(2) || n == 0 {
            return Err(Error::DimensionMismatch { expected: 2 * (n / 2).max(1), got: j.ncols() });
        }
        let scale = j.amax().powi(2).max(1.0);
        let defect = (&j * &j + DMatrix::identity(n, n)).amax();
        if defect > J_TOL * scale {
            return Err(Error::NotAlmostComplex(defect));
        }
        Ok(Self { j })
    }

    /// Block diagonal `[[0, -1], [1, 0]]`, i.e. `J ∂x = ∂y`.
    pub fn standard(m: usize) -> Self {
        let mut j = DMatrix::zeros(2 * m, 2 * m);
        for k in 0..m {
            j[(2 * k + 1, 2 * k)] = 1.0;
            j[(2 * k, 2 * k + 1)] = -1.0;
        }
        Self { j }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn complex_dim(&self) -> usize {
        self.j.nrows() / 2
    }

    pub fn transpose(&self) -> Self {
        Self { j: self.j.transpose() }
    }

    /// Complex basis `{v_k − iJv_k}` of the `+i` eigenspace, built from a
    /// J-adapted real basis `{v_1, Jv_1, …, v_m, Jv_m}`.
    pub fn holomorphic_frame(&self) -> CMat {
        let n = self.j.nrows();
        let m = n / 2;
        let mut span: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n);
        let mut chosen = Vec::with_capacity(m);
        for i in 0..n {
            if chosen.len() == m {
                break;
            }
            let e = nalgebra::DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
            let je = &self.j * &e;
            let mut ok = true;
            let mut added = Vec::new();
            for cand in [e.clone(), je] {
                let mut r = cand.clone();
                for b in span.iter().chain(added.iter()) {
                    let p = r.dot(b);
                    r -= b * p;
                }
                let nr = r.norm();
                if nr < 1e-8 * cand.norm() {
                    ok = false;
                    break;
                }
                added.push(r / nr);
            }
            if ok {
                span.extend(added);
                chosen.push(e);
            }
        }
        let mut z = CMat::zeros(n, m);
        for (k, v) in chosen.iter().enumerate() {
            let jv = &self.j * v;
            for r in 0..n {
                z[(r, k)] = c(v[r], -jv[r]);
            }
        }
        z
    }

    /// Projects a complex covector onto its `(1,0)` part, `(α − iJᵀα)/2`.
    pub fn covector_10_part(&self, a: &CVec) -> CVec {
        let jt = self.j.transpose();
        let ja = real_times_complex(&jt, a);
        (a - ja * c(0.0, 1.0)).scale(0.5)
    }

    /// Projects a complex covector onto its `(0,1)` part, `(α + iJᵀα)/2`.
    pub fn covector_01_part(&self, a: &CVec) -> CVec {
        let jt = self.j.transpose();
        let ja = real_times_complex(&jt, a);
        (a + ja * c(0.0, 1.0)).scale(0.5)
    }
}

fn real_times_complex(a: &DMatrix<f64>, v: &CVec) -> CVec {
    CVec::from_fn(a.nrows(), |r, _| (0..a.ncols()).map(|k| v[k] * a[(r, k)]).sum())
}

/// A positive definite `g` and semidefinite `h`, both invariant under `J`.
#[derive(Debug, Clone)]
pub struct CompatiblePair {
    g: DMatrix<f64>,
    h: DMatrix<f64>,
    j: AlmostComplexStructure,
}

impl CompatiblePair {
    pub fn new(g: DMatrix<f64>, h: DMatrix<f64>, j: AlmostComplexStructure) -> Result<Self> {
        let n = j.matrix().nrows();
        for mat in [&g, &h] {
            if mat.nrows() != n || mat.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: mat.nrows() });
            }
        }
        let g = (&g + g.transpose()) * 0.5;
        let h = (&h + h.transpose()) * 0.5;
        if nalgebra::Cholesky::new(g.clone()).is_none() {
            return Err(Error::NotPositiveDefinite("g"));
        }
        let hmin = h.symmetric_eigenvalues().min();
        if hmin < -1e-12 * h.amax().max(1.0) {
            return Err(Error::NotPositiveDefinite("h"));
        }
        let jm = j.matrix();
        let jscale = jm.amax().powi(2).max(1.0);
        let dg = (jm.transpose() * &g * jm - &g).amax() / (g.amax() * jscale);
        let dh = (jm.transpose() * &h * jm - &h).amax() / (h.amax().max(f64::MIN_POSITIVE) * jscale);
        let defect = dg.max(if h.amax() > 0.0 { dh } else { 0.0 });
        if defect > J_TOL {
            return Err(Error::NotCompatible(defect));
        }
        Ok(Self { g, h, j })
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn structure(&self) -> &AlmostComplexStructure {
        &self.j
    }

    pub fn complex_dim(&self) -> usize {
        self.j.complex_dim()
    }
}

/// An endomorphism commuting with `J`, with its doubled spectrum and its
/// complex-linear restriction to the `+i` eigenspace of `J`.
#[derive(Debug, Clone)]
pub struct FiberEndomorphism {
    pub matrix: DMatrix<f64>,
    /// `λ_1 ≤ … ≤ λ_m`, each of real multiplicity two.
    pub paired_eigenvalues: Vec<f64>,
    /// Restriction to the `+i` eigenspace in the frame `v_k − iJv_k`.
    pub restriction_10: CMat,
    structure: AlmostComplexStructure,
}

impl FiberEndomorphism {
    pub fn structure(&self) -> &AlmostComplexStructure {
        &self.structure
    }

    pub fn det_10(&self) -> C64 {
        self.restriction_10.determinant()
    }
}

fn restrict(mat: &DMatrix<f64>, j: &AlmostComplexStructure) -> CMat {
    let z = j.holomorphic_frame();
    let fz = CMat::from_fn(mat.nrows(), z.ncols(), |r, k| (0..mat.ncols()).map(|i| z[(i, k)] * mat[(r, i)]).sum());
    let zh = z.adjoint();
    let gram = &zh * &z;
    gram.lu().solve(&(zh * fz)).expect("holomorphic frame has full rank")
}

fn paired_from_spectrum(mut spectrum: Vec<f64>) -> Result<Vec<f64>> {
    spectrum.sort_by(f64::total_cmp);
    let scale = spectrum.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let mut paired = Vec::with_capacity(spectrum.len() / 2);
    for pair in spectrum.chunks(2) {
        let d = (pair[0] - pair[1]).abs();
        if d > PAIR_TOL * scale {
            return Err(Error::NotCompatible(d / scale));
        }
        paired.push((0.5 * (pair[0] + pair[1])).max(0.0));
    }
    Ok(paired)
}

/// Solves `g·F = h` and returns `F` with its paired spectrum.
pub fn pullback_endomorphism(pair: &CompatiblePair) -> Result<FiberEndomorphism> {
    let chol = nalgebra::Cholesky::new(pair.g.clone()).ok_or(Error::NotPositiveDefinite("g"))?;
    let f = chol.solve(&pair.h);
    // spectrum of F equals that of L⁻¹ h L⁻ᵀ
    let l = chol.l();
    let x = l.solve_lower_triangular(&pair.h).expect("triangular");
    let sym = l.solve_lower_triangular(&x.transpose()).expect("triangular");
    let sym = (&sym + sym.transpose()) * 0.5;
    let spectrum: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    let paired = paired_from_spectrum(spectrum)?;
    let restriction_10 = restrict(&f, &pair.j);
    Ok(FiberEndomorphism { matrix: f, paired_eigenvalues: paired, restriction_10, structure: pair.j.clone() })
}

/// `G = (F⁻¹)ᵀ` on covectors; fails at the degeneracy locus.
pub fn dual_endomorphism(f: &FiberEndomorphism) -> Result<FiberEndomorphism> {
    let least = f.paired_eigenvalues.first().copied().unwrap_or(0.0);
    let top = f.paired_eigenvalues.last().copied().unwrap_or(0.0);
    if least <= 1e-14 * top.max(1.0) {
        return Err(Error::SingularFiber(least));
    }
    let inv = f.matrix.clone().try_inverse().ok_or(Error::SingularFiber(least))?;
    let g = inv.transpose();
    let structure = f.structure.transpose();
    let paired = f.paired_eigenvalues.iter().rev().map(|l| 1.0 / l).collect();
    let restriction_10 = restrict(&g, &structure);
    Ok(FiberEndomorphism { matrix: g, paired_eigenvalues: paired, restriction_10, structure })
}

/// Pointwise operator norm `sup g(Fv, v) / g(v, v)`, the largest paired eigenvalue.
pub fn operator_norm(f: &FiberEndomorphism) -> f64 {
    f.paired_eigenvalues.last().copied().unwrap_or(0.0)
}

/// Induced metric on `Λ^{m,0}` of a decomposable `α_1 ∧ … ∧ α_m`, from the
/// inverse metric on covectors.
pub fn wedge_norm_sqr(covectors: &[CVec], inverse_metric: &DMatrix<f64>) -> f64 {
    let m = covectors.len();
    let gram = CMat::from_fn(m, m, |i, j| sesquilinear(&covectors[i], &covectors[j], inverse_metric));
    gram.determinant().re
}

fn sesquilinear(a: &CVec, b: &CVec, inverse_metric: &DMatrix<f64>) -> C64 {
    let n = a.len();
    let mut s = C64::new(0.0, 0.0);
    for r in 0..n {
        for k in 0..n {
            s += a[r] * b[k].conj() * inverse_metric[(r, k)];
        }
    }
    s
}

fn check_covectors(covectors: &[CVec], pair: &CompatiblePair) -> Result<()> {
    let n = 2 * pair.complex_dim();
    if covectors.len() != pair.complex_dim() {
        return Err(Error::DimensionMismatch { expected: pair.complex_dim(), got: covectors.len() });
    }
    if let Some(bad) = covectors.iter().find(|a| a.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    Ok(())
}

fn positive_fiber(pair: &CompatiblePair) -> Result<FiberEndomorphism> {
    let f = pullback_endomorphism(pair)?;
    let least = f.paired_eigenvalues[0];
    if least <= 1e-14 * operator_norm(&f).max(1.0) {
        return Err(Error::SingularFiber(least));
    }
    Ok(f)
}

/// `|h*_{m,0}(ξ,ξ)·√det F − g*_{m,0}(ξ,ξ)|` for `ξ` the wedge of the `(1,0)`
/// parts of the given covectors. Vanishes identically: the `(m,0)` pairing
/// does not see the metric.
pub fn canonical_invariance_defect(covectors: &[CVec], pair: &CompatiblePair) -> Result<f64> {
    check_covectors(covectors, pair)?;
    let f = positive_fiber(pair)?;
    let xi: Vec<CVec> = covectors.iter().map(|a| pair.j.covector_10_part(a)).collect();
    let g_inv = pair.g.clone().try_inverse().ok_or(Error::NotPositiveDefinite("g"))?;
    let h_inv = pair.h.clone().try_inverse().ok_or(Error::SingularFiber(f.paired_eigenvalues[0]))?;
    let g_val = wedge_norm_sqr(&xi, &g_inv);
    let h_val = wedge_norm_sqr(&xi, &h_inv);
    let root_det = f.matrix.determinant().max(0.0).sqrt();
    Ok((h_val * root_det - g_val).abs())
}

/// A fiber element of `Λ^{m,1} = Λ^{m,0} ⊗ Λ^{0,1}`, stored as
/// `(α_1 ∧ … ∧ α_m) ⊗ β`.
#[derive(Debug, Clone)]
pub struct MixedCovector {
    pub holomorphic: Vec<CVec>,
    pub antiholomorphic: CVec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormTransfer {
    /// `g*_{m,1}(id ⊗ G^{0,1} ψ, ψ)`, the `h`-norm read in the `g` geometry.
    pub h_value: f64,
    pub g_norm: f64,
    /// `c · g_norm` with `c` the least eigenvalue of `G^{0,1}`.
    pub g_lower: f64,
    /// `‖G^{0,1}‖ · g_norm`.
    pub g_upper: f64,
}

pub fn m1_norm_transfer(psi: &MixedCovector, pair: &CompatiblePair) -> Result<NormTransfer> {
    check_covectors(&psi.holomorphic, pair)?;
    let n = 2 * pair.complex_dim();
    if psi.antiholomorphic.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: psi.antiholomorphic.len() });
    }
    let f = positive_fiber(pair)?;
    let g_dual = dual_endomorphism(&f)?;
    let xi: Vec<CVec> = psi.holomorphic.iter().map(|a| pair.j.covector_10_part(a)).collect();
    let beta = pair.j.covector_01_part(&psi.antiholomorphic);
    let g_inv = pair.g.clone().try_inverse().ok_or(Error::NotPositiveDefinite("g"))?;
    let top = wedge_norm_sqr(&xi, &g_inv);
    let g_beta = real_times_complex(&g_dual.matrix, &beta);
    let h_value = top * sesquilinear(&g_beta, &beta, &g_inv).re;
    let g_norm = top * sesquilinear(&beta, &beta, &g_inv).re;
    let lo = g_dual.paired_eigenvalues[0];
    let hi = operator_norm(&g_dual);
    Ok(NormTransfer { h_value, g_norm, g_lower: lo * g_norm, g_upper: hi * g_norm })
}

fn random_spd(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    a.transpose() * a + DMatrix::identity(n, n) * 0.2
}

/// Random J-compatible pair in complex dimension `m`. `J` is a random
/// conjugate of the standard structure; `h` is made rank deficient when
/// `semidefinite` is set.
pub fn random_pair(m: usize, semidefinite: bool, rng: &mut impl Rng) -> CompatiblePair {
    let n = 2 * m;
    let j0 = AlmostComplexStructure::standard(m);
    let j0m = j0.matrix().clone();
    let average = |s: DMatrix<f64>| (&s + j0m.transpose() * &s * &j0m) * 0.5;
    let g0 = average(random_spd(n, rng));
    let mut h0 = average(random_spd(n, rng));
    if semidefinite {
        // kill one complex line: project out span{e_0, J e_0}
        let mut p = DMatrix::<f64>::identity(n, n);
        p[(0, 0)] = 0.0;
        p[(1, 1)] = 0.0;
        h0 = &p * h0 * &p;
    }
    let mut p = DMatrix::<f64>::identity(n, n);
    for v in p.iter_mut() {
        *v += 0.25 * rng.random_range(-1.0..1.0);
    }
    let pinv = p.clone().try_inverse().expect("perturbed identity is invertible");
    let j = AlmostComplexStructure { j: &p * &j0m * &pinv };
    let g = pinv.transpose() * g0 * &pinv;
    let h = pinv.transpose() * h0 * &pinv;
    CompatiblePair::new(g, h, j).expect("construction is J-compatible")
}

/// Random element of `Λ^{1,0}` for the structure `j`.
pub fn random_covector_10(j: &AlmostComplexStructure, rng: &mut impl Rng) -> CVec {
    let n = j.matrix().nrows();
    let a = CVec::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    j.covector_10_part(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
    }

    #[test]
    fn identity_pair() {
        let j = AlmostComplexStructure::standard(2);
        let pair = CompatiblePair::new(DMatrix::identity(4, 4), DMatrix::identity(4, 4), j).unwrap();
        let f = pullback_endomorphism(&pair).unwrap();
        assert!((f.matrix.clone() - DMatrix::identity(4, 4)).amax() < 1e-15);
        assert_eq!(f.paired_eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn scalar_scaling() {
        let j = AlmostComplexStructure::standard(1);
        let pair = CompatiblePair::new(DMatrix::identity(2, 2), DMatrix::identity(2, 2) * 2.0, j).unwrap();
        let f = pullback_endomorphism(&pair).unwrap();
        assert!((f.matrix.clone() - DMatrix::identity(2, 2) * 2.0).amax() < 1e-15);
        assert_eq!(f.paired_eigenvalues, vec![2.0]);
        assert!((f.det_10() - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dual_of_diagonal() {
        let j = AlmostComplexStructure::standard(2);
        let pair = CompatiblePair::new(DMatrix::identity(4, 4), diag(&[2.0, 2.0, 8.0, 8.0]), j).unwrap();
        let f = pullback_endomorphism(&pair).unwrap();
        assert_eq!(operator_norm(&f), 8.0);
        let g = dual_endomorphism(&f).unwrap();
        assert!((g.paired_eigenvalues[0] - 0.125).abs() < 1e-15);
        assert!((g.paired_eigenvalues[1] - 0.5).abs() < 1e-15);
        assert!((g.det_10() * f.det_10() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let j = AlmostComplexStructure::standard(2);
        let pair = CompatiblePair::new(DMatrix::identity(4, 4), diag(&[3.0, 3.0, 5.0, 5.0]), j).unwrap();
        assert_eq!(operator_norm(&pullback_endomorphism(&pair).unwrap()), 5.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let bad_j = AlmostComplexStructure::new(DMatrix::identity(2, 2));
        assert!(matches!(bad_j, Err(Error::NotAlmostComplex(_))));
        let j = AlmostComplexStructure::standard(1);
        let not_pd = CompatiblePair::new(diag(&[1.0, -1.0]), DMatrix::identity(2, 2), j.clone());
        assert!(matches!(not_pd, Err(Error::NotPositiveDefinite("g"))));
        let j2 = AlmostComplexStructure::standard(2);
        let not_inv = CompatiblePair::new(DMatrix::identity(4, 4), diag(&[1.0, 2.0, 3.0, 3.0]), j2);
        assert!(matches!(not_inv, Err(Error::NotCompatible(_))));
    }

    #[test]
    fn semidefinite_accepted_but_not_dualized() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = random_pair(2, true, &mut rng);
        let f = pullback_endomorphism(&pair).unwrap();
        assert!(f.paired_eigenvalues[0].abs() < 1e-10);
        assert!(matches!(dual_endomorphism(&f), Err(Error::SingularFiber(_))));
        let xi = vec![random_covector_10(pair.structure(), &mut rng); 2];
        assert!(matches!(canonical_invariance_defect(&xi, &pair), Err(Error::SingularFiber(_))));
    }

    #[test]
    fn conformal_m1_cases() {
        let j = AlmostComplexStructure::standard(1);
        let dz = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let dzbar = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, -1.0)]);
        for &k in &[1.0, 0.3, 7.0] {
            let pair = CompatiblePair::new(DMatrix::identity(2, 2), DMatrix::identity(2, 2) * k, j.clone()).unwrap();
            let d = canonical_invariance_defect(std::slice::from_ref(&dz), &pair).unwrap();
            assert!(d < 1e-15, "defect {d}");
            let t = m1_norm_transfer(&MixedCovector { holomorphic: vec![dz.clone()], antiholomorphic: dzbar.clone() }, &pair).unwrap();
            assert!((t.h_value - t.g_norm / k).abs() < 1e-14 * t.g_norm);
            assert!((t.g_lower - t.h_value).abs() < 1e-14 * t.g_norm);
            assert!((t.g_upper - t.h_value).abs() < 1e-14 * t.g_norm);
        }
    }

    #[test]
    fn holomorphic_frame_is_plus_i_eigenspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pair = random_pair(3, false, &mut rng);
        let j = pair.structure();
        let z = j.holomorphic_frame();
        let jc = crate::linalg::real_to_complex(j.matrix());
        assert!((&jc * &z - &z * c(0.0, 1.0)).norm() < 1e-12);
    }
}
