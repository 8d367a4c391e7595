//! Sequences of Hilbert structures on a common coordinate space.
//!
//! A space `H_n` is a Gram matrix `M_n` on `ℂ^{d_n}` together with an
//! embedding `Φ_n: ℂ^d → ℂ^{d_n}` from the limit coordinates. Limits are
//! observed along finite sequences, so every diagnostic returns a [`Trend`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, CMat, CVec, C64};

/// A finite sequence of nonnegative defects standing in for `n → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub values: Vec<f64>,
    /// Non-increasing within `1e-12` relative slack.
    pub monotone: bool,
    pub last: f64,
}

impl Trend {
    pub fn new(values: Vec<f64>) -> Self {
        let monotone = values.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1e-300));
        let last = values.last().copied().unwrap_or(0.0);
        Self { values, monotone, last }
    }

    /// Strictly decreasing.
    pub fn strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }

    /// The last value is below `tol`.
    pub fn settles(&self, tol: f64) -> bool {
        self.last <= tol
    }
}

fn check_spd(m: &CMat) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    cholesky(m).map(|_| ()).ok_or(Error::NotPositiveDefinite("Gram matrix"))
}

fn quad(m: &CMat, v: &CVec) -> f64 {
    v.dotc(&(m * v)).re.max(0.0)
}

fn inner(m: &CMat, u: &CVec, w: &CVec) -> C64 {
    // ⟨u, w⟩ = wᴴ M u
    w.dotc(&(m * u))
}

#[derive(Debug, Clone)]
pub struct GramSequence {
    grams: Vec<CMat>,
    limit: CMat,
    embeddings: Option<Vec<CMat>>,
}

impl GramSequence {
    /// Identity embeddings; every Gram must have the limit's dimension.
    pub fn new(grams: Vec<CMat>, limit: CMat) -> Result<Self> {
        check_spd(&limit)?;
        for g in &grams {
            check_spd(g)?;
            if g.nrows() != limit.nrows() {
                return Err(Error::DimensionMismatch { expected: limit.nrows(), got: g.nrows() });
            }
        }
        Ok(Self { grams, limit, embeddings: None })
    }

    /// Explicit embeddings `Φ_n` of shape `d_n × d`.
    pub fn with_embeddings(grams: Vec<CMat>, limit: CMat, embeddings: Vec<CMat>) -> Result<Self> {
        check_spd(&limit)?;
        if embeddings.len() != grams.len() {
            return Err(Error::DimensionMismatch { expected: grams.len(), got: embeddings.len() });
        }
        for (g, phi) in grams.iter().zip(&embeddings) {
            check_spd(g)?;
            if phi.nrows() != g.nrows() || phi.ncols() != limit.nrows() {
                return Err(Error::DimensionMismatch { expected: g.nrows(), got: phi.nrows() });
            }
        }
        Ok(Self { grams, limit, embeddings: Some(embeddings) })
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.limit.nrows()
    }

    pub fn gram(&self, n: usize) -> &CMat {
        &self.grams[n]
    }

    pub fn limit_gram(&self) -> &CMat {
        &self.limit
    }

    pub fn embed(&self, n: usize, u: &CVec) -> CVec {
        match &self.embeddings {
            Some(e) => &e[n] * u,
            None => u.clone(),
        }
    }

    pub fn norm(&self, n: usize, v: &CVec) -> f64 {
        quad(&self.grams[n], v).sqrt()
    }

    pub fn limit_norm(&self, u: &CVec) -> f64 {
        quad(&self.limit, u).sqrt()
    }

    fn check_limit_vec(&self, u: &CVec) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        Ok(())
    }

    fn check_seq(&self, u_seq: &[CVec]) -> Result<()> {
        if u_seq.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: u_seq.len() });
        }
        for (n, v) in u_seq.iter().enumerate() {
            if v.len() != self.grams[n].nrows() {
                return Err(Error::DimensionMismatch { expected: self.grams[n].nrows(), got: v.len() });
            }
        }
        Ok(())
    }
}

/// `max_probes |‖Φ_n u‖_{M_n} − ‖u‖_M|` per `n`.
pub fn space_convergence_defect(seq: &GramSequence, probes: &[CVec]) -> Result<Trend> {
    for p in probes {
        seq.check_limit_vec(p)?;
        if p.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::OutOfRange { what: "probe norm", value: 0.0 });
        }
    }
    let values = (0..seq.len())
        .map(|n| probes.iter().map(|u| (seq.norm(n, &seq.embed(n, u)) - seq.limit_norm(u)).abs()).fold(0.0, f64::max))
        .collect();
    Ok(Trend::new(values))
}

/// `‖Φ_n u − u_n‖_{M_n}` per `n`.
pub fn strong_defect(u_seq: &[CVec], u: &CVec, seq: &GramSequence) -> Result<Trend> {
    seq.check_seq(u_seq)?;
    seq.check_limit_vec(u)?;
    let values = u_seq.iter().enumerate().map(|(n, un)| seq.norm(n, &(seq.embed(n, u) - un))).collect();
    Ok(Trend::new(values))
}

/// `max_w |⟨u_n, Φ_n w⟩_{M_n} − ⟨u, w⟩_M|` per `n`.
pub fn weak_defect(u_seq: &[CVec], u: &CVec, probes: &[CVec], seq: &GramSequence) -> Result<Trend> {
    seq.check_seq(u_seq)?;
    seq.check_limit_vec(u)?;
    if probes.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    for p in probes {
        seq.check_limit_vec(p)?;
    }
    let values = u_seq
        .iter()
        .enumerate()
        .map(|(n, un)| {
            probes.iter().map(|w| (inner(seq.gram(n), un, &seq.embed(n, w)) - inner(seq.limit_gram(), u, w)).norm()).fold(0.0, f64::max)
        })
        .collect();
    Ok(Trend::new(values))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiminfReport {
    pub limit_norm: f64,
    pub norms: Vec<f64>,
    /// `min_{m ≥ n} ‖u_m‖_{M_m}` for each `n`.
    pub tail_minima: Vec<f64>,
    pub liminf_estimate: f64,
    /// `‖u‖ ≤ liminf-estimate + 1e-10`.
    pub holds: bool,
    /// The norms converge to `‖u‖` (within `1e-6` relative at the end).
    pub strong: bool,
}

pub fn liminf_norm_check(u_seq: &[CVec], u: &CVec, seq: &GramSequence) -> Result<LiminfReport> {
    seq.check_seq(u_seq)?;
    seq.check_limit_vec(u)?;
    let limit_norm = seq.limit_norm(u);
    let norms: Vec<f64> = u_seq.iter().enumerate().map(|(n, v)| seq.norm(n, v)).collect();
    let mut tail_minima = norms.clone();
    for i in (0..tail_minima.len().saturating_sub(1)).rev() {
        tail_minima[i] = tail_minima[i].min(tail_minima[i + 1]);
    }
    // the tail minimum over the second half of the sequence
    let liminf_estimate = tail_minima.get(norms.len() / 2).copied().unwrap_or(f64::INFINITY);
    let holds = limit_norm <= liminf_estimate + 1e-10;
    let strong = norms.last().is_some_and(|&l| (l - limit_norm).abs() <= 1e-6 * limit_norm.max(1.0));
    Ok(LiminfReport { limit_norm, norms, tail_minima, liminf_estimate, holds, strong })
}

/// Diagonal quadratic forms with explicit domains. `None` in a mask means
/// the whole coordinate space.
#[derive(Debug, Clone)]
pub struct FormSequence {
    pub stiffness: Vec<CMat>,
    pub limit: CMat,
    pub masks: Option<Vec<Vec<bool>>>,
    pub limit_mask: Option<Vec<bool>>,
}

impl FormSequence {
    pub fn new(stiffness: Vec<CMat>, limit: CMat) -> Self {
        Self { stiffness, limit, masks: None, limit_mask: None }
    }

    pub fn with_masks(mut self, masks: Vec<Vec<bool>>, limit_mask: Vec<bool>) -> Self {
        self.masks = Some(masks);
        self.limit_mask = Some(limit_mask);
        self
    }

    fn in_domain(&self, n: Option<usize>, k: usize) -> bool {
        match n {
            Some(n) => self.masks.as_ref().is_none_or(|m| m[n][k]),
            None => self.limit_mask.as_ref().is_none_or(|m| m[k]),
        }
    }

    /// `Q̄_n(u)` (or `Q̄(u)` for `n = None`); `None` stands for `+∞`.
    pub fn extended_value(&self, n: Option<usize>, u: &CVec) -> Option<f64> {
        let k = match n {
            Some(n) => &self.stiffness[n],
            None => &self.limit,
        };
        if (0..u.len()).any(|i| u[i].norm() > 0.0 && !self.in_domain(n, i)) {
            return None;
        }
        Some(quad(k, u))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoscoReport {
    /// Entrywise liminf: convergent where the limit is finite, divergent elsewhere.
    pub liminf_condition: bool,
    /// Constant recovery sequences for every direction in the limit domain.
    pub recovery_condition: bool,
    /// Sorted eigenvalues of the limit form on its domain.
    pub limit_eigenvalues: Vec<f64>,
    /// `max_k |λ_k(Q_n) − λ_k(Q)|` over the limit's eigenvalue count.
    pub eigenvalue_defects: Trend,
    pub spectra_converge: bool,
}

fn diagonal(m: &CMat) -> Result<Vec<f64>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].norm() > 1e-14 * scale {
                return Err(Error::NotDiagonal);
            }
        }
    }
    Ok((0..m.nrows()).map(|i| m[(i, i)].re).collect())
}

/// Both Mosco conditions for diagonal forms on fixed Grams, judged on the
/// last term of the sequence with tolerance `tol`, and the eigenvalue
/// convergence they imply.
pub fn mosco_diagnostic(family: &FormSequence, tol: f64) -> Result<MoscoReport> {
    let q = diagonal(&family.limit)?;
    let qs: Vec<Vec<f64>> = family.stiffness.iter().map(diagonal).collect::<Result<_>>()?;
    let last = qs.len().checked_sub(1).ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
    let d = q.len();
    let mut liminf_condition = true;
    let mut recovery_condition = true;
    for k in 0..d {
        let in_last = family.in_domain(Some(last), k);
        if family.in_domain(None, k) {
            let converged = in_last && (qs[last][k] - q[k]).abs() <= tol * q[k].abs().max(1.0);
            liminf_condition &= converged || (in_last && qs[last][k] >= q[k]);
            recovery_condition &= converged;
        } else {
            liminf_condition &= !in_last || qs[last][k] >= 1.0 / tol;
        }
    }
    let mut limit_eigenvalues: Vec<f64> = (0..d).filter(|&k| family.in_domain(None, k)).map(|k| q[k]).collect();
    limit_eigenvalues.sort_by(f64::total_cmp);
    let defects = qs
        .iter()
        .enumerate()
        .map(|(n, qn)| {
            let mut ev: Vec<f64> = (0..d).filter(|&k| family.in_domain(Some(n), k)).map(|k| qn[k]).collect();
            ev.sort_by(f64::total_cmp);
            if ev.len() < limit_eigenvalues.len() {
                return f64::INFINITY;
            }
            limit_eigenvalues.iter().zip(&ev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .collect();
    let eigenvalue_defects = Trend::new(defects);
    let scale = limit_eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let spectra_converge = eigenvalue_defects.settles(tol * scale);
    Ok(MoscoReport { liminf_condition, recovery_condition, limit_eigenvalues, eigenvalue_defects, spectra_converge })
}

/// Indices of a subsequence whose probe inner products agree within `tol`:
/// a constructive stand-in for extracting a weakly convergent subsequence
/// from a bounded one. Picks the largest such cluster.
pub fn weak_subsequence(u_seq: &[CVec], probes: &[CVec], seq: &GramSequence, tol: f64) -> Result<Vec<usize>> {
    seq.check_seq(u_seq)?;
    let features: Vec<Vec<C64>> =
        u_seq.iter().enumerate().map(|(n, un)| probes.iter().map(|w| inner(seq.gram(n), un, &seq.embed(n, w))).collect()).collect();
    let dist = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let mut best: Vec<usize> = Vec::new();
    for center in &features {
        let members: Vec<usize> = (0..features.len()).filter(|&n| dist(center, &features[n]) <= tol / 2.0).collect();
        if members.len() > best.len() {
            best = members;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn e(d: usize, k: usize) -> CVec {
        CVec::from_fn(d, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn scaled_grams_give_closed_form_defect() {
        let m = CMat::from_fn(3, 3, |i, j| if i == j { c(2.0 + i as f64, 0.0) } else { c(0.1, 0.0) });
        let grams = (1..=6).map(|n| m.scale(1.0 + 1.0 / n as f64)).collect();
        let seq = GramSequence::new(grams, m.clone()).unwrap();
        let u = CVec::from_vec(vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.2, 0.2)]);
        let t = space_convergence_defect(&seq, std::slice::from_ref(&u)).unwrap();
        let nu = seq.limit_norm(&u);
        for (n, v) in t.values.iter().enumerate() {
            let want = ((1.0 + 1.0 / (n + 1) as f64).sqrt() - 1.0) * nu;
            assert!((v - want).abs() < 1e-13);
        }
        assert!(t.monotone);
    }

    #[test]
    fn alternating_sequence_is_not_weakly_convergent() {
        let seq = GramSequence::new(vec![CMat::identity(2, 2); 10], CMat::identity(2, 2)).unwrap();
        let u_seq: Vec<CVec> = (0..10).map(|n| e(2, 0).scale(if n % 2 == 0 { 1.0 } else { -1.0 })).collect();
        let t = weak_defect(&u_seq, &CVec::zeros(2), &[e(2, 0), e(2, 1)], &seq).unwrap();
        assert!(!t.settles(0.5));
        // but the even terms form a weakly convergent subsequence
        let sub = weak_subsequence(&u_seq, &[e(2, 0), e(2, 1)], &seq, 1e-9).unwrap();
        assert_eq!(sub.len(), 5);
    }

    #[test]
    fn mosco_constant_family() {
        let q = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]));
        let fam = FormSequence::new(vec![q.clone(); 4], q);
        let r = mosco_diagnostic(&fam, 1e-12).unwrap();
        assert!(r.liminf_condition && r.recovery_condition && r.spectra_converge);
        assert_eq!(r.limit_eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn mosco_rejects_non_diagonal() {
        let q = CMat::from_fn(2, 2, |_, _| c(1.0, 0.0));
        assert!(matches!(mosco_diagnostic(&FormSequence::new(vec![q.clone()], q), 1e-9), Err(Error::NotDiagonal)));
    }
}
