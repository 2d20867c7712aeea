//! Linear independence of subspace systems and constructive reductions.
//!
//! All constants are quadratic-form constants: `‖Σxᵢ‖² ≥ ε Σ‖xᵢ‖²`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{
    eig_hermitian, eigenvalues, multiset_distance, null_space, pinv, spectral_projector, svd, CMatrix,
    Tolerances, C64,
};
use crate::pairs::halmos_decompose;
use crate::report::MarginReport;
use crate::subspace::{sum_span, Subspace, SubspaceSystem};
use crate::systems::sum_gap_values;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndependenceCertificate {
    /// Smallest eigenvalue of the Gram matrix of `[B₁ … Bₙ]`.
    pub epsilon: f64,
    pub independent: bool,
}

pub fn independence_certificate(s: &SubspaceSystem, tol: &Tolerances) -> Result<IndependenceCertificate> {
    let g = s.concatenation();
    let total = g.cols();
    let epsilon = if total == 0 {
        1.0
    } else if total > g.rows() {
        0.0
    } else {
        let sv = svd(&g, tol)?;
        let smin = *sv.sigma.last().unwrap_or(&0.0);
        smin * smin
    };
    Ok(IndependenceCertificate { epsilon, independent: epsilon > tol.margin_tol })
}

/// Idempotents `Qₖ` of the direct sum `H = H₁ ∔ … ∔ Hₙ`: `Qₖ x = xₖ`.
pub fn oblique_projections(s: &SubspaceSystem, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let cert = independence_certificate(s, tol)?;
    if !cert.independent {
        return Err(Error::NotIndependent { epsilon: cert.epsilon });
    }
    let d = s.ambient_dim();
    if s.total_rank() != d {
        return Err(Error::SumNotFull { dim: s.total_rank(), ambient: d });
    }
    let ginv = pinv(&s.concatenation(), tol)?;
    let mut out = Vec::with_capacity(s.len());
    let mut row = 0;
    for h in s.members() {
        let idx: Vec<usize> = (row..row + h.dim()).collect();
        row += h.dim();
        out.push(h.basis().matmul(&ginv.select_rows(&idx)));
    }
    Ok(out)
}

/// `A = Σ λₖ Qₖ` and the multiset distance between `σ(A)` and the `λₖ`
/// repeated `rank Qₖ` times.
pub fn spectral_synthesis(s: &SubspaceSystem, qs: &[CMatrix], lambdas: &[C64]) -> Result<(CMatrix, f64)> {
    if qs.len() != lambdas.len() || qs.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: lambdas.len() });
    }
    let d = s.ambient_dim();
    let mut a = CMatrix::zeros(d, d);
    let mut expect = Vec::with_capacity(d);
    for ((q, &l), h) in qs.iter().zip(lambdas).zip(s.members()) {
        a = &a + &q.scale(l);
        expect.extend(core::iter::repeat_n(l, h.dim()));
    }
    let ev = eigenvalues(&a)?;
    Ok((a.clone(), multiset_distance(&ev, &expect)))
}

/// Reducibility margin for shrinking only `H_{m+1}, …, Hₙ` (`m` is 1-based).
///
/// On `Z = {y ∈ ⊕Hⱼ : Σyⱼ = 0}` computes the best `ε` in
/// `Σ_{j>m} ‖yⱼ‖² ≥ ε² Σ_{j≤m} ‖yⱼ‖²`. Entries `rps_epsilon` and
/// `prefix_independence`; flag `member`.
pub fn rps_margin(s: &SubspaceSystem, m: usize, tol: &Tolerances) -> Result<MarginReport> {
    let n = s.len();
    if m == 0 || m > n {
        return Err(Error::IndexOutOfRange { index: m, len: n });
    }
    let z = null_space(&s.concatenation(), tol)?;
    let early: usize = s.members()[..m].iter().map(Subspace::dim).sum();
    let total = s.total_rank();
    let mut r = MarginReport::new();
    r.value("constraint_dim", z.cols() as f64);
    let mut eps = f64::INFINITY;
    if z.cols() > 0 {
        let late: Vec<usize> = (early..total).collect();
        let l = z.select_rows(&late);
        let spec = eig_hermitian(&l.adjoint_mul(&l), tol)?;
        // directions with t = 1 have no early part and do not constrain
        if let Some(&t) = spec.eigenvalues.iter().find(|&&t| t < 1.0 - tol.rank_tol) {
            let t = t.max(0.0);
            eps = (t / (1.0 - t)).sqrt();
        }
    }
    if eps.is_finite() {
        r.push("rps_epsilon", eps, tol);
        r.value("rps_epsilon_squared", eps * eps);
    } else {
        r.push_vacuous("rps_epsilon");
    }
    let prefix = independence_certificate(&s.subsystem(&(0..m).collect::<Vec<_>>())?, tol)?;
    r.push("prefix_independence", prefix.epsilon, tol);
    r.flag("member", eps > tol.margin_tol && prefix.independent);
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct PairReduction {
    pub m2: Subspace,
    pub delta: f64,
    /// Entries `sum_closed`, `dominance`, `lower_bound`.
    pub report: MarginReport,
}

/// Shrinks `H₂` to `M₂ ⊆ H₂` so that `H₁ + M₂` is closed, with
/// `3(P_{H₁}+P_{M₂}) + εI ≥ P_{H₁}+P_{H₂}` and
/// `P_{H₁}+P_{M₂} ≥ (ε/4) P_{H₁+M₂}`.
///
/// In the canonical form of `(H₂, H₁)`, `M₂` is `H₂∩H₁⊥` plus the first copy
/// of `E([0, δ))K`, `δ = 1 − ε/2`.
pub fn reduce_pair(h1: &Subspace, h2: &Subspace, eps: f64, tol: &Tolerances) -> Result<PairReduction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("reduction parameter must lie in (0, 1)".into()));
    }
    let dec = halmos_decompose(h2, h1, tol)?;
    let a = dec.a_matrix();
    let mut delta = 1.0 - eps / 2.0;
    // a ≥ 0, so E([0, δ)) = E((−∞, δ))
    let q = match spectral_projector(&a, f64::NEG_INFINITY..delta, tol) {
        Ok(q) => q,
        Err(Error::EigenvalueOnBoundary { .. }) => {
            delta += 10.0 * tol.eig_tol;
            spectral_projector(&a, f64::NEG_INFINITY..delta, tol)?
        }
        Err(e) => return Err(e),
    };
    let keep: Vec<usize> = (0..dec.generic_dim()).filter(|&j| q[(j, j)].re > 0.5).collect();
    let kept = dec.generic_first.select_columns(&keep);
    let basis = CMatrix::hstack(h2.ambient_dim(), &[dec.first_only.basis(), &kept]);
    let m2 = Subspace::from_orthonormal(basis);
    let report = pair_lemma_report(h1, h2, &m2, eps, tol)?;
    Ok(PairReduction { m2, delta, report })
}

fn pair_lemma_report(h1: &Subspace, h2: &Subspace, m2: &Subspace, eps: f64, tol: &Tolerances) -> Result<MarginReport> {
    let d = h1.ambient_dim();
    let mut r = MarginReport::new();
    let pair = SubspaceSystem::new(vec![h1.clone(), m2.clone()])?;
    match sum_gap_values(&pair, tol)?.gap {
        Some(g) => r.push("sum_closed", g, tol),
        None => r.push_vacuous("sum_closed"),
    }
    let p1 = h1.projector();
    let pm = m2.projector();
    let both = &p1 + &pm;
    let dom = &(&both.scale_real(3.0).add_identity(eps) - &p1) - &h2.projector();
    r.push("dominance", eig_hermitian(&dom, tol)?.eigenvalues.first().copied().unwrap_or(eps), tol);
    let s = pair.sum_span(tol)?;
    if s.is_zero() {
        r.push_vacuous("lower_bound");
    } else {
        let comp = s.basis().adjoint_mul(&both.matmul(s.basis())).add_identity(-eps / 4.0);
        r.push("lower_bound", eig_hermitian(&comp.hermitian_part(), tol)?.eigenvalues[0], tol);
    }
    r.value("epsilon", eps);
    r.value("delta", 1.0 - eps / 2.0);
    r.value("ambient_dim", d as f64);
    Ok(r)
}

/// Exact positive rational.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: u128,
    pub den: u128,
}

impl Rational {
    pub fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn checked_div_int(self, k: u128) -> Option<Self> {
        Some(Self::new(self.num, self.den.checked_mul(k)?))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `c₂ = 1/2`, `cₙ = c_{n−1} / (16·24^{n−2})`; `c₁ = 1` by convention.
/// `None` once the denominator overflows `u128`.
pub fn theorem_constant(n: usize) -> Option<Rational> {
    let mut c = Rational::new(1, 1);
    if n <= 1 {
        return Some(c);
    }
    c = Rational::new(1, 2);
    for k in 3..=n {
        let f = 24u128.checked_pow(u32::try_from(k - 2).ok()?)?.checked_mul(16)?;
        c = c.checked_div_int(f)?;
    }
    Some(c)
}

fn theorem_constant_f64(n: usize) -> f64 {
    let mut c = if n <= 1 { 1.0 } else { 0.5 };
    for k in 3..=n {
        c /= 16.0 * 24f64.powi((k - 2) as i32);
    }
    c
}

#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    /// Gap used by the recursion (capped at 1).
    pub epsilon: f64,
    /// Weights of `P_{M₂}, …, P_{Mₙ}` produced by the recursion.
    pub weights: Vec<f64>,
    pub c_n: Option<Rational>,
    pub c_n_value: f64,
    /// Lower bound produced by the recursion.
    pub bound: f64,
    /// `λ_min(P_{H₁} + Σ wₖ P_{Mₖ}) − bound` on the sum.
    pub slack: f64,
    /// Same with weights `ε^{k−2}` and bound `cₙ ε^{n−1}`.
    pub statement_slack: f64,
    pub numerically_vacuous: bool,
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// `(H₁, M₂, …, Mₙ)`.
    pub reduced: SubspaceSystem,
    pub certificate: ReductionCertificate,
    pub sum_preserved: bool,
    pub independence: IndependenceCertificate,
    pub report: MarginReport,
}

struct Recursion {
    ms: Vec<Subspace>,
    weights: Vec<f64>,
    bound: f64,
}

/// Recursion of the reduction theorem for a system whose projector sum is
/// `≥ eps·I` on the whole (coordinate) space.
fn recurse(members: &[Subspace], eps: f64, tol: &Tolerances) -> Result<Recursion> {
    match members.len() {
        0 => Err(Error::InvalidArgument("empty system".into())),
        1 => Ok(Recursion { ms: Vec::new(), weights: Vec::new(), bound: 1.0 }),
        2 => {
            let (h1, h2) = (&members[0], &members[1]);
            let m2 = h2.minus(&h1.intersect(h2, tol)?, tol)?;
            Ok(Recursion { ms: vec![m2], weights: vec![1.0], bound: eps / 2.0 })
        }
        _ => {
            let (h1, h2) = (&members[0], &members[1]);
            let h2p = h2.minus(&h1.intersect(h2, tol)?, tol)?;
            let m2 = reduce_pair(h1, &h2p, eps / 4.0, tol)?.m2;
            let h1p = sum_span(&[h1, &m2], tol)?;
            let mut rest = vec![h1p];
            rest.extend_from_slice(&members[2..]);
            let inner = recurse(&rest, eps / 24.0, tol)?;
            let mut ms = vec![m2];
            ms.extend(inner.ms);
            let mut weights = vec![1.0];
            weights.extend(inner.weights.iter().map(|w| w * eps / 16.0));
            Ok(Recursion { ms, weights, bound: inner.bound * eps / 16.0 })
        }
    }
}

fn min_eig_weighted(first: &Subspace, ms: &[Subspace], w: &[f64], shift: f64, tol: &Tolerances) -> Result<f64> {
    let mut x = first.projector();
    for (m, &wk) in ms.iter().zip(w) {
        x = &x + &m.projector().scale_real(wk);
    }
    Ok(eig_hermitian(&x.add_identity(-shift), tol)?.eigenvalues[0])
}

fn certificate(first: &Subspace, rec: &Recursion, n: usize, eps: f64, tol: &Tolerances) -> Result<ReductionCertificate> {
    let slack = min_eig_weighted(first, &rec.ms, &rec.weights, rec.bound, tol)?;
    let stmt_w: Vec<f64> = (0..rec.ms.len()).map(|i| eps.powi(i as i32)).collect();
    let c_n_value = theorem_constant_f64(n);
    let stmt_bound = c_n_value * eps.powi(n as i32 - 1);
    let statement_slack = min_eig_weighted(first, &rec.ms, &stmt_w, stmt_bound, tol)?;
    Ok(ReductionCertificate {
        epsilon: eps,
        weights: rec.weights.clone(),
        c_n: theorem_constant(n),
        c_n_value,
        bound: rec.bound,
        slack,
        statement_slack,
        numerically_vacuous: rec.bound <= tol.margin_tol,
    })
}

fn finish(original: &SubspaceSystem, reduced: SubspaceSystem, cert: ReductionCertificate, tol: &Tolerances) -> Result<ReductionResult> {
    let before = original.sum_span(tol)?;
    let after = reduced.sum_span(tol)?;
    let sum_preserved = before.dim() == after.dim() && before.contains(&after, tol) && after.contains(&before, tol);
    let independence = independence_certificate(&reduced, tol)?;
    let mut report = MarginReport::new();
    report.push("certificate", cert.slack, tol);
    report.push("statement", cert.statement_slack, tol);
    report.push("independence", independence.epsilon, tol);
    let contain = original
        .members()
        .iter()
        .zip(reduced.members())
        .map(|(h, m)| h.projector_distance(&sum_span(&[h, m], tol).unwrap_or_else(|_| h.clone())))
        .fold(0.0, f64::max);
    report.value("containment_residual", contain);
    report.value("sum_projector_distance", before.projector_distance(&after));
    report.value("epsilon", cert.epsilon);
    report.value("bound", cert.bound);
    report.value("c_n", cert.c_n_value);
    report.flag("sum_preserved", sum_preserved);
    report.flag("numerically_vacuous", cert.numerically_vacuous);
    Ok(ReductionResult { reduced, certificate: cert, sum_preserved, independence, report })
}

/// Reduction theorem: `M₂ ⊆ H₂, …, Mₙ ⊆ Hₙ` with `H₁, M₂, …, Mₙ` independent
/// and `P_{H₁} + P_{M₂} + εP_{M₃} + … + ε^{n−2}P_{Mₙ} ≥ cₙ ε^{n−1} I` on the sum.
///
/// Works inside `ΣHₖ`, with `ε = min(gap, 1)`.
pub fn reduce_system(s: &SubspaceSystem, tol: &Tolerances) -> Result<ReductionResult> {
    let gap = sum_gap_values(s, tol)?.gap.unwrap_or(0.0);
    if gap <= tol.margin_tol {
        return Err(Error::GapTooSmall { gap });
    }
    let w = s.sum_span(tol)?;
    let inner: Vec<Subspace> = s
        .members()
        .iter()
        .map(|h| w.restrict(h, tol))
        .collect::<Result<_>>()?;
    let eps = gap.min(1.0);
    let rec = recurse(&inner, eps, tol)?;
    let cert = certificate(&inner[0], &rec, s.len(), eps, tol)?;
    let mut members = vec![s.member(0).clone()];
    members.extend(rec.ms.iter().map(|m| w.lift(m)));
    finish(s, SubspaceSystem::new(members)?, cert, tol)
}

/// Sum-preserving reduction: `H₁ + M₂ + … + Mₙ = H₁ + … + Hₙ` with
/// `H₁, M₂, …, Mₙ` independent.
///
/// Runs the recursion in `C^{Σrₖ}` on `(Δ₀ + H̃₁, H̃₂, …, H̃ₙ)`, where `H̃ₖ` is
/// the k-th coordinate block and `Δ₀` the kernel of `(yₖ) ↦ Σ Bₖ yₖ`, then
/// maps each `M̃ₖ ⊆ H̃ₖ` back through `Bₖ`.
pub fn reduce_preserving_sum(s: &SubspaceSystem, tol: &Tolerances) -> Result<ReductionResult> {
    let n = s.len();
    let total = s.total_rank();
    let mut offs = vec![0usize; n + 1];
    for (k, h) in s.members().iter().enumerate() {
        offs[k + 1] = offs[k] + h.dim();
    }
    if total == 0 || n == 1 {
        let cert = ReductionCertificate {
            epsilon: 1.0,
            weights: vec![1.0; n.saturating_sub(1)],
            c_n: theorem_constant(n),
            c_n_value: theorem_constant_f64(n),
            bound: 0.0,
            slack: 0.0,
            statement_slack: 0.0,
            numerically_vacuous: true,
        };
        return finish(s, s.clone(), cert, tol);
    }
    let delta0 = Subspace::from_orthonormal(null_space(&s.concatenation(), tol)?);
    let block = |k: usize| Subspace::coordinate(total, &(offs[k]..offs[k + 1]).collect::<Vec<_>>());
    let mut dil = vec![sum_span(&[&delta0, &block(0)], tol)?];
    dil.extend((1..n).map(block));
    let dsys = SubspaceSystem::new(dil.clone())?;
    let gap = sum_gap_values(&dsys, tol)?.gap.unwrap_or(0.0);
    let eps = gap.min(1.0);
    let rec = recurse(&dil, eps, tol)?;
    let cert = certificate(&dil[0], &rec, n, eps, tol)?;
    let mut members = vec![s.member(0).clone()];
    for (k, mt) in rec.ms.iter().enumerate() {
        let h = s.member(k + 1);
        let rows: Vec<usize> = (offs[k + 1]..offs[k + 2]).collect();
        let coords = mt.basis().select_rows(&rows);
        members.push(Subspace::from_spanning(&h.basis().matmul(&coords), tol)?);
    }
    finish(s, SubspaceSystem::new(members)?, cert, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;
    use crate::sample::simplex_lines;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(x: f64, y: f64) -> Subspace {
        Subspace::from_spanning(&CMatrix::from_real(2, 1, &[x, y]), &tol()).unwrap()
    }

    #[test]
    fn certificate_examples() {
        let orth = SubspaceSystem::new(vec![line(1.0, 0.0), line(0.0, 1.0)]).unwrap();
        assert!((independence_certificate(&orth, &tol()).unwrap().epsilon - 1.0).abs() < 1e-14);
        let c = independence_certificate(&simplex_lines(3), &tol()).unwrap();
        assert_eq!(c.epsilon, 0.0);
        assert!(!c.independent);
        let l45 = SubspaceSystem::new(vec![line(1.0, 0.0), line(1.0, 1.0)]).unwrap();
        let c = independence_certificate(&l45, &tol()).unwrap();
        assert!((c.epsilon - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn oblique_projections_for_skew_lines() {
        let s = SubspaceSystem::new(vec![line(1.0, 0.0), line(1.0, 1.0)]).unwrap();
        let q = oblique_projections(&s, &tol()).unwrap();
        let q2 = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        assert!((&q[1] - &q2).max_abs() < 1e-12);
        assert!((&(&q[0] + &q[1]) - &CMatrix::identity(2)).max_abs() < 1e-12);
        let (_, dist) = spectral_synthesis(&s, &q, &[c64(1.0, 0.0), c64(2.0, 0.0)]).unwrap();
        assert!(dist < 1e-12);
        assert!(matches!(oblique_projections(&simplex_lines(3), &tol()), Err(Error::NotIndependent { .. })));
    }

    #[test]
    fn rps_three_lines_in_plane() {
        let s = SubspaceSystem::new(vec![line(1.0, 0.0), line(0.0, 1.0), line(1.0, 1.0)]).unwrap();
        let r = rps_margin(&s, 2, &tol()).unwrap();
        assert!((r.margin("rps_epsilon").unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.get_flag("member"), Some(true));
        let r = rps_margin(&s, 3, &tol()).unwrap();
        assert_eq!(r.get_flag("member"), Some(false));
        assert!(matches!(rps_margin(&s, 4, &tol()), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn constants_chain() {
        assert_eq!(theorem_constant(2), Some(Rational::new(1, 2)));
        assert_eq!(theorem_constant(3), Some(Rational::new(1, 768)));
        assert_eq!(theorem_constant(4), Some(Rational::new(1, 768 * 16 * 576)));
    }

    #[test]
    fn pair_lemma_keeps_small_directions() {
        // H₂ = span(e₁, e₂) flat, H₁ tilted so that a = diag(0.6, 0.9)
        let (a1, a2) = (0.6f64, 0.9f64);
        let h2 = Subspace::coordinate(4, &[0, 1]);
        let v = CMatrix::from_real(
            4,
            2,
            &[a1.sqrt(), 0.0, 0.0, a2.sqrt(), (1.0 - a1).sqrt(), 0.0, 0.0, (1.0 - a2).sqrt()],
        );
        let h1 = Subspace::from_spanning(&v, &tol()).unwrap();
        let red = reduce_pair(&h1, &h2, 0.5, &tol()).unwrap();
        assert_eq!(red.delta, 0.75);
        assert_eq!(red.m2.dim(), 1);
        assert!(red.m2.projector_distance(&Subspace::coordinate(4, &[0])) < 1e-12);
        assert!(red.report.entries.iter().all(|m| m.value >= -1e-8));
    }

    #[test]
    fn pair_lemma_orthogonal_pair() {
        let (h1, h2) = (line(1.0, 0.0), line(0.0, 1.0));
        let red = reduce_pair(&h1, &h2, 0.5, &tol()).unwrap();
        assert!(red.m2.projector_distance(&h2) < 1e-14);
    }

    #[test]
    fn simplex_reduction_preserves_sum() {
        let s = simplex_lines(3);
        let r = reduce_preserving_sum(&s, &tol()).unwrap();
        assert!(r.sum_preserved);
        assert!(r.independence.independent);
        let dims: usize = r.reduced.members().iter().map(Subspace::dim).sum();
        assert_eq!(dims, 2);
    }
}
