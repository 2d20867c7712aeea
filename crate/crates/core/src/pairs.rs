//! Canonical decomposition of a pair of subspaces and the pair criteria.
//!
//! For subspaces `H₁, H₂` the space splits as
//! `(H₁∩H₂) ⊕ (H₁∩H₂⊥) ⊕ (H₁⊥∩H₂) ⊕ (H₁⊥∩H₂⊥) ⊕ (K⊕K)`, and on `K⊕K`
//!
//! ```text
//! P₁ = [ I  0 ]      P₂ = [ a           √(a(I−a)) ]
//!      [ 0  0 ]           [ √(a(I−a))   I − a     ]
//! ```
//!
//! with `0 < a < I`. The sum `H₁ + H₂` is closed iff `1 ∉ σ(a)`; in finite
//! dimensions that always holds, and the margins below measure how far.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c64, eig_hermitian, eigenvalues, norm2, svd, CMatrix, Tolerances};
use crate::report::MarginReport;
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct PairDecomposition {
    /// `H₁ ∩ H₂`
    pub both: Subspace,
    /// `H₁ ∩ H₂⊥`
    pub first_only: Subspace,
    /// `H₁⊥ ∩ H₂`
    pub second_only: Subspace,
    /// `H₁⊥ ∩ H₂⊥`
    pub neither: Subspace,
    /// Copy of `K` inside `H₁` (`d×k`, orthonormal columns).
    pub generic_first: CMatrix,
    /// Copy of `K` inside `H₁⊥` (`d×k`).
    pub generic_second: CMatrix,
    /// Eigenvalues of `a`, ascending; `a` is diagonal in the chosen `K`-basis.
    pub a: Vec<f64>,
}

impl PairDecomposition {
    pub fn ambient_dim(&self) -> usize {
        self.both.ambient_dim()
    }

    pub fn generic_dim(&self) -> usize {
        self.a.len()
    }

    pub fn a_matrix(&self) -> CMatrix {
        CMatrix::from_diag(&self.a)
    }

    /// Unitary `[both | first_only | second_only | neither | K₁ | K₂]`.
    pub fn frame(&self) -> CMatrix {
        CMatrix::hstack(
            self.ambient_dim(),
            &[
                self.both.basis(),
                self.first_only.basis(),
                self.second_only.basis(),
                self.neither.basis(),
                &self.generic_first,
                &self.generic_second,
            ],
        )
    }

    /// Component dimensions `(11, 10, 01, 00, k)`.
    pub fn dims(&self) -> [usize; 5] {
        [
            self.both.dim(),
            self.first_only.dim(),
            self.second_only.dim(),
            self.neither.dim(),
            self.generic_dim(),
        ]
    }

    /// `P₁` and `P₂` rebuilt from the block form.
    pub fn reconstruct(&self) -> (CMatrix, CMatrix) {
        let u = &self.generic_first;
        let v = &self.generic_second;
        let scaled = |m: &CMatrix, f: &dyn Fn(f64) -> f64| {
            CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * f(self.a[j]))
        };
        let both = self.both.projector();
        let p1 = &(&both + &self.first_only.projector()) + &u.gram_outer();
        let uu = scaled(u, &|x| x).matmul(&u.adjoint());
        let uv = scaled(u, &|x| (x * (1.0 - x)).sqrt()).matmul(&v.adjoint());
        let vv = scaled(v, &|x| 1.0 - x).matmul(&v.adjoint());
        let generic = &(&(&uu + &uv) + &uv.adjoint()) + &vv;
        let p2 = &(&both + &self.second_only.projector()) + &generic;
        (p1, p2)
    }
}

/// Canonical decomposition of `(H₁, H₂)`.
///
/// `a` comes from the compression `B₁* P₂ B₁`; its eigenvalues within
/// `rank_tol` of 0 or 1 are moved to `H₁∩H₂⊥` or `H₁∩H₂`.
pub fn halmos_decompose(h1: &Subspace, h2: &Subspace, tol: &Tolerances) -> Result<PairDecomposition> {
    let d = h1.ambient_dim();
    if h2.ambient_dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: h2.ambient_dim() });
    }
    let b1 = h1.basis();
    let b2 = h2.basis();
    let cross = b1.adjoint_mul(b2);
    let comp = cross.matmul(&cross.adjoint());
    let spec = eig_hermitian(&comp, tol)?;
    let coords = |keep: &dyn Fn(f64) -> bool| b1.matmul(&spec.vectors_where(keep));
    let lo = tol.rank_tol;
    let hi = 1.0 - tol.rank_tol;
    let first_only = Subspace::from_orthonormal(coords(&|x| x <= lo));
    let both = Subspace::from_orthonormal(coords(&|x| x >= hi));
    let u = coords(&|x| x > lo && x < hi);
    let a: Vec<f64> = spec.eigenvalues.iter().copied().filter(|&x| x > lo && x < hi).collect();

    // V = (I − P₁) P₂ U, column-normalized; its norms are √(x(1−x))
    let p2u = b2.matmul(&b2.adjoint_mul(&u));
    let mut v = &p2u - &b1.matmul(&b1.adjoint_mul(&p2u));
    for j in 0..v.cols() {
        let n = (0..d).map(|i| v[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..d {
            v[(i, j)] /= n;
        }
    }

    // remaining part of H₁⊥, split by the compression of P₂
    let c1 = h1.complement(tol)?;
    let (second_only, neither) = if c1.is_zero() {
        (Subspace::zero(d), Subspace::zero(d))
    } else {
        let vc = c1.basis().adjoint_mul(&v);
        let rest = Subspace::from_spanning(&vc, tol)?.complement(tol)?;
        let w = c1.basis().matmul(rest.basis());
        let ww = w.adjoint_mul(b2);
        let g = ww.matmul(&ww.adjoint());
        let gs = eig_hermitian(&g, tol)?;
        (
            Subspace::from_orthonormal(w.matmul(&gs.vectors_where(|x| x >= 0.5))),
            Subspace::from_orthonormal(w.matmul(&gs.vectors_where(|x| x < 0.5))),
        )
    };
    Ok(PairDecomposition { both, first_only, second_only, neither, generic_first: u, generic_second: v, a })
}

/// Margins of the equivalent closedness conditions for `H₁ + H₂`.
///
/// Entry ids:
/// - `c1_generic_gap`: `1 − max σ(a)` (1 when `K = 0`)
/// - `c2_product_spectrum_gap`: `1 − max(σ(P₁P₂) ∖ {1})`
/// - `c3_product_distance`: `1 − ‖P₁P₂ − P_{H₁∩H₂}‖`
/// - `c4_complement_generic_gap`: `c1` for the pair `(H₁⊥, H₂⊥)`
/// - `c5_defect_range`: smallest nonzero singular value of `(I − P₁)P₂`
/// - `c6_identity_minus_product`: smallest nonzero singular value of `I − P₁P₂`
pub fn pair_criteria(h1: &Subspace, h2: &Subspace, tol: &Tolerances) -> Result<MarginReport> {
    let dec = halmos_decompose(h1, h2, tol)?;
    let d = h1.ambient_dim();
    let p1 = h1.projector();
    let p2 = h2.projector();
    let p12 = p1.matmul(&p2);
    let mut r = MarginReport::new();

    r.push("c1_generic_gap", generic_gap(&dec), tol);

    let ev = eigenvalues(&p12)?;
    let top = ev
        .iter()
        .filter(|z| (*z - c64(1.0, 0.0)).norm() > tol.rank_tol)
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    r.push("c2_product_spectrum_gap", if top.is_finite() { 1.0 - top.max(0.0) } else { 1.0 }, tol);

    r.push("c3_product_distance", 1.0 - norm2(&(&p12 - &dec.both.projector())), tol);

    let comp = halmos_decompose(&h1.complement(tol)?, &h2.complement(tol)?, tol)?;
    r.push("c4_complement_generic_gap", generic_gap(&comp), tol);

    let defect = &p2 - &p1.matmul(&p2);
    push_smallest_nonzero(&mut r, "c5_defect_range", &defect, tol)?;
    let id_minus = &CMatrix::identity(d) - &p12;
    push_smallest_nonzero(&mut r, "c6_identity_minus_product", &id_minus, tol)?;
    Ok(r)
}

fn generic_gap(dec: &PairDecomposition) -> f64 {
    dec.a.last().map(|&x| 1.0 - x).unwrap_or(1.0)
}

/// Smallest singular value above the rank cutoff; vacuous for the zero operator.
pub(crate) fn smallest_nonzero_singular(m: &CMatrix, tol: &Tolerances) -> Result<Option<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(None);
    }
    let s = svd(m, tol)?;
    let r = s.rank(tol);
    Ok(if r == 0 { None } else { Some(s.sigma[r - 1]) })
}

fn push_smallest_nonzero(r: &mut MarginReport, id: &str, m: &CMatrix, tol: &Tolerances) -> Result<()> {
    match smallest_nonzero_singular(m, tol)? {
        Some(s) => r.push(id, s, tol),
        None => r.push_vacuous(id),
    }
    Ok(())
}

/// Friedrichs angle: `arccos √‖a‖`, and `π/2` when `K = 0`.
pub fn friedrichs_angle(h1: &Subspace, h2: &Subspace, tol: &Tolerances) -> Result<f64> {
    let dec = halmos_decompose(h1, h2, tol)?;
    Ok(match dec.a.last() {
        Some(&x) => x.sqrt().clamp(0.0, 1.0).acos(),
        None => core::f64::consts::FRAC_PI_2,
    })
}

/// Constants of linear independence for a pair.
///
/// - value `product_norm`: `‖P₁P₂‖`
/// - `independent_closed`: `1 − ‖P₁P₂‖`; the flag of the same name is
///   `‖P₁P₂‖ < 1 − margin_tol`
/// - `gram_epsilon`: best `ε` in `‖x+y‖² ≥ ε(‖x‖²+‖y‖²)`
/// - `defect_epsilon`: best `ε` in `‖(I−P₁)x‖ ≥ ε‖x‖`, `x ∈ H₂`
pub fn independent_pair_constants(h1: &Subspace, h2: &Subspace, tol: &Tolerances) -> Result<MarginReport> {
    let d = h1.ambient_dim();
    if h2.ambient_dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: h2.ambient_dim() });
    }
    let mut r = MarginReport::new();
    let pn = norm2(&h1.projector().matmul(&h2.projector()));
    r.value("product_norm", pn);
    r.push("independent_closed", 1.0 - pn, tol);
    r.flag("independent_closed", pn < 1.0 - tol.margin_tol);

    let (r1, r2) = (h1.dim(), h2.dim());
    if r1 + r2 == 0 {
        r.push_vacuous("gram_epsilon");
    } else {
        let cross = h1.basis().adjoint_mul(h2.basis());
        let mut g = CMatrix::identity(r1 + r2);
        g.set_block(0, r1, &cross);
        g.set_block(r1, 0, &cross.adjoint());
        let s = eig_hermitian(&g, tol)?;
        r.push("gram_epsilon", s.eigenvalues[0], tol);
    }

    if r2 == 0 {
        r.push_vacuous("defect_epsilon");
    } else {
        let b2 = h2.basis();
        let m = b2 - &h1.basis().matmul(&h1.basis().adjoint_mul(b2));
        let s = svd(&m, tol)?;
        r.push("defect_epsilon", *s.sigma.last().unwrap_or(&0.0), tol);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(x: f64, y: f64) -> Subspace {
        Subspace::from_spanning(&CMatrix::from_real(2, 1, &[x, y]), &tol()).unwrap()
    }

    #[test]
    fn identical_lines() {
        let e1 = line(1.0, 0.0);
        let dec = halmos_decompose(&e1, &e1, &tol()).unwrap();
        assert_eq!(dec.dims(), [1, 0, 0, 1, 0]);
        let r = pair_criteria(&e1, &e1, &tol()).unwrap();
        assert!((r.margin("c3_product_distance").unwrap() - 1.0).abs() < 1e-12);
        let c = independent_pair_constants(&e1, &e1, &tol()).unwrap();
        assert_eq!(c.get_flag("independent_closed"), Some(false));
    }

    #[test]
    fn orthogonal_lines() {
        let (e1, e2) = (line(1.0, 0.0), line(0.0, 1.0));
        let dec = halmos_decompose(&e1, &e2, &tol()).unwrap();
        assert_eq!(dec.dims(), [0, 1, 1, 0, 0]);
        let r = pair_criteria(&e1, &e2, &tol()).unwrap();
        assert!((r.margin("c3_product_distance").unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(friedrichs_angle(&e1, &e2, &tol()).unwrap(), FRAC_PI_2);
        let c = independent_pair_constants(&e1, &e2, &tol()).unwrap();
        assert!(c.get_value("product_norm").unwrap() < 1e-15);
        assert!((c.margin("gram_epsilon").unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lines_at_45_degrees() {
        let (e1, diag) = (line(1.0, 0.0), line(1.0, 1.0));
        let dec = halmos_decompose(&e1, &diag, &tol()).unwrap();
        assert_eq!(dec.dims(), [0, 0, 0, 0, 1]);
        assert!((dec.a[0] - 0.5).abs() < 1e-14);
        let r = pair_criteria(&e1, &diag, &tol()).unwrap();
        assert!((r.margin("c3_product_distance").unwrap() - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!((friedrichs_angle(&e1, &diag, &tol()).unwrap() - FRAC_PI_4).abs() < 1e-12);
        let c = independent_pair_constants(&e1, &diag, &tol()).unwrap();
        assert!((c.margin("gram_epsilon").unwrap() - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        let (p1, p2) = dec.reconstruct();
        assert!((&p1 - &e1.projector()).max_abs() < 1e-14);
        assert!((&p2 - &diag.projector()).max_abs() < 1e-14);
    }

    #[test]
    fn containment_gives_right_angle() {
        let e1 = Subspace::coordinate(3, &[0]);
        let plane = Subspace::coordinate(3, &[0, 1]);
        assert_eq!(friedrichs_angle(&e1, &plane, &tol()).unwrap(), FRAC_PI_2);
    }
}
