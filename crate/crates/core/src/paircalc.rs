//! Function calculus for two projections.
//!
//! For continuous `f₁..f₄` on `[0,1]` the operator
//! `b = P₁f₁(P₁P₂P₁) + P₂f₂(P₂P₁P₂) + P₁P₂f₃(P₂P₁P₂) + P₂P₁f₄(P₁P₂P₁)`
//! is block diagonal in the canonical decomposition. On `K⊕K` each
//! eigenvalue `x` of `a` contributes the roots of `λ² − T(x)λ + D(x)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c64, CMatrix, Tolerances, C64};
use crate::pairs::{smallest_nonzero_singular, PairDecomposition};
use crate::report::MarginReport;

/// Complex-valued function on `[0, 1]`.
#[derive(Clone)]
pub enum ScalarFunction {
    /// Coefficients `c₀, c₁, …` of `c₀ + c₁x + …`.
    Polynomial(Vec<C64>),
    Callable(Arc<dyn Fn(f64) -> C64 + Send + Sync>),
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFunction::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            ScalarFunction::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl ScalarFunction {
    pub fn constant(c: f64) -> Self {
        ScalarFunction::Polynomial(vec![c64(c, 0.0)])
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn polynomial(coeffs: &[f64]) -> Self {
        ScalarFunction::Polynomial(coeffs.iter().map(|&c| c64(c, 0.0)).collect())
    }

    pub fn from_fn(f: impl Fn(f64) -> C64 + Send + Sync + 'static) -> Self {
        ScalarFunction::Callable(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> C64 {
        match self {
            ScalarFunction::Polynomial(c) => c.iter().rev().fold(C64::default(), |acc, &k| acc * x + k),
            ScalarFunction::Callable(f) => f(x),
        }
    }

    pub fn coefficients(&self) -> Option<&[C64]> {
        match self {
            ScalarFunction::Polynomial(c) => Some(c),
            ScalarFunction::Callable(_) => None,
        }
    }
}

fn poly_add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|&x| x * s).collect()
}

/// The quadruple `f₁, f₂, f₃, f₄`.
#[derive(Clone, Debug)]
pub struct FunctionQuad {
    pub f1: ScalarFunction,
    pub f2: ScalarFunction,
    pub f3: ScalarFunction,
    pub f4: ScalarFunction,
}

impl FunctionQuad {
    pub fn new(f1: ScalarFunction, f2: ScalarFunction, f3: ScalarFunction, f4: ScalarFunction) -> Self {
        Self { f1, f2, f3, f4 }
    }

    /// `f₁ = f₂ = 1`, `f₃ = f₄ = 0`, so `b = P₁ + P₂`.
    pub fn projector_sum() -> Self {
        Self::new(ScalarFunction::one(), ScalarFunction::one(), ScalarFunction::zero(), ScalarFunction::zero())
    }

    pub fn eval(&self, x: f64) -> [C64; 4] {
        [self.f1.eval(x), self.f2.eval(x), self.f3.eval(x), self.f4.eval(x)]
    }

    fn polynomials(&self) -> Option<[&[C64]; 4]> {
        Some([
            self.f1.coefficients()?,
            self.f2.coefficients()?,
            self.f3.coefficients()?,
            self.f4.coefficients()?,
        ])
    }

    /// Value of `b` on `H₁ ∩ H₂`.
    pub fn sum_at_one(&self) -> C64 {
        self.eval(1.0).iter().sum()
    }
}

/// `T`, `D`, `F` for a quadruple, polynomial when all four inputs are.
#[derive(Clone, Debug)]
pub struct CalculusProfile {
    pub t: ScalarFunction,
    pub d: ScalarFunction,
    pub f: ScalarFunction,
    /// Value of `T` when it is constant.
    pub c: Option<C64>,
}

impl CalculusProfile {
    pub fn new(q: &FunctionQuad, tol: &Tolerances) -> Self {
        let (t, d, f) = if let Some([p1, p2, p3, p4]) = q.polynomials() {
            let x = [C64::default(), c64(1.0, 0.0)];
            let one_minus_x = [c64(1.0, 0.0), c64(-1.0, 0.0)];
            let t = poly_add(&poly_add(p1, p2), &poly_mul(&x, &poly_add(p3, p4)));
            let f = poly_add(&poly_mul(p1, p2), &poly_scale(&poly_mul(&x, &poly_mul(p3, p4)), c64(-1.0, 0.0)));
            let d = poly_mul(&one_minus_x, &f);
            (ScalarFunction::Polynomial(t), ScalarFunction::Polynomial(d), ScalarFunction::Polynomial(f))
        } else {
            let (qt, qd, qf) = (q.clone(), q.clone(), q.clone());
            (
                ScalarFunction::from_fn(move |x| {
                    let [a, b, c, d] = qt.eval(x);
                    a + b + (c + d) * x
                }),
                ScalarFunction::from_fn(move |x| {
                    let [a, b, c, d] = qd.eval(x);
                    (a * b - c * d * x) * (1.0 - x)
                }),
                ScalarFunction::from_fn(move |x| {
                    let [a, b, c, d] = qf.eval(x);
                    a * b - c * d * x
                }),
            )
        };
        let c = constant_value(&t, tol);
        Self { t, d, f, c }
    }
}

fn constant_value(t: &ScalarFunction, tol: &Tolerances) -> Option<C64> {
    match t {
        ScalarFunction::Polynomial(c) => {
            let c0 = c.first().copied().unwrap_or_default();
            c.iter().skip(1).all(|k| k.norm() <= tol.eig_tol).then_some(c0)
        }
        ScalarFunction::Callable(_) => {
            let c0 = t.eval(0.0);
            grid(1001).all(|x| (t.eval(x) - c0).norm() <= tol.eig_tol).then_some(c0)
        }
    }
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| i as f64 / (n - 1) as f64)
}

/// Dense matrix of `b`, assembled block by block in the canonical frame.
pub fn build_b(pair: &PairDecomposition, q: &FunctionQuad) -> CMatrix {
    let d = pair.ambient_dim();
    let [n11, n10, n01, n00, k] = pair.dims();
    let mut blk = CMatrix::zeros(d, d);
    let v11 = q.sum_at_one();
    let v10 = q.f1.eval(0.0);
    let v01 = q.f2.eval(0.0);
    let mut o = 0;
    for _ in 0..n11 {
        blk[(o, o)] = v11;
        o += 1;
    }
    for _ in 0..n10 {
        blk[(o, o)] = v10;
        o += 1;
    }
    for _ in 0..n01 {
        blk[(o, o)] = v01;
        o += 1;
    }
    o += n00;
    for (j, &x) in pair.a.iter().enumerate() {
        let [f1, f2, f3, f4] = q.eval(x);
        let s = (x * (1.0 - x)).sqrt();
        let (p, r) = (o + j, o + k + j);
        blk[(p, p)] = f1 + (f2 + f3 + f4) * x;
        blk[(p, r)] = (f2 + f3) * s;
        blk[(r, p)] = (f2 + f4) * s;
        blk[(r, r)] = f2 * (1.0 - x);
    }
    let frame = pair.frame();
    frame.matmul(&blk).matmul(&frame.adjoint())
}

/// `σ(b)` with multiplicity, from the component values and the quadratic
/// `λ² − T(x)λ + D(x)` over `x ∈ σ(a)`.
pub fn spectrum_of_b(pair: &PairDecomposition, q: &FunctionQuad) -> Vec<C64> {
    let [n11, n10, n01, n00, _] = pair.dims();
    let mut out = Vec::with_capacity(pair.ambient_dim());
    out.extend(core::iter::repeat_n(q.sum_at_one(), n11));
    out.extend(core::iter::repeat_n(q.f1.eval(0.0), n10));
    out.extend(core::iter::repeat_n(q.f2.eval(0.0), n01));
    out.extend(core::iter::repeat_n(C64::default(), n00));
    for &x in &pair.a {
        let [f1, f2, f3, f4] = q.eval(x);
        let t = f1 + f2 + (f3 + f4) * x;
        let dd = (f1 * f2 - f3 * f4 * x) * (1.0 - x);
        let (l1, l2) = quadratic_roots(t, dd);
        out.push(l1);
        out.push(l2);
    }
    out
}

/// Roots of `λ² − tλ + d`, avoiding cancellation.
fn quadratic_roots(t: C64, d: C64) -> (C64, C64) {
    let mut sq = (t * t - d * 4.0).sqrt();
    if (t.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let l1 = (t + sq) * 0.5;
    if l1.norm() == 0.0 {
        return (l1, (t - sq) * 0.5);
    }
    (l1, d / l1)
}

/// Checks `F ≠ 0` on a 1001-point grid of `[0, 1)` and on `σ(a)`, then reports
///
/// - `punctured_disk`: `min{|λ| : λ ∈ σ(b), λ ≠ 0}`
/// - `invertibility`: `min |σ(b)|`
/// - `sum_at_one`: `|f₁(1)+f₂(1)+f₃(1)+f₄(1)|`, the extra hypothesis for invertibility
/// - `closed_range`: smallest nonzero singular value of `b`
pub fn calculus_criteria(pair: &PairDecomposition, q: &FunctionQuad, tol: &Tolerances) -> Result<MarginReport> {
    let profile = CalculusProfile::new(q, tol);
    let points = grid(1001).filter(|&x| x < 1.0).chain(pair.a.iter().copied());
    for x in points {
        if profile.f.eval(x).norm() <= tol.margin_tol {
            return Err(Error::HypothesisViolated { at: x });
        }
    }
    let spec = spectrum_of_b(pair, q);
    let scale = spec.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let zero = tol.rank_tol * scale;
    let mut r = MarginReport::new();
    let punctured = spec.iter().map(|z| z.norm()).filter(|&m| m > zero).fold(f64::INFINITY, f64::min);
    if punctured.is_finite() {
        r.push("punctured_disk", punctured, tol);
    } else {
        r.push_vacuous("punctured_disk");
    }
    let inv = spec.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if inv.is_finite() {
        r.push("invertibility", inv, tol);
    } else {
        r.push_vacuous("invertibility");
    }
    r.push("sum_at_one", q.sum_at_one().norm(), tol);
    match smallest_nonzero_singular(&build_b(pair, q), tol)? {
        Some(s) => r.push("closed_range", s, tol),
        None => r.push_vacuous("closed_range"),
    }
    if let Some(c) = profile.c {
        r.value("trace_constant_re", c.re);
        r.value("trace_constant_im", c.im);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigenvalues, multiset_distance};
    use crate::pairs::halmos_decompose;
    use crate::subspace::Subspace;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(x: f64, y: f64) -> Subspace {
        Subspace::from_spanning(&CMatrix::from_real(2, 1, &[x, y]), &tol()).unwrap()
    }

    #[test]
    fn projector_sum_at_45_degrees() {
        let (h1, h2) = (line(1.0, 0.0), line(1.0, 1.0));
        let pair = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let q = FunctionQuad::projector_sum();
        let b = build_b(&pair, &q);
        assert!((&b - &(&h1.projector() + &h2.projector())).max_abs() < 1e-14);
        let spec = spectrum_of_b(&pair, &q);
        let expect = [c64(1.0 + FRAC_1_SQRT_2, 0.0), c64(1.0 - FRAC_1_SQRT_2, 0.0)];
        assert!(multiset_distance(&spec, &expect) < 1e-14);
        let r = calculus_criteria(&pair, &q, &tol()).unwrap();
        assert!((r.margin("punctured_disk").unwrap() - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-14);
    }

    #[test]
    fn product_is_third_slot() {
        let (h1, h2) = (line(1.0, 0.0), line(1.0, 2.0));
        let pair = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let z = ScalarFunction::zero;
        let q = FunctionQuad::new(z(), z(), ScalarFunction::one(), z());
        let b = build_b(&pair, &q);
        let direct = h1.projector().matmul(&h2.projector());
        assert!((&b - &direct).max_abs() < 1e-14);
        let ev = eigenvalues(&direct).unwrap();
        assert!(multiset_distance(&ev, &spectrum_of_b(&pair, &q)) < 1e-12);
    }

    #[test]
    fn identical_lines_see_sum_at_one() {
        let h = line(1.0, 0.0);
        let pair = halmos_decompose(&h, &h, &tol()).unwrap();
        let spec = spectrum_of_b(&pair, &FunctionQuad::projector_sum());
        assert!(spec.iter().any(|z| (*z - c64(2.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn profile_polynomials_match_pointwise() {
        let q = FunctionQuad::new(
            ScalarFunction::polynomial(&[1.0, 2.0]),
            ScalarFunction::polynomial(&[0.5]),
            ScalarFunction::polynomial(&[0.0, 0.0, 1.0]),
            ScalarFunction::from_fn(|x| c64(x, -x)),
        );
        let callable = CalculusProfile::new(&q, &tol());
        let q2 = FunctionQuad { f4: ScalarFunction::Polynomial(vec![c64(0.0, 0.0), c64(1.0, -1.0)]), ..q };
        let poly = CalculusProfile::new(&q2, &tol());
        for x in grid(11) {
            assert!((callable.t.eval(x) - poly.t.eval(x)).norm() < 1e-14);
            assert!((callable.d.eval(x) - poly.d.eval(x)).norm() < 1e-14);
            assert!((callable.f.eval(x) - poly.f.eval(x)).norm() < 1e-14);
        }
        assert!(poly.c.is_none());
        let consts = CalculusProfile::new(&FunctionQuad::projector_sum(), &tol());
        assert_eq!(consts.c, Some(c64(2.0, 0.0)));
    }
}
