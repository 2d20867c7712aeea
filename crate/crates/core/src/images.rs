//! Ranges of operators: Douglas factorization, sums of images, product
//! bounds, p-radius, the 𝓜 identity and quadratic projector criteria.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c64, eig_hermitian, norm2, null_space, pinv, svd, CMatrix, Tolerances, C64};
use crate::pairs::smallest_nonzero_singular;
use crate::reduction::independence_certificate;
use crate::report::MarginReport;
use crate::subspace::{Subspace, SubspaceSystem};
use crate::systems::is_connected_edges;

/// Default cap on matrix multiplications for [`p_radius`].
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Nonnegative,
    General,
}

impl OperatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorKind::Nonnegative => "nonnegative",
            OperatorKind::General => "general",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFamily {
    ambient_dim: usize,
    members: Vec<CMatrix>,
    kinds: Vec<OperatorKind>,
}

impl OperatorFamily {
    /// Nonnegative members must be Hermitian with `min eig ≥ −eig_tol`.
    pub fn new(members: Vec<CMatrix>, kinds: Vec<OperatorKind>, tol: &Tolerances) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("operator family must be nonempty".into()));
        }
        if kinds.len() != members.len() {
            return Err(Error::DimensionMismatch { expected: members.len(), found: kinds.len() });
        }
        let d = members[0].rows();
        for (k, m) in members.iter().enumerate() {
            if !m.is_square() {
                return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
            }
            if m.rows() != d {
                return Err(Error::DimensionMismatch { expected: d, found: m.rows() });
            }
            if kinds[k] == OperatorKind::Nonnegative {
                let min = eig_hermitian(m, tol)?.min().unwrap_or(0.0);
                if min < -tol.eig_tol {
                    return Err(Error::InvalidArgument(format!(
                        "member {} is not nonnegative (min eigenvalue {min:e})",
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { ambient_dim: d, members, kinds })
    }

    pub fn nonnegative(members: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let kinds = vec![OperatorKind::Nonnegative; members.len()];
        Self::new(members, kinds, tol)
    }

    pub fn general(members: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let kinds = vec![OperatorKind::General; members.len()];
        Self::new(members, kinds, tol)
    }

    /// Orthogonal projectors of a subspace system.
    pub fn projectors(s: &SubspaceSystem, tol: &Tolerances) -> Result<Self> {
        Self::nonnegative(s.projectors(), tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[CMatrix] {
        &self.members
    }

    pub fn kinds(&self) -> &[OperatorKind] {
        &self.kinds
    }

    pub fn all_nonnegative(&self) -> bool {
        self.kinds.iter().all(|&k| k == OperatorKind::Nonnegative)
    }

    pub fn max_norm(&self) -> f64 {
        self.members.iter().map(norm2).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct DouglasFactor {
    /// `C = B⁺A`, so `A = BC`.
    pub c: CMatrix,
    /// Smallest `λ` with `AA* ≤ λBB*`.
    pub lambda: f64,
    pub residual: f64,
    /// Projector distance between `ker C` and `ker A`.
    pub kernel_distance: f64,
    /// `‖P_{ker B} C‖`.
    pub image_residual: f64,
    /// `‖(I − P_{Im B})A‖`.
    pub inclusion_residual: f64,
}

/// Douglas factorization `A = BC` with `ker C = ker A`, `Im C ⊆ (ker B)⊥`.
pub fn douglas_factor(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<DouglasFactor> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch { expected: b.rows(), found: a.rows() });
    }
    let sb = svd(b, tol)?;
    let r = sb.rank(tol);
    let ub = sb.u.select_columns(&(0..r).collect::<Vec<_>>());
    let outside = &a.clone() - &ub.matmul(&ub.adjoint_mul(a));
    let inclusion_residual = norm2(&outside);
    if inclusion_residual > tol.margin_tol * norm2(a).max(1.0) {
        return Err(Error::RangeNotIncluded { residual: inclusion_residual });
    }
    let c = pinv(b, tol)?.matmul(a);
    let residual = norm2(&(&a.clone() - &b.matmul(&c)));
    let lambda = norm2(&c).powi(2);
    let ker = |m: &CMatrix| null_space(m, tol).map(Subspace::from_orthonormal);
    let kernel_distance = ker(&c)?.projector_distance(&ker(a)?);
    let image_residual = norm2(&ker(b)?.projector().matmul(&c));
    Ok(DouglasFactor { c, lambda, residual, kernel_distance, image_residual, inclusion_residual })
}

/// `ΣIm(aₖ) = Im(√(Σaₖaₖ*))`.
///
/// Value `range_distance` compares the image of the square root with the
/// column space of `[a₁ … aₙ]`; for nonnegative families entry `sum_gap` is
/// the smallest nonzero point of `σ(Σaₖ)`.
pub fn sum_of_images(f: &OperatorFamily, tol: &Tolerances) -> Result<(Subspace, MarginReport)> {
    let d = f.ambient_dim();
    let mut g = CMatrix::zeros(d, d);
    for a in f.members() {
        g = &g + &a.gram_outer();
    }
    let spec = eig_hermitian(&g, tol)?;
    let top = spec.max().unwrap_or(0.0).max(0.0);
    let root = spec.apply(|x| c64(x.max(0.0).sqrt(), 0.0));
    // Im √G = eigenvectors of G with nonzero eigenvalue
    let image = Subspace::from_orthonormal(spec.vectors_where(|x| x > tol.rank_tol * top.max(1.0)));
    let refs: Vec<&CMatrix> = f.members().iter().collect();
    let span = Subspace::from_spanning(&CMatrix::hstack(d, &refs), tol)?;
    let mut r = MarginReport::new();
    r.value("range_distance", image.projector_distance(&span));
    r.value("root_norm", norm2(&root));
    r.value("image_dim", image.dim() as f64);
    r.flag("full", image.dim() == d);
    if f.all_nonnegative() {
        let mut sum = CMatrix::zeros(d, d);
        for a in f.members() {
            sum = &sum + a;
        }
        let ev = eig_hermitian(&sum.hermitian_part(), tol)?.eigenvalues;
        let scale = ev.last().copied().unwrap_or(0.0).max(1.0);
        match ev.iter().find(|&&x| x > tol.rank_tol * scale) {
            Some(&x) => r.push("sum_gap", x, tol),
            None => r.push_vacuous("sum_gap"),
        }
    }
    Ok((image, r))
}

/// `(2 + ω²n(n−1)) / (2 − ω)`.
pub fn product_bound_constant(omega: f64, n: usize) -> f64 {
    let n = n as f64;
    (2.0 + omega * omega * n * (n - 1.0)) / (2.0 - omega)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductBound {
    pub omega: f64,
    pub constant: f64,
    /// `constant · (‖x‖² − ‖Ex‖²)`.
    pub lhs: f64,
    /// `Σ(Tₖx, x)`.
    pub rhs: f64,
    pub slack: f64,
}

/// `E = (I − Tₙ)…(I − T₁)`.
pub fn product_operator(f: &OperatorFamily) -> CMatrix {
    let d = f.ambient_dim();
    let mut e = CMatrix::identity(d);
    for t in f.members() {
        e = (&CMatrix::identity(d) - t).matmul(&e);
    }
    e
}

/// Evaluates `C(‖x‖² − ‖Ex‖²) ≥ Σ(Tₖx, x)` at `x` for nonnegative `Tₖ` with
/// `‖Tₖ‖ ≤ ω < 2`.
pub fn product_bound(f: &OperatorFamily, x: &[C64]) -> Result<ProductBound> {
    if !f.all_nonnegative() {
        return Err(Error::InvalidArgument("product bound needs nonnegative operators".into()));
    }
    if x.len() != f.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: f.ambient_dim(), found: x.len() });
    }
    let omega = f.max_norm();
    if omega >= 2.0 {
        return Err(Error::NormTooLarge { norm: omega });
    }
    let constant = product_bound_constant(omega, f.len());
    let sq = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let ex = product_operator(f).mul_vec(x);
    let lhs = constant * (sq(x) - sq(&ex));
    let rhs: f64 = f
        .members()
        .iter()
        .map(|t| t.mul_vec(x).iter().zip(x).map(|(tx, xi)| (xi.conj() * tx).re).sum::<f64>())
        .sum();
    Ok(ProductBound { omega, constant, lhs, rhs, slack: lhs - rhs })
}

/// Eigenvectors of `E*E` at eigenvalue 1 (within `margin_tol`) and
/// `max ‖Tₖ x‖` over them.
pub fn product_fixed_space(f: &OperatorFamily, tol: &Tolerances) -> Result<(Subspace, f64)> {
    let e = product_operator(f);
    let spec = eig_hermitian(&e.adjoint_mul(&e).hermitian_part(), tol)?;
    let fixed = Subspace::from_orthonormal(spec.vectors_where(|x| (x - 1.0).abs() <= tol.margin_tol));
    let worst = if fixed.is_zero() {
        0.0
    } else {
        f.members().iter().map(|t| norm2(&t.matmul(fixed.basis()))).fold(0.0, f64::max)
    };
    Ok((fixed, worst))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PRadiusVerdict {
    /// Some `a_{k,p}^{1/k} < 1`, so `ΣIm Tₖ = H`.
    Certified,
    /// Stationary at 1 with a nonzero common kernel of the `Tₖ`.
    Deficient,
    Inconclusive,
}

impl PRadiusVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PRadiusVerdict::Certified => "certified",
            PRadiusVerdict::Deficient => "deficient",
            PRadiusVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PRadius {
    /// `a_{k,p}` for `k = 1..k_max`.
    pub a: Vec<f64>,
    /// `a_{k,p}^{1/k}`.
    pub roots: Vec<f64>,
    pub verdict: PRadiusVerdict,
    pub common_kernel_dim: usize,
    pub multiplications: u128,
}

/// Averaged `p`-norms of all length-`k` products of `Aᵢ = I − Tᵢ`,
/// `k = 1..k_max`, enumerated depth-first in lexicographic order.
pub fn p_radius(f: &OperatorFamily, p: f64, k_max: usize, budget: u128, tol: &Tolerances) -> Result<PRadius> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidArgument("p must be a finite real >= 1".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let n = f.len() as u128;
    let mut needed: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..k_max {
        level = level.checked_mul(n).ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
        needed = needed.saturating_add(level);
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let d = f.ambient_dim();
    let factors: Vec<CMatrix> = f.members().iter().map(|t| &CMatrix::identity(d) - t).collect();
    let mut sums = vec![0.0f64; k_max];
    let mut stack: Vec<(CMatrix, usize)> = Vec::new();
    for a in factors.iter().rev() {
        stack.push((a.clone(), 1));
    }
    while let Some((m, k)) = stack.pop() {
        sums[k - 1] += norm2(&m).powf(p);
        if k < k_max {
            for a in factors.iter().rev() {
                stack.push((a.matmul(&m), k + 1));
            }
        }
    }
    let mut a = Vec::with_capacity(k_max);
    let mut roots = Vec::with_capacity(k_max);
    for (k, s) in sums.iter().enumerate() {
        let count = (f.len() as f64).powi(k as i32 + 1);
        let ak = (s / count).powf(1.0 / p);
        a.push(ak);
        roots.push(ak.powf(1.0 / (k as f64 + 1.0)));
    }
    let stacked = CMatrix::vstack(d, &f.members().iter().collect::<Vec<_>>());
    let common_kernel_dim = null_space(&stacked, tol)?.cols();
    let verdict = if roots.iter().any(|&r| r < 1.0 - tol.margin_tol) {
        PRadiusVerdict::Certified
    } else if common_kernel_dim > 0 && roots.last().is_some_and(|&r| (r - 1.0).abs() <= tol.margin_tol) {
        PRadiusVerdict::Deficient
    } else {
        PRadiusVerdict::Inconclusive
    };
    Ok(PRadius { a, roots, verdict, common_kernel_dim, multiplications: needed })
}

/// `‖(Σaₖ²)^{1/2} − Σ_{i,j} aᵢ²(Σaₖ²)^{−3/2}aⱼ²‖`.
pub fn m_membership_identity(f: &OperatorFamily, tol: &Tolerances) -> Result<f64> {
    let d = f.ambient_dim();
    let squares: Vec<CMatrix> = f.members().iter().map(|a| a.matmul(a)).collect();
    let mut s = CMatrix::zeros(d, d);
    for q in &squares {
        s = &s + q;
    }
    let spec = eig_hermitian(&s.hermitian_part(), tol)?;
    let min_eig = spec.min().unwrap_or(0.0);
    if min_eig <= tol.margin_tol {
        return Err(Error::NotInvertible { min_eig });
    }
    let root = spec.apply(|x| c64(x.sqrt(), 0.0));
    let inv32 = spec.apply(|x| c64(x.powf(-1.5), 0.0));
    let mut rhs = CMatrix::zeros(d, d);
    for qi in &squares {
        let left = qi.matmul(&inv32);
        for qj in &squares {
            rhs = &rhs + &left.matmul(qj);
        }
    }
    Ok(norm2(&(&root - &rhs)))
}

/// Weighted connected graph data `ξ_{i,j}, ξ_{j,i}` for operators
/// `A = Σξᵢ Pᵢ − Σ_{i∼j} ξ_{i,j} PᵢPⱼ`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiGraph {
    n: usize,
    /// `(i, j, ξ_{i,j}, ξ_{j,i})`, 0-based.
    edges: Vec<(usize, usize, f64, f64)>,
}

impl XiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64, f64)>) -> Result<Self> {
        for &(i, j, a, b) in &edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidArgument(format!("bad edge ({}, {})", i + 1, j + 1)));
            }
            if (a + b).is_nan() || a + b <= 0.0 {
                return Err(Error::InvalidArgument(format!("edge ({}, {}) needs xi_ij + xi_ji > 0", i + 1, j + 1)));
            }
        }
        let plain: Vec<(usize, usize)> = edges.iter().map(|&(i, j, _, _)| (i, j)).collect();
        if !is_connected_edges(n, &plain) {
            return Err(Error::GraphDisconnected);
        }
        Ok(Self { n, edges })
    }

    /// Cycle `1 → 2 → … → n → 1` with `ξ_{i,i+1} = 1`, `ξ_{i+1,i} = 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("cycle needs at least three vertices".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0, 0.0)).collect())
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.0 == i || e.1 == i)
            .map(|e| 0.5 * (e.2 + e.3))
            .sum()
    }

    /// `α_{i,i} = ξᵢ`, `α_{i,j} = −ξ_{i,j}` on edges, 0 elsewhere.
    pub fn alpha(&self) -> CMatrix {
        let mut a = CMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            a[(i, i)] = c64(self.xi(i), 0.0);
        }
        for &(i, j, xij, xji) in &self.edges {
            a[(i, j)] -= c64(xij, 0.0);
            a[(j, i)] -= c64(xji, 0.0);
        }
        a
    }
}

pub fn cycle_alpha(n: usize) -> Result<CMatrix> {
    Ok(XiGraph::cycle(n)?.alpha())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaClass {
    PositiveDefinite,
    /// Nonnegative, simple eigenvalue 0, connected graph.
    KernelOne,
    /// Some eigenvalue lies between `rank_tol` and `margin_tol` in modulus.
    Borderline,
    Neither,
}

impl BetaClass {
    pub fn as_str(self) -> &'static str {
        match self {
            BetaClass::PositiveDefinite => "positive_definite",
            BetaClass::KernelOne => "kernel_one",
            BetaClass::Borderline => "borderline",
            BetaClass::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaMatrix {
    pub alpha: CMatrix,
    /// Real symmetric, row-major `n × n`.
    pub beta: Vec<f64>,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub connected: bool,
    pub eigenvalues: Vec<f64>,
    pub class: BetaClass,
    /// Positive kernel vector with unit norm, when the class is `KernelOne`.
    pub kernel: Option<Vec<f64>>,
}

impl BetaMatrix {
    pub fn new(alpha: &CMatrix, tol: &Tolerances) -> Result<Self> {
        if !alpha.is_square() {
            return Err(Error::NonSquare { rows: alpha.rows(), cols: alpha.cols() });
        }
        let n = alpha.rows();
        for i in 0..n {
            if alpha[(i, i)].re.is_nan() || alpha[(i, i)].re <= 0.0 {
                return Err(Error::DiagonalNotPositive { index: i + 1 });
            }
        }
        let mut beta = vec![0.0; n * n];
        let mut edges = Vec::new();
        for i in 0..n {
            beta[i * n + i] = alpha[(i, i)].re;
            for j in (i + 1)..n {
                let (aij, aji) = (alpha[(i, j)], alpha[(j, i)]);
                let v = -0.5 * (aij.re + aji.re).hypot(aij.im - aji.im);
                beta[i * n + j] = v;
                beta[j * n + i] = v;
                if v != 0.0 {
                    edges.push((i, j));
                }
            }
        }
        let connected = is_connected_edges(n, &edges);
        let bm = CMatrix::from_real(n, n, &beta);
        let spec = eig_hermitian(&bm, tol)?;
        let scale = spec.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let zero = tol.rank_tol * scale;
        let zeros = spec.eigenvalues.iter().filter(|x| x.abs() <= zero).count();
        let fuzzy = spec.eigenvalues.iter().filter(|x| x.abs() > zero && x.abs() <= tol.margin_tol).count();
        let min = spec.min().unwrap_or(0.0);
        let class = if min < -tol.margin_tol {
            BetaClass::Neither
        } else if fuzzy > 0 {
            BetaClass::Borderline
        } else if zeros == 0 {
            BetaClass::PositiveDefinite
        } else if zeros == 1 && connected {
            BetaClass::KernelOne
        } else {
            BetaClass::Neither
        };
        let kernel = (class == BetaClass::KernelOne).then(|| {
            let v = spec.eigenvectors.column(0);
            // kernel vector of a real symmetric matrix up to a phase
            let phase = v.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).copied().unwrap_or(c64(1.0, 0.0));
            let phase = phase / phase.norm();
            v.iter().map(|z| (z / phase).re).collect()
        });
        Ok(Self { alpha: alpha.clone(), beta, n, edges, connected, eigenvalues: spec.eigenvalues, class, kernel })
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.beta[i * self.n + j]
    }

    /// `‖s − (1,…,1)/√n‖` for the unit kernel vector `s`.
    pub fn kernel_deviation_from_ones(&self) -> Option<f64> {
        let s = self.kernel.as_ref()?;
        let u = 1.0 / (self.n as f64).sqrt();
        Some(s.iter().map(|x| (x - u).powi(2)).sum::<f64>().sqrt())
    }
}

/// `A = Σα_{i,j}PᵢPⱼ`.
pub fn quadratic_operator(s: &SubspaceSystem, alpha: &CMatrix) -> Result<CMatrix> {
    let n = s.len();
    if alpha.rows() != n || alpha.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: alpha.rows() });
    }
    let d = s.ambient_dim();
    let ps = s.projectors();
    let mut a = CMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            if alpha[(i, j)] != C64::default() {
                a = &a + &ps[i].matmul(&ps[j]).scale(alpha[(i, j)]);
            }
        }
    }
    Ok(a)
}

/// β-matrix classification and range facts for `A = Σα_{i,j}PᵢPⱼ`.
///
/// Entries `closed_range` (smallest nonzero singular value of `A`) and, when
/// `ΣHₖ` and `ΣHₖ⊥` are both the whole space, `invertibility` (smallest
/// singular value). Values `range_distance` (between `Im A` and `ΣHₖ`),
/// `beta_min_eigenvalue`, `kernel_deviation_from_ones`; flags
/// `range_equals_sum`, `invertibility_applicable`.
pub fn quadratic_projector_criterion(
    s: &SubspaceSystem,
    alpha: &CMatrix,
    tol: &Tolerances,
) -> Result<(BetaMatrix, MarginReport)> {
    if alpha.rows() != s.len() || alpha.cols() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: alpha.rows() });
    }
    let beta = BetaMatrix::new(alpha, tol)?;
    let a = quadratic_operator(s, alpha)?;
    let d = s.ambient_dim();
    let mut r = MarginReport::new();
    match smallest_nonzero_singular(&a, tol)? {
        Some(x) => r.push("closed_range", x, tol),
        None => r.push_vacuous("closed_range"),
    }
    let image = Subspace::from_spanning(&a, tol)?;
    let sum = s.sum_span(tol)?;
    let dist = image.projector_distance(&sum);
    r.value("range_distance", dist);
    r.flag("range_equals_sum", dist <= tol.margin_tol);
    let comps = s.members().iter().map(|h| h.complement(tol)).collect::<Result<Vec<_>>>()?;
    let comp_sum = SubspaceSystem::new(comps)?.sum_span(tol)?;
    let applicable = sum.dim() == d && comp_sum.dim() == d;
    r.flag("invertibility_applicable", applicable);
    if applicable {
        let smin = if d == 0 { f64::INFINITY } else { *svd(&a, tol)?.sigma.last().unwrap_or(&0.0) };
        r.push("invertibility", smin, tol);
    }
    r.value("beta_min_eigenvalue", beta.eigenvalues.first().copied().unwrap_or(0.0));
    if let Some(dev) = beta.kernel_deviation_from_ones() {
        r.value("kernel_deviation_from_ones", dev);
    }
    r.flag("beta_graph_connected", beta.connected);
    Ok((beta, r))
}

/// Inverse best approximation: best `ε` with `‖ΣAₖ*yₖ‖² ≥ ε² Σ‖yₖ‖²`,
/// `yₖ ∈ Hₖ`, reported as `ε` (entry `ibap_epsilon`).
///
/// Also entries `embedding_k` (`σ_min(Aₖ*|_{Hₖ})`) and `range_independence`
/// (independence certificate of the ranges `Aₖ*(Hₖ)`).
pub fn ibap_check(s: &SubspaceSystem, f: &OperatorFamily, tol: &Tolerances) -> Result<MarginReport> {
    if f.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: f.len() });
    }
    if f.ambient_dim() != s.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: s.ambient_dim(), found: f.ambient_dim() });
    }
    let d = s.ambient_dim();
    for (k, (h, a)) in s.members().iter().zip(f.members()).enumerate() {
        let outside = &a.clone() - &h.projector().matmul(a);
        let residual = norm2(&outside);
        if residual > tol.margin_tol * norm2(a).max(1.0) {
            return Err(Error::RangeConditionViolated { index: k + 1, residual });
        }
    }
    let blocks: Vec<CMatrix> = s
        .members()
        .iter()
        .zip(f.members())
        .map(|(h, a)| a.adjoint_mul(h.basis()))
        .collect();
    let mut r = MarginReport::new();
    let refs: Vec<&CMatrix> = blocks.iter().collect();
    let stacked = CMatrix::hstack(d, &refs);
    if stacked.cols() == 0 {
        r.push_vacuous("ibap_epsilon");
    } else if stacked.cols() > d {
        r.push("ibap_epsilon", 0.0, tol);
    } else {
        r.push("ibap_epsilon", *svd(&stacked, tol)?.sigma.last().unwrap_or(&0.0), tol);
    }
    let mut ranges = Vec::with_capacity(blocks.len());
    for (k, b) in blocks.iter().enumerate() {
        let id = format!("embedding_{}", k + 1);
        if b.cols() == 0 {
            r.push_vacuous(&id);
        } else {
            r.push(&id, *svd(b, tol)?.sigma.last().unwrap_or(&0.0), tol);
        }
        ranges.push(Subspace::from_spanning(b, tol)?);
    }
    let cert = independence_certificate(&SubspaceSystem::new(ranges)?, tol)?;
    r.push("range_independence", cert.epsilon, tol);
    let eps = r.margin("ibap_epsilon").unwrap_or(0.0);
    r.flag("ibap", eps > tol.margin_tol);
    Ok(r)
}
