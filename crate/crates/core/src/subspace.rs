//! Subspaces of `C^d` given by orthonormal bases.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, norm2, svd, CMatrix, Tolerances};

/// Subspace of `C^d` stored as a `d×r` matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMatrix,
}

impl Subspace {
    pub fn zero(d: usize) -> Self {
        Self { ambient_dim: d, basis: CMatrix::zeros(d, 0) }
    }

    pub fn full(d: usize) -> Self {
        Self { ambient_dim: d, basis: CMatrix::identity(d) }
    }

    /// Column space of `vectors`, orthonormalized to its numerical rank.
    pub fn from_spanning(vectors: &CMatrix, tol: &Tolerances) -> Result<Self> {
        let d = vectors.rows();
        if vectors.cols() == 0 {
            return Ok(Self::zero(d));
        }
        let s = svd(vectors, tol)?;
        let r = s.rank(tol);
        let idx: Vec<usize> = (0..r).collect();
        Ok(Self { ambient_dim: d, basis: s.u.select_columns(&idx) })
    }

    /// Wraps a basis that is already orthonormal. Only checked in debug builds.
    pub fn from_orthonormal(basis: CMatrix) -> Self {
        debug_assert!(
            (&basis.adjoint_mul(&basis) - &CMatrix::identity(basis.cols())).max_abs() < 1e-8,
            "basis is not orthonormal"
        );
        Self { ambient_dim: basis.rows(), basis }
    }

    /// Span of the standard basis vectors with the given (0-based) indices.
    pub fn coordinate(d: usize, idx: &[usize]) -> Self {
        Self::from_orthonormal(CMatrix::identity(d).select_columns(idx))
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> CMatrix {
        self.basis.gram_outer()
    }

    /// Orthogonal complement in `C^d`.
    pub fn complement(&self, tol: &Tolerances) -> Result<Self> {
        let d = self.ambient_dim;
        let r = self.dim();
        if r == 0 {
            return Ok(Self::full(d));
        }
        if r == d {
            return Ok(Self::zero(d));
        }
        let spec = eig_hermitian(&self.projector(), tol)?;
        let idx: Vec<usize> = (0..(d - r)).collect();
        Ok(Self::from_orthonormal(spec.eigenvectors.select_columns(&idx)))
    }

    /// `self ∩ other`, the eigenvalue-2 eigenspace of `P_A + P_B`.
    pub fn intersect(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        check_dims(self, other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient_dim));
        }
        let sum = &self.projector() + &other.projector();
        let spec = eig_hermitian(&sum, tol)?;
        let vecs = spec.vectors_where(|x| 2.0 - x <= tol.rank_tol);
        Ok(Self::from_orthonormal(vecs))
    }

    /// `self ⊖ other`: the orthogonal complement of `P_self(other)` inside `self`.
    /// Intended for `other ⊆ self`.
    pub fn minus(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        check_dims(self, other)?;
        let r = self.dim();
        if r == 0 || other.is_zero() {
            return Ok(self.clone());
        }
        // coordinates of other inside self
        let coords = self.basis.adjoint_mul(other.basis());
        let inner = Self::from_spanning(&coords, tol)?;
        let rest = inner.complement(tol)?;
        Ok(Self::from_orthonormal(self.basis.matmul(rest.basis())))
    }

    /// `other ⊆ self`, decided by `‖(I − P_self) B_other‖ ≤ margin_tol`.
    pub fn contains(&self, other: &Self, tol: &Tolerances) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        if other.is_zero() {
            return true;
        }
        let b = other.basis();
        let residual = b - &self.basis.matmul(&self.basis.adjoint_mul(b));
        norm2(&residual) <= tol.margin_tol
    }

    /// Principal angles in ascending order, `min(dim A, dim B)` of them.
    pub fn principal_angles(&self, other: &Self, tol: &Tolerances) -> Result<Vec<f64>> {
        check_dims(self, other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Vec::new());
        }
        let m = self.basis.adjoint_mul(other.basis());
        let s = svd(&m, tol)?;
        // principal vector pairs u_k, v_k have (u_k, v_k) = σ_k ≥ 0, and
        // 2·asin(|u−v|/2) stays accurate for tiny angles where acos does not
        let u = self.basis.matmul(&s.u);
        let v = other.basis().matmul(&s.v);
        let mut out: Vec<f64> = (0..s.sigma.len())
            .map(|k| {
                let dist = (0..u.rows())
                    .map(|i| (u[(i, k)] - v[(i, k)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                (2.0 * (dist / 2.0).min(1.0).asin()).min(core::f64::consts::FRAC_PI_2)
            })
            .collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// Maps a subspace of `C^r` (coordinates w.r.t. this basis) into `C^d`.
    pub fn lift(&self, inner: &Self) -> Self {
        assert_eq!(inner.ambient_dim, self.dim(), "coordinate dimension mismatch");
        Self::from_orthonormal(self.basis.matmul(inner.basis()))
    }

    /// Coordinates of `other` (assumed inside `self`) with respect to this basis.
    pub fn restrict(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        check_dims(self, other)?;
        Self::from_spanning(&self.basis.adjoint_mul(other.basis()), tol)
    }

    /// Operator-norm distance between the two orthogonal projectors.
    pub fn projector_distance(&self, other: &Self) -> f64 {
        norm2(&(&self.projector() - &other.projector()))
    }
}

/// Column space of the concatenated bases.
pub fn sum_span(members: &[&Subspace], tol: &Tolerances) -> Result<Subspace> {
    let d = match members.first() {
        Some(s) => s.ambient_dim(),
        None => return Err(Error::InvalidArgument("empty subspace list".into())),
    };
    for s in members {
        if s.ambient_dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: s.ambient_dim() });
        }
    }
    let parts: Vec<&CMatrix> = members.iter().map(|s| s.basis()).collect();
    Subspace::from_spanning(&CMatrix::hstack(d, &parts), tol)
}

fn check_dims(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    Ok(())
}

/// Ordered tuple of subspaces of one ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSystem {
    ambient_dim: usize,
    members: Vec<Subspace>,
}

impl SubspaceSystem {
    pub fn new(members: Vec<Subspace>) -> Result<Self> {
        let d = match members.first() {
            Some(s) => s.ambient_dim(),
            None => return Err(Error::InvalidArgument("a system needs at least one subspace".into())),
        };
        for s in &members {
            if s.ambient_dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: s.ambient_dim() });
            }
        }
        Ok(Self { ambient_dim: d, members })
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        self.members.iter().map(Subspace::projector).collect()
    }

    /// `P₁ + … + Pₙ`.
    pub fn projector_sum(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for p in self.projectors() {
            s = &s + &p;
        }
        s
    }

    /// `[B₁ … Bₙ]`, a `d × Σrₖ` matrix.
    pub fn concatenation(&self) -> CMatrix {
        let parts: Vec<&CMatrix> = self.members.iter().map(|s| s.basis()).collect();
        CMatrix::hstack(self.ambient_dim, &parts)
    }

    pub fn total_rank(&self) -> usize {
        self.members.iter().map(Subspace::dim).sum()
    }

    pub fn sum_span(&self, tol: &Tolerances) -> Result<Subspace> {
        let refs: Vec<&Subspace> = self.members.iter().collect();
        sum_span(&refs, tol)
    }

    /// Subsystem with the given 0-based indices, in that order.
    pub fn subsystem(&self, idx: &[usize]) -> Result<Self> {
        let mut members = Vec::with_capacity(idx.len());
        for &i in idx {
            let s = self
                .members
                .get(i)
                .ok_or(Error::IndexOutOfRange { index: i + 1, len: self.len() })?;
            members.push(s.clone());
        }
        Self::new(members)
    }
}
