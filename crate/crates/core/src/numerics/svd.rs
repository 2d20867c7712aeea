use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{c64, complete_orthonormal, dot, vec_norm, CMatrix, C64};
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// Thin singular value decomposition `M = U diag(σ) V*`.
///
/// For an `m×n` input with `k = min(m, n)`, `u` is `m×k`, `v` is `n×k` and
/// `sigma` has `k` entries in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Count of singular values above `rank_tol · σ₁`.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        let s1 = self.sigma.first().copied().unwrap_or(0.0);
        if s1 <= 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > tol.rank_tol * s1).count()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let k = self.sigma.len();
        let us = CMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.sigma[j]);
        us.matmul(&self.v.adjoint())
    }
}

/// Singular value decomposition by one-sided Hestenes–Jacobi rotations.
pub fn svd(m: &CMatrix, _tol: &Tolerances) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::ComputationFailed("non-finite matrix entry"));
    }
    if m.rows() < m.cols() {
        let t = tall_svd(&m.adjoint())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    tall_svd(m)
}

fn tall_svd(m: &CMatrix) -> Result<Svd> {
    let (rows, n) = (m.rows(), m.cols());
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = alloc::vec![C64::default(); n];
            e[j] = c64(1.0, 0.0);
            e
        })
        .collect();
    // columns below round-off of the whole matrix are treated as zero
    let floor = (f64::EPSILON * m.frobenius_norm()).powi(2);
    let mut converged = n <= 1;
    for _sweep in 0..80 {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phc = (gamma / g).conj();
                for z in w[q].iter_mut() {
                    *z *= phc;
                }
                for z in v[q].iter_mut() {
                    *z *= phc;
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::ComputationFailed("Jacobi SVD did not converge"));
    }
    let norms: Vec<f64> = w.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let s1 = sigma.first().copied().unwrap_or(0.0);
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &j in &order {
        let s = norms[j];
        if !(s > 0.0 && s > s1 * f64::EPSILON * 1e-3) {
            break;
        }
        // tiny columns lose orthogonality relative to their norm; clean them up
        let mut u: Vec<C64> = w[j].iter().map(|z| z / s).collect();
        for _ in 0..2 {
            for b in ucols.iter() {
                let p = dot(b, &u);
                for (ui, bi) in u.iter_mut().zip(b) {
                    *ui -= p * bi;
                }
            }
        }
        let nu = vec_norm(&u);
        if nu < 0.5 {
            break;
        }
        ucols.push(u.iter().map(|z| z / nu).collect());
    }
    // columns for (numerically) zero singular values are completed orthonormally
    complete_orthonormal(rows, &mut ucols, n);
    let vcols: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok(Svd {
        u: CMatrix::from_columns(rows, &ucols),
        sigma,
        v: CMatrix::from_columns(n, &vcols),
    })
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * c - b * s;
        *y = a * s + b * c;
    }
}

/// Operator 2-norm (largest singular value).
pub fn norm2(m: &CMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    svd(m, &Tolerances::default())
        .map(|s| s.sigma[0])
        .unwrap_or(f64::NAN)
}

pub fn numerical_rank(m: &CMatrix, tol: &Tolerances) -> Result<usize> {
    Ok(svd(m, tol)?.rank(tol))
}

/// Moore–Penrose pseudoinverse with cutoff `σ > rank_tol · σ₁`.
pub fn pinv(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let s = svd(m, tol)?;
    let r = s.rank(tol);
    let mut out = CMatrix::zeros(m.cols(), m.rows());
    for k in 0..r {
        let inv = 1.0 / s.sigma[k];
        for i in 0..m.cols() {
            let vik = s.v[(i, k)] * inv;
            for j in 0..m.rows() {
                out[(i, j)] += vik * s.u[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let n = m.cols();
    if m.rows() == 0 {
        return Ok(CMatrix::identity(n));
    }
    // row space of m = column space of m*; its right factor spans it
    let s = svd(m, tol)?;
    let r = s.rank(tol);
    let mut cols: Vec<Vec<C64>> = (0..r).map(|j| s.v.column(j)).collect();
    complete_orthonormal(n, &mut cols, n);
    Ok(CMatrix::from_columns(n, &cols[r..]))
}
