use alloc::vec::Vec;
use core::ops::Range;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{c64, CMatrix, C64};
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// Eigendecomposition `M = U diag(λ) U*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    /// Eigenvectors whose eigenvalue satisfies `keep`.
    pub fn vectors_where(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let idx: Vec<usize> =
            (0..self.dim()).filter(|&i| keep(self.eigenvalues[i])).collect();
        self.eigenvectors.select_columns(&idx)
    }

    /// `U f(Λ) U*`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let vals: Vec<C64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C64::default(), |acc, k| acc + u[(i, k)] * vals[k] * u[(j, k)].conj())
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| c64(x, 0.0))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &CMatrix, tol: &Tolerances) -> Result<HermitianSpectrum> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(Error::ComputationFailed("non-finite matrix entry"));
    }
    let asym = m.asymmetry();
    if asym > tol.eig_tol * m.frobenius_norm() {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let fro = a.frobenius_norm();
    if n <= 1 || fro == 0.0 {
        return Ok(finish(&a, v));
    }
    let floor = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * fro);
    let mut converged = false;
    for _sweep in 0..80 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-2 * fro || off.sqrt() <= floor {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, floor);
            }
        }
    }
    if !converged {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() > 1e3 * f64::EPSILON * fro {
            return Err(Error::ComputationFailed("Jacobi eigenvalue iteration did not converge"));
        }
    }
    Ok(finish(&a, v))
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, floor: f64) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g <= floor {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase e^{iφ} = apq / |apq| makes the 2x2 block real
    let ph = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phc = ph.conj();
    // J restricted to (p,q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
    let jpp = c64(c, 0.0);
    let jpq = c64(s, 0.0);
    let jqp = phc * (-s);
    let jqq = phc * c;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::default();
    a[(q, p)] = C64::default();
    a[(p, p)] = c64(a[(p, p)].re, 0.0);
    a[(q, q)] = c64(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

fn finish(a: &CMatrix, v: CMatrix) -> HermitianSpectrum {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    HermitianSpectrum {
        eigenvalues: order.iter().map(|&i| a[(i, i)].re).collect(),
        eigenvectors: v.select_columns(&order),
    }
}

/// `f(M)` for Hermitian `M`, through its eigendecomposition.
pub fn hermitian_function(
    m: &CMatrix,
    f: impl Fn(f64) -> C64,
    tol: &Tolerances,
) -> Result<CMatrix> {
    Ok(eig_hermitian(m, tol)?.apply(f))
}

/// Orthogonal projector onto the eigenvectors of `M` whose eigenvalues lie in
/// the half-open interval `lo..hi`. Infinite endpoints are never checked.
pub fn spectral_projector(m: &CMatrix, interval: Range<f64>, tol: &Tolerances) -> Result<CMatrix> {
    let spec = eig_hermitian(m, tol)?;
    for &x in &spec.eigenvalues {
        for endpoint in [interval.start, interval.end] {
            if endpoint.is_finite() && (x - endpoint).abs() <= tol.eig_tol {
                return Err(Error::EigenvalueOnBoundary { eigenvalue: x, endpoint });
            }
        }
    }
    let vecs = spec.vectors_where(|x| interval.contains(&x));
    Ok(vecs.gram_outer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_and_diagonal() {
        let s = eig_hermitian(&CMatrix::identity(3), &tol()).unwrap();
        assert_eq!(s.eigenvalues, [1.0, 1.0, 1.0]);
        let s = eig_hermitian(&CMatrix::from_diag(&[1.0, 0.0, 0.5]), &tol()).unwrap();
        assert_eq!(s.eigenvalues, [0.0, 0.5, 1.0]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_vec(
            2,
            2,
            alloc::vec![c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(2.0, 0.0)],
        );
        let s = eig_hermitian(&m, &tol()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!((&s.reconstruct() - &m).max_abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eig_hermitian(&m, &tol()), Err(Error::NotHermitian { .. })));
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(eig_hermitian(&m, &tol()), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn spectral_projector_examples() {
        let m = CMatrix::from_diag(&[0.1, 0.9]);
        let p = spectral_projector(&m, 0.0..0.5, &tol()).unwrap();
        assert!((&p - &CMatrix::from_diag(&[1.0, 0.0])).max_abs() < 1e-14);
        let p = spectral_projector(&m, 0.0..1.0, &tol()).unwrap();
        assert!((&p - &CMatrix::identity(2)).max_abs() < 1e-14);
        let m = CMatrix::from_diag(&[0.5]);
        assert!(matches!(
            spectral_projector(&m, 0.0..0.5, &tol()),
            Err(Error::EigenvalueOnBoundary { .. })
        ));
    }
}
