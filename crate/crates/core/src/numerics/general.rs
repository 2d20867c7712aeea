use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{c64, CMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalues of a general square complex matrix (with multiplicity).
///
/// Householder reduction to Hessenberg form followed by shifted QR with
/// Givens rotations and deflation.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(Error::ComputationFailed("non-finite matrix entry"));
    }
    let n = m.rows();
    let mut h = m.clone();
    hessenberg(&mut h);
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    let mut since_deflation = 0usize;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        // find the active unreduced block [lo, hi)
        let mut lo = hi - 1;
        while lo > 0 {
            if negligible(&h, lo, norm) {
                h[(lo, lo - 1)] = C64::default();
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            out.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if lo == hi - 2 {
            // equal eigenvalues give no convergence in QR; solve the block directly
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, lo + 1)], h[(lo + 1, lo)], h[(lo + 1, lo + 1)]);
            out.push(l1);
            out.push(l2);
            hi -= 2;
            since_deflation = 0;
            continue;
        }
        iter += 1;
        since_deflation += 1;
        if iter > 100 * n.max(10) {
            return Err(Error::ComputationFailed("QR eigenvalue iteration did not converge"));
        }
        let mu = if since_deflation.is_multiple_of(11) {
            // exceptional shift against stagnation
            h[(hi - 1, hi - 1)] + c64(h[(hi - 1, hi - 2)].norm() * 0.75, 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(out)
}

fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..(n - 2) {
        let mut x: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let alpha_norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { c64(1.0, 0.0) } else { x0 / x0.norm() };
        x[0] += phase * alpha_norm;
        let vn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in x.iter_mut() {
            *z /= vn;
        }
        // H ← (I − 2vv*) H (I − 2vv*)
        for j in 0..n {
            let mut s = C64::default();
            for (t, i) in ((k + 1)..n).enumerate() {
                s += x[t].conj() * h[(i, j)];
            }
            for (t, i) in ((k + 1)..n).enumerate() {
                h[(i, j)] -= x[t] * s * 2.0;
            }
        }
        for i in 0..n {
            let mut s = C64::default();
            for (t, j) in ((k + 1)..n).enumerate() {
                s += h[(i, j)] * x[t];
            }
            for (t, j) in ((k + 1)..n).enumerate() {
                h[(i, j)] -= s * x[t].conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = C64::default();
        }
    }
}

/// Subdiagonal entry `h[k, k−1]` is negligible next to its diagonal neighbours.
fn negligible(h: &CMatrix, k: usize, norm: f64) -> bool {
    let sub = h[(k, k - 1)].norm();
    let diag = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
    sub <= f64::EPSILON * diag.max(norm * 1e-3)
}

/// Eigenvalues of `[[a, b], [c, d]]`, the first one closest to `d`.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        (l1, l2)
    } else {
        (l2, l1)
    }
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> C64 {
    eig2(h[(hi - 2, hi - 2)], h[(hi - 2, hi - 1)], h[(hi - 1, hi - 2)], h[(hi - 1, hi - 1)]).0
}

/// One explicit shifted QR step on the block `[lo, hi)`, applied to the
/// whole matrix so deflated rows stay consistent.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: C64) {
    let n = h.rows();
    for i in lo..hi {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
    for k in lo..(hi - 1) {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let (c, s) = givens(a, b);
        // G = [[c, s], [-conj(s), c]] applied to rows k, k+1
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rots.push((c, s));
    }
    for (t, k) in (lo..(hi - 1)).enumerate() {
        let (c, s) = rots[t];
        // multiply columns k, k+1 by G*
        for i in 0..(k + 2).min(n) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for i in lo..hi {
        h[(i, i)] += mu;
    }
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::default());
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}
