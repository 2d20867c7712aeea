//! Dense complex linear algebra.

mod eigen;
mod general;
mod matrix;
mod svd;
mod tol;

pub use eigen::{eig_hermitian, hermitian_function, spectral_projector, HermitianSpectrum};
pub use general::eigenvalues;
pub use matrix::{c64, complete_orthonormal, CMatrix, C64};
pub use svd::{norm2, null_space, numerical_rank, pinv, svd, Svd};
pub use tol::Tolerances;

/// Largest distance between two complex multisets of equal size after a
/// greedy closest-pair matching. Returns `INFINITY` if the sizes differ.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used_a = alloc::vec![false; a.len()];
    let mut used_b = alloc::vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for _ in 0..a.len() {
        let mut best = (f64::INFINITY, 0, 0);
        for (i, x) in a.iter().enumerate() {
            if used_a[i] {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if used_b[j] {
                    continue;
                }
                let d = (x - y).norm();
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        used_a[best.1] = true;
        used_b[best.2] = true;
        worst = worst.max(best.0);
    }
    worst
}

/// Same as [`multiset_distance`] for real multisets.
pub fn real_multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    let ca: alloc::vec::Vec<C64> = a.iter().map(|&x| c64(x, 0.0)).collect();
    let cb: alloc::vec::Vec<C64> = b.iter().map(|&x| c64(x, 0.0)).collect();
    multiset_distance(&ca, &cb)
}
