//! Seeded random inputs and reference configurations.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::numerics::{c64, CMatrix, Tolerances, C64};
use crate::subspace::{Subspace, SubspaceSystem};

/// Deterministic generator for test and search inputs.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.uniform() * n as f64) as usize % n.max(1)
    }

    /// Standard normal by Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
    }

    pub fn complex_normal(&mut self) -> C64 {
        c64(self.normal(), self.normal()) * core::f64::consts::FRAC_1_SQRT_2
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn real_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| c64(self.normal(), 0.0))
    }

    pub fn vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    /// Generic subspace of `C^d` of dimension `r`.
    pub fn subspace(&mut self, d: usize, r: usize) -> Subspace {
        let m = self.matrix(d, r);
        Subspace::from_spanning(&m, &Tolerances::default()).expect("random spanning set")
    }

    /// System of `dims.len()` generic subspaces of `C^d`.
    pub fn system(&mut self, d: usize, dims: &[usize]) -> SubspaceSystem {
        let members = dims.iter().map(|&r| self.subspace(d, r)).collect();
        SubspaceSystem::new(members).expect("nonempty system")
    }

    /// Random unitary `d × d`.
    pub fn unitary(&mut self, d: usize) -> CMatrix {
        let m = self.matrix(d, d);
        Subspace::from_spanning(&m, &Tolerances::default()).expect("random square matrix").basis().clone()
    }

    /// Pair in `C^d` with randomly sized `H₁∩H₂`, `H₁∩H₂⊥`, `H₁⊥∩H₂`,
    /// `H₁⊥∩H₂⊥` and a generic part whose angles are uniform in `(0, π/2)`.
    pub fn structured_pair(&mut self, d: usize) -> (Subspace, Subspace) {
        let k = self.below(d / 2 + 1);
        let mut parts = [0usize; 4];
        for _ in 0..(d - 2 * k) {
            parts[self.below(4)] += 1;
        }
        let q = self.unitary(d);
        let mut next = 0;
        let mut take = |m: usize| {
            let idx: Vec<usize> = (next..next + m).collect();
            next += m;
            q.select_columns(&idx)
        };
        let (both, first, second, _) = (take(parts[0]), take(parts[1]), take(parts[2]), take(parts[3]));
        let u = take(k);
        let v = take(k);
        let mut tilted = CMatrix::zeros(d, k);
        for j in 0..k {
            let theta = (0.02 + 0.96 * self.uniform()) * core::f64::consts::FRAC_PI_2;
            for i in 0..d {
                tilted[(i, j)] = u[(i, j)] * theta.cos() + v[(i, j)] * theta.sin();
            }
        }
        let h1 = Subspace::from_orthonormal(CMatrix::hstack(d, &[&both, &first, &u]));
        let h2 = Subspace::from_orthonormal(CMatrix::hstack(d, &[&both, &second, &tilted]));
        (h1, h2)
    }

    /// Linearly independent system: columns of a generic invertible matrix
    /// split into blocks of the given sizes (`Σ dims ≤ d`).
    pub fn independent_system(&mut self, d: usize, dims: &[usize]) -> SubspaceSystem {
        let total: usize = dims.iter().sum();
        assert!(total <= d, "independent system needs sum of dims <= d");
        let g = self.matrix(d, total);
        let tol = Tolerances::default();
        let mut c = 0;
        let members = dims
            .iter()
            .map(|&r| {
                let idx: Vec<usize> = (c..c + r).collect();
                c += r;
                Subspace::from_spanning(&g.select_columns(&idx), &tol).expect("random block")
            })
            .collect();
        SubspaceSystem::new(members).expect("nonempty system")
    }
}

/// `n` lines in `C^{n−1}` through the vertices of a regular simplex centred
/// at the origin. They satisfy `ΣPₖ = n/(n−1) · I` and are linearly dependent.
pub fn simplex_lines(n: usize) -> SubspaceSystem {
    assert!(n >= 2, "need at least two lines");
    let tol = Tolerances::default();
    // centred standard basis of R^n, expressed in an orthonormal basis of 1⊥
    let mut q: Vec<Vec<C64>> = Vec::new();
    for k in 0..(n - 1) {
        // Helmert basis vector k
        let norm = (((k + 1) * (k + 2)) as f64).sqrt();
        let v: Vec<C64> = (0..n)
            .map(|i| {
                if i <= k {
                    c64(1.0 / norm, 0.0)
                } else if i == k + 1 {
                    c64(-((k + 1) as f64) / norm, 0.0)
                } else {
                    C64::default()
                }
            })
            .collect();
        q.push(v);
    }
    let members = (0..n)
        .map(|i| {
            let coords: Vec<C64> = q.iter().map(|h| h[i]).collect();
            Subspace::from_spanning(&CMatrix::from_columns(n - 1, &[coords]), &tol).expect("simplex vertex")
        })
        .collect();
    SubspaceSystem::new(members).expect("nonempty system")
}
