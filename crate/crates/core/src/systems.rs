//! Systems of `n` subspaces: spectral gap of `ΣPₖ`, the dilation to a pair,
//! graph-weighted complement margins and the linear-combination bound.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c64, eig_hermitian, CMatrix, Tolerances};
use crate::reduction::independence_certificate;
use crate::report::MarginReport;
use crate::sample::Sampler;
use crate::subspace::SubspaceSystem;

/// Simple undirected graph with positive edge weights; vertices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    connected: bool,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = Vec::new();
        for &(i, j, w) in &edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j) + 1, len: n });
            }
            if i == j {
                return Err(Error::InvalidArgument("graph has a loop".into()));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidArgument("edge weights must be positive".into()));
            }
            let key = (i.min(j), i.max(j));
            if seen.contains(&key) {
                return Err(Error::InvalidArgument("graph has a repeated edge".into()));
            }
            seen.push(key);
        }
        let plain: Vec<(usize, usize)> = edges.iter().map(|&(i, j, _)| (i, j)).collect();
        let connected = is_connected_edges(n, &plain);
        Ok(Self { n, edges, connected })
    }

    pub fn complete(n: usize) -> Self {
        let mut e = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                e.push((i, j, 1.0));
            }
        }
        Self::new(n, e).expect("complete graph")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i, 1.0)).collect()).expect("path graph")
    }

    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        if n > 2 {
            e.push((n - 1, 0, 1.0));
        }
        Self::new(n, e).expect("cycle graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// `ρᵢ = Σ_{j∼i} γᵢⱼ`.
    pub fn rho(&self, i: usize) -> f64 {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == i || b == i)
            .map(|&(_, _, w)| w)
            .sum()
    }

    /// Same graph with one more edge.
    pub fn with_edge(&self, i: usize, j: usize, w: f64) -> Result<Self> {
        let mut e = self.edges.clone();
        e.push((i, j, w));
        Self::new(self.n, e)
    }
}

/// Connectivity of an undirected graph on `0..n` (union-find).
pub(crate) fn is_connected_edges(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|i| find(&mut parent, i) == root)
}

/// Spectrum summary of `ΣPₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumGap {
    /// Smallest nonzero eigenvalue; `None` when every member is zero.
    pub gap: Option<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub sum_dim: usize,
    pub full: bool,
}

pub fn sum_gap_values(s: &SubspaceSystem, tol: &Tolerances) -> Result<SumGap> {
    let spec = eig_hermitian(&s.projector_sum(), tol)?;
    let max = spec.max().unwrap_or(0.0);
    let zero = tol.rank_tol * max.max(1.0);
    let nonzero: Vec<f64> = spec.eigenvalues.iter().copied().filter(|&x| x > zero).collect();
    Ok(SumGap {
        gap: nonzero.first().copied(),
        min_eigenvalue: spec.min().unwrap_or(0.0),
        max_eigenvalue: max,
        sum_dim: nonzero.len(),
        full: nonzero.len() == s.ambient_dim(),
    })
}

/// Closedness through the spectral gap of `P₁ + … + Pₙ`.
///
/// Entries `sum_gap` (smallest nonzero eigenvalue) and `invertibility`
/// (smallest eigenvalue); value `sum_dimension`; flag `full_sum`.
pub fn sum_gap(s: &SubspaceSystem, tol: &Tolerances) -> Result<MarginReport> {
    let g = sum_gap_values(s, tol)?;
    let mut r = MarginReport::new();
    match g.gap {
        Some(x) => r.push("sum_gap", x, tol),
        None => r.push_vacuous("sum_gap"),
    }
    r.push("invertibility", if g.full { g.min_eigenvalue } else { 0.0 }, tol);
    r.value("sum_dimension", g.sum_dim as f64);
    r.flag("full_sum", g.full);
    Ok(r)
}

/// `(P_Δ, P_H̃)` on `C^{nd}`: `P_Δ` has every block `I/n`, `P_H̃ = diag(Pₖ)`.
pub fn dilation(s: &SubspaceSystem) -> (CMatrix, CMatrix) {
    let n = s.len();
    let d = s.ambient_dim();
    let inv = 1.0 / n as f64;
    let p_delta = CMatrix::from_fn(n * d, n * d, |i, j| {
        if i % d == j % d {
            c64(inv, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let ps = s.projectors();
    let refs: Vec<&CMatrix> = ps.iter().collect();
    (p_delta, CMatrix::block_diag(&refs))
}

/// Phase search settings for the modulus form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseSearch {
    pub phases_per_restart: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for PhaseSearch {
    fn default() -> Self {
        Self { phases_per_restart: 64, restarts: 16, seed: 0 }
    }
}

/// Graph margins on `⊕Hₖ⊥`.
///
/// - `difference_form` (exact): smallest eigenvalue of the block operator with
///   diagonal blocks `ρᵢ I` and off-diagonal blocks `−γᵢⱼ Cᵢ*Cⱼ`, where `Cᵢ` is
///   an orthonormal basis of `Hᵢ⊥`. For unit weights this is the best `ε` in
///   `Σ_{edges} ‖xᵢ − xⱼ‖² ≥ ε Σ‖xₖ‖²`.
/// - `modulus_form` (estimate): the same with `|(xᵢ, xⱼ)|` in place of
///   `Re(xᵢ, xⱼ)`, i.e. the minimum over edge phases `θ` of the smallest
///   eigenvalue with blocks `−γ e^{iθ} Cᵢ*Cⱼ`. Sampled phases give an upper
///   estimate of that infimum; `θ = 0` is always included.
///
/// Both are vacuous (`+∞`) when `⊕Hₖ⊥ = 0`.
pub fn complement_graph_margin(
    s: &SubspaceSystem,
    g: &WeightedGraph,
    tol: &Tolerances,
    search: &PhaseSearch,
) -> Result<MarginReport> {
    if g.n() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: g.n() });
    }
    if !g.is_connected() {
        return Err(Error::GraphDisconnected);
    }
    let comps = s
        .members()
        .iter()
        .map(|h| h.complement(tol))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = comps.iter().map(|c| c.dim()).collect();
    let m: usize = sizes.iter().sum();
    let mut r = MarginReport::new();
    r.value("constraint_dim", m as f64);
    if m == 0 {
        r.push_vacuous("difference_form");
        r.push_vacuous("modulus_form");
        return Ok(r);
    }
    let mut offs = vec![0usize; sizes.len() + 1];
    for (i, &k) in sizes.iter().enumerate() {
        offs[i + 1] = offs[i] + k;
    }
    let cross: Vec<CMatrix> = g
        .edges()
        .iter()
        .map(|&(i, j, _)| comps[i].basis().adjoint_mul(comps[j].basis()))
        .collect();
    let assemble = |phases: &[f64]| -> CMatrix {
        let mut q = CMatrix::zeros(m, m);
        for i in 0..s.len() {
            let rho = g.rho(i);
            for t in offs[i]..offs[i + 1] {
                q[(t, t)] = c64(rho, 0.0);
            }
        }
        for (e, &(i, j, w)) in g.edges().iter().enumerate() {
            let ph = c64(phases[e].cos(), phases[e].sin()) * (-w);
            let blk = cross[e].scale(ph);
            q.set_block(offs[i], offs[j], &blk);
            q.set_block(offs[j], offs[i], &blk.adjoint());
        }
        q
    };
    let lambda_min = |phases: &[f64]| -> Result<f64> {
        Ok(eig_hermitian(&assemble(phases), tol)?.eigenvalues[0])
    };
    let ne = g.edges().len();
    let zero = vec![0.0; ne];
    let exact = lambda_min(&zero)?;
    r.push("difference_form", exact, tol);

    let mut best = exact;
    if ne > 0 {
        let mut rng = Sampler::new(search.seed);
        for _ in 0..search.restarts {
            let mut cur = zero.clone();
            let mut cur_val = f64::INFINITY;
            for _ in 0..search.phases_per_restart {
                let th: Vec<f64> = (0..ne).map(|_| rng.uniform() * core::f64::consts::TAU).collect();
                let v = lambda_min(&th)?;
                if v < cur_val {
                    cur_val = v;
                    cur = th;
                }
            }
            // coordinate refinement with shrinking steps
            let mut step = 0.5;
            for _ in 0..6 {
                for e in 0..ne {
                    for dir in [1.0, -1.0] {
                        let mut th = cur.clone();
                        th[e] += dir * step;
                        let v = lambda_min(&th)?;
                        if v < cur_val {
                            cur_val = v;
                            cur = th;
                        }
                    }
                }
                step *= 0.5;
            }
            best = best.min(cur_val);
        }
    }
    r.push_estimate("modulus_form", best, tol);
    Ok(r)
}

/// Checks `α₁P₁ + … + αₙPₙ ≤ (Σαᵢ − (n−1)ε) I` with `ε = λ_min(ΣαᵢPᵢ)`.
///
/// Entry `slack = Σαᵢ − (n−1)ε − λ_max`. The bound is guaranteed for linearly
/// independent systems; flag `applicable` is false when `ε > 0` but the
/// system is dependent.
pub fn linear_combination_check(s: &SubspaceSystem, alpha: &[f64], tol: &Tolerances) -> Result<MarginReport> {
    if alpha.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: alpha.len() });
    }
    if alpha.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
        return Err(Error::InvalidArgument("coefficients must be positive".into()));
    }
    let d = s.ambient_dim();
    let mut m = CMatrix::zeros(d, d);
    for (p, &a) in s.projectors().iter().zip(alpha) {
        m = &m + &p.scale_real(a);
    }
    let spec = eig_hermitian(&m, tol)?;
    let eps = spec.min().unwrap_or(0.0);
    let lmax = spec.max().unwrap_or(0.0);
    let total: f64 = alpha.iter().sum();
    let n = s.len() as f64;
    let mut r = MarginReport::new();
    r.push("slack", total - (n - 1.0) * eps - lmax, tol);
    r.value("epsilon", eps);
    r.value("lambda_max", lmax);
    r.value("alpha_sum", total);
    let independent = independence_certificate(s, tol)?.independent;
    r.flag("independent", independent);
    r.flag("applicable", eps <= tol.margin_tol || independent);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::simplex_lines;
    use crate::subspace::Subspace;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn lines45() -> SubspaceSystem {
        let e1 = Subspace::coordinate(2, &[0]);
        let diag = Subspace::from_spanning(&CMatrix::from_real(2, 1, &[1.0, 1.0]), &tol()).unwrap();
        SubspaceSystem::new(vec![e1, diag]).unwrap()
    }

    #[test]
    fn gap_examples() {
        let full = SubspaceSystem::new(vec![Subspace::full(3)]).unwrap();
        assert!((sum_gap(&full, &tol()).unwrap().margin("sum_gap").unwrap() - 1.0).abs() < 1e-14);
        let r = sum_gap(&simplex_lines(3), &tol()).unwrap();
        assert!((r.margin("sum_gap").unwrap() - 1.5).abs() < 1e-12);
        let r = sum_gap(&lines45(), &tol()).unwrap();
        assert!((r.margin("sum_gap").unwrap() - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert_eq!(r.get_flag("full_sum"), Some(true));
    }

    #[test]
    fn dilation_of_single_member() {
        let s = SubspaceSystem::new(vec![Subspace::coordinate(2, &[0])]).unwrap();
        let (pd, _) = dilation(&s);
        assert!((&pd - &CMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn graph_margins_for_45_degree_lines() {
        let r = complement_graph_margin(&lines45(), &WeightedGraph::complete(2), &tol(), &PhaseSearch::default())
            .unwrap();
        let expect = 1.0 - FRAC_1_SQRT_2;
        assert!((r.margin("difference_form").unwrap() - expect).abs() < 1e-12);
        // a single edge is a tree, so the phase does not matter
        assert!((r.margin("modulus_form").unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn full_members_are_vacuous() {
        let s = SubspaceSystem::new(vec![Subspace::full(2), Subspace::full(2)]).unwrap();
        let r = complement_graph_margin(&s, &WeightedGraph::complete(2), &tol(), &PhaseSearch::default()).unwrap();
        assert!(r.all_satisfied());
        assert!(r.margin("difference_form").unwrap().is_infinite());
    }

    #[test]
    fn disconnected_graph_rejected() {
        let s = simplex_lines(3);
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(
            complement_graph_margin(&s, &g, &tol(), &PhaseSearch::default()),
            Err(Error::GraphDisconnected)
        );
    }

    #[test]
    fn linear_combination_single_and_orthogonal() {
        let s = SubspaceSystem::new(vec![Subspace::full(2)]).unwrap();
        let r = linear_combination_check(&s, &[2.5], &tol()).unwrap();
        assert_eq!(r.margin("slack").unwrap(), 0.0);
        let s = SubspaceSystem::new(vec![Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[1])]).unwrap();
        let r = linear_combination_check(&s, &[1.0, 1.0], &tol()).unwrap();
        assert!(r.get_value("epsilon").unwrap().abs() < 1e-15);
        assert!(r.margin("slack").unwrap() >= -1e-8);
    }
}
