//! Infinite direct sums of finite subspace systems, truncated at a horizon.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c64, eig_hermitian, CMatrix, Tolerances};
use crate::report::MarginReport;
use crate::subspace::{sum_span, Subspace, SubspaceSystem};

/// Block `k` (1-based) of the direct sum. Must be a pure function of `k`.
pub type BlockGenerator = Arc<dyn Fn(usize) -> SubspaceSystem + Send + Sync>;

#[derive(Clone)]
pub struct BlockSystem {
    name: String,
    n: usize,
    generator: BlockGenerator,
    horizon: usize,
    gaps: Vec<f64>,
}

impl fmt::Debug for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockSystem")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl BlockSystem {
    /// Materializes blocks `1..=horizon` and caches their full-sum gaps.
    pub fn new(name: &str, n: usize, horizon: usize, generator: BlockGenerator, tol: &Tolerances) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block systems need at least one member".into()));
        }
        let all: Vec<usize> = (1..=n).collect();
        let mut bs = Self { name: name.to_string(), n, generator, horizon, gaps: Vec::new() };
        bs.gaps = bs.subset_gaps(&all, horizon, tol)?;
        Ok(bs)
    }

    /// The same block repeated.
    pub fn constant(block: SubspaceSystem, horizon: usize, tol: &Tolerances) -> Result<Self> {
        let n = block.len();
        Self::new("constant", n, horizon, Arc::new(move |_| block.clone()), tol)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Full-sum gaps of blocks `1..=horizon`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn block(&self, k: usize) -> SubspaceSystem {
        (self.generator)(k)
    }

    /// Smallest nonzero eigenvalue of `Σ_{j∈subset} Pⱼ` in blocks `1..=horizon`
    /// (`+∞` for a block where every selected member is zero).
    pub fn subset_gaps(&self, subset: &[usize], horizon: usize, tol: &Tolerances) -> Result<Vec<f64>> {
        check_subset(subset, self.n)?;
        let full = subset.len() == self.n;
        if full && horizon <= self.gaps.len() {
            return Ok(self.gaps[..horizon].to_vec());
        }
        (1..=horizon)
            .map(|k| {
                let b = self.block(k);
                if b.len() != self.n {
                    return Err(Error::DimensionMismatch { expected: self.n, found: b.len() });
                }
                block_gap(&b, subset, tol)
            })
            .collect()
    }
}

fn check_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("subset must be nonempty".into()));
    }
    for &j in subset {
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, len: n });
        }
    }
    Ok(())
}

fn block_gap(b: &SubspaceSystem, subset: &[usize], tol: &Tolerances) -> Result<f64> {
    let d = b.ambient_dim();
    let mut sum = CMatrix::zeros(d, d);
    for &j in subset {
        sum = &sum + &b.member(j - 1).projector();
    }
    let ev = eig_hermitian(&sum, tol)?.eigenvalues;
    let scale = ev.last().copied().unwrap_or(0.0).max(1.0);
    Ok(ev.into_iter().find(|&x| x > tol.rank_tol * scale).unwrap_or(f64::INFINITY))
}

/// Every nonempty subset of `{1..n}` with at most `n − 1` elements.
pub fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) - 1 {
        out.push((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosednessStatus {
    ClosedOnHorizon,
    GapVanishing,
    Inconclusive,
}

impl ClosednessStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosednessStatus::ClosedOnHorizon => "closed_on_horizon",
            ClosednessStatus::GapVanishing => "gap_vanishing",
            ClosednessStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Least-squares fit `ln gap ≈ intercept + slope · ln k` over `k_from..=k_to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trend {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual of the fit.
    pub residual: f64,
    pub k_from: usize,
    pub k_to: usize,
    /// Gaps are non-increasing over the fitted range.
    pub decreasing: bool,
}

impl Trend {
    pub fn describe(&self) -> String {
        alloc::format!(
            "gap ~ {:.4e} * k^({:.4}) over k = {}..{} (rms residual {:.2e})",
            self.intercept.exp(),
            self.slope,
            self.k_from,
            self.k_to,
            self.residual
        )
    }
}

/// Log-log fit over the top half `⌈K/2⌉..=K` of the horizon.
pub fn fit_trend(gaps: &[f64]) -> Trend {
    let big = gaps.len();
    let k_from = big.div_ceil(2).max(1);
    let pts: Vec<(f64, f64)> = (k_from..=big)
        .filter(|&k| gaps[k - 1].is_finite() && gaps[k - 1] > 0.0)
        .map(|k| ((k as f64).ln(), gaps[k - 1].ln()))
        .collect();
    let decreasing = (k_from..big).all(|k| gaps[k] <= gaps[k - 1] * (1.0 + 1e-12));
    let m = pts.len() as f64;
    let (slope, intercept, residual) = if pts.len() < 2 {
        (0.0, pts.first().map_or(0.0, |p| p.1), 0.0)
    } else {
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let intercept = my - slope * mx;
        let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (slope, intercept, (rss / m).sqrt())
    };
    Trend { slope, intercept, residual, k_from, k_to: big, decreasing }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosednessVerdict {
    pub status: ClosednessStatus,
    pub inf_gap: f64,
    pub trend: Trend,
    pub gaps: Vec<f64>,
}

/// Slope below which a decreasing gap sequence counts as vanishing.
pub const VANISHING_SLOPE: f64 = -0.25;
/// Slopes within this of zero count as flat.
pub const FLAT_SLOPE: f64 = 0.05;

/// Horizon-relative verdict for the sum of the members in `subset`
/// (1-based) over blocks `1..=horizon`.
///
/// `gap_vanishing`: the gap sequence decreases over the top half of the
/// horizon with log-log slope below [`VANISHING_SLOPE`], or its infimum is
/// below `margin_tol`. `closed_on_horizon`: infimum above `margin_tol` and
/// slope within [`FLAT_SLOPE`] of zero. Otherwise `inconclusive`.
pub fn certify(bs: &BlockSystem, subset: &[usize], horizon: usize, tol: &Tolerances) -> Result<ClosednessVerdict> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let gaps = bs.subset_gaps(subset, horizon, tol)?;
    let inf_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let trend = fit_trend(&gaps);
    let status = if inf_gap < tol.margin_tol || (trend.slope < VANISHING_SLOPE && trend.decreasing) {
        ClosednessStatus::GapVanishing
    } else if trend.slope.abs() <= FLAT_SLOPE {
        ClosednessStatus::ClosedOnHorizon
    } else {
        ClosednessStatus::Inconclusive
    };
    Ok(ClosednessVerdict { status, inf_gap, trend, gaps })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `Hⱼ = ⟨eⱼ⟩` for `j < n`, `Hₙ = ⟨e₁ + … + e_{n−1} + (1/k)eₙ⟩` in `Cⁿ`.
    OneOverK,
    /// Pair of lines in `C²` with `a = 1 − k^{−rate}`.
    HalmosAccumulating { rate: f64 },
    /// Three lines in `C²`: `e₂`, `e₁`, and `(√(1−a²), a)` with `a = k^{−rate}`.
    CompactTriple { rate: f64 },
}

impl Family {
    pub const NAMES: [&'static str; 3] = ["one_over_k", "halmos_accumulating", "compact_triple"];

    /// `rate` defaults to 1.
    pub fn parse(name: &str, rate: Option<f64>) -> Result<Self> {
        let rate = rate.unwrap_or(1.0);
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidArgument("rate must be positive".into()));
        }
        match name {
            "one_over_k" => Ok(Family::OneOverK),
            "halmos_accumulating" => Ok(Family::HalmosAccumulating { rate }),
            "compact_triple" => Ok(Family::CompactTriple { rate }),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::OneOverK => "one_over_k",
            Family::HalmosAccumulating { .. } => "halmos_accumulating",
            Family::CompactTriple { .. } => "compact_triple",
        }
    }

    /// Member count; `n` is only used by `one_over_k`.
    pub fn members(&self, n: usize) -> usize {
        match self {
            Family::OneOverK => n,
            Family::HalmosAccumulating { .. } => 2,
            Family::CompactTriple { .. } => 3,
        }
    }

    pub fn generator(&self, n: usize) -> Result<BlockGenerator> {
        let line = |v: &[f64]| {
            Subspace::from_spanning(&CMatrix::from_real(v.len(), 1, v), &Tolerances::default())
                .expect("nonzero generator vector")
        };
        let g: Box<dyn Fn(usize) -> SubspaceSystem + Send + Sync> = match *self {
            Family::OneOverK => {
                if n < 2 {
                    return Err(Error::InvalidArgument("one_over_k needs n >= 2".into()));
                }
                Box::new(move |k| {
                    let mut members: Vec<Subspace> = (0..n - 1).map(|j| Subspace::coordinate(n, &[j])).collect();
                    let mut v = vec![1.0; n];
                    v[n - 1] = 1.0 / k as f64;
                    members.push(line(&v));
                    SubspaceSystem::new(members).expect("nonempty block")
                })
            }
            Family::HalmosAccumulating { rate } => Box::new(move |k| {
                let a = 1.0 - (k as f64).powf(-rate);
                let h1 = Subspace::coordinate(2, &[0]);
                let h2 = line(&[a.sqrt(), (1.0 - a).max(0.0).sqrt()]);
                SubspaceSystem::new(vec![h1, h2]).expect("nonempty block")
            }),
            Family::CompactTriple { rate } => Box::new(move |k| {
                let a = (k as f64).powf(-rate);
                let h3 = line(&[(1.0 - a * a).max(0.0).sqrt(), a]);
                SubspaceSystem::new(vec![Subspace::coordinate(2, &[1]), Subspace::coordinate(2, &[0]), h3])
                    .expect("nonempty block")
            }),
        };
        Ok(Arc::from(g))
    }
}

/// Built-in family truncated at `horizon`.
pub fn block_family(family: Family, n: usize, horizon: usize, tol: &Tolerances) -> Result<BlockSystem> {
    let g = family.generator(n)?;
    BlockSystem::new(family.name(), family.members(n), horizon, g, tol)
}

#[derive(Clone, Debug)]
pub struct SumAsTwoBlock {
    pub m1: Subspace,
    pub m2: Subspace,
    /// Spectral split point of `√(ΣPⱼ)` on the sum.
    pub epsilon: f64,
    pub sum_dim: usize,
    /// `dim(M₁ + M₂) = dim ΣHⱼ`.
    pub rank_equal: bool,
    /// `M₁ + M₂` and `ΣHⱼ` contain each other.
    pub contained: bool,
    pub intersection_dim: usize,
}

#[derive(Clone, Debug)]
pub struct SumAsTwo {
    pub blocks: Vec<SumAsTwoBlock>,
    pub report: MarginReport,
}

/// Default spectral split point for [`sum_as_two`].
pub const SPLIT_POINT: f64 = 0.5;

/// Writes `ΣHⱼ = M₁ + M₂` blockwise.
///
/// With `A = √(ΣPⱼ)` on `W = ΣHⱼ`, `M₁` is the spectral subspace of `A` on
/// `[ε, ∞)` and `M₂ = {Bx + J(I − B)x}` over the spectral subspace on
/// `(0, ε)`, where `B` is `A` there and `J` sends the i-th small eigenvector
/// to the i-th large one. `ε` starts at [`SPLIT_POINT`] and is lowered so that
/// `J` is injective.
pub fn sum_as_two(bs: &BlockSystem, horizon: usize, tol: &Tolerances) -> Result<SumAsTwo> {
    let mut blocks = Vec::with_capacity(horizon);
    for k in 1..=horizon {
        blocks.push(sum_as_two_block(&bs.block(k), tol)?);
    }
    let mut report = MarginReport::new();
    report.flag("rank_equal", blocks.iter().all(|b| b.rank_equal));
    report.flag("contained", blocks.iter().all(|b| b.contained));
    let eps: Vec<f64> = blocks.iter().map(|b| b.epsilon).collect();
    report.value("epsilon_min", eps.iter().copied().fold(f64::INFINITY, f64::min));
    report.value("epsilon_max", eps.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    report.value("horizon", horizon as f64);
    Ok(SumAsTwo { blocks, report })
}

pub fn sum_as_two_block(b: &SubspaceSystem, tol: &Tolerances) -> Result<SumAsTwoBlock> {
    let d = b.ambient_dim();
    let w = b.sum_span(tol)?;
    let s = w.dim();
    let compressed = w.basis().adjoint_mul(&b.projector_sum().matmul(w.basis())).hermitian_part();
    let spec = eig_hermitian(&compressed, tol)?;
    let roots: Vec<f64> = spec.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    let mut small = roots.iter().filter(|&&r| r < SPLIT_POINT).count();
    let mut epsilon = SPLIT_POINT;
    if small > s / 2 {
        small = s / 2;
        epsilon = if small == 0 { roots[0] } else { 0.5 * (roots[small - 1] + roots[small]) };
    }
    let vecs = w.basis().matmul(&spec.eigenvectors);
    let large_idx: Vec<usize> = (small..s).collect();
    let m1 = Subspace::from_orthonormal(vecs.select_columns(&large_idx));
    let graph: Vec<Vec<_>> = (0..small)
        .map(|i| {
            let (u, v) = (vecs.column(i), vecs.column(small + i));
            u.iter().zip(&v).map(|(&x, &y)| x * roots[i] + y * c64(1.0 - roots[i], 0.0)).collect()
        })
        .collect();
    let m2 = if graph.is_empty() {
        Subspace::zero(d)
    } else {
        Subspace::from_spanning(&CMatrix::from_columns(d, &graph), tol)?
    };
    let both = sum_span(&[&m1, &m2], tol)?;
    let rank_equal = both.dim() == s;
    let contained = w.contains(&both, tol) && both.contains(&w, tol);
    let intersection_dim = m1.intersect(&m2, tol)?.dim();
    Ok(SumAsTwoBlock { m1, m2, epsilon, sum_dim: s, rank_equal, contained, intersection_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::friedrichs_angle;
    use crate::sample::simplex_lines;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn one_over_k_block_direction() {
        let bs = block_family(Family::OneOverK, 3, 5, &tol()).unwrap();
        let b = bs.block(2);
        let v = CMatrix::from_real(3, 1, &[1.0, 1.0, 0.5]);
        assert!(b.member(2).projector_distance(&Subspace::from_spanning(&v, &tol()).unwrap()) < 1e-14);
    }

    #[test]
    fn one_over_k_full_sum_vanishes() {
        let bs = block_family(Family::OneOverK, 3, 100, &tol()).unwrap();
        let v = certify(&bs, &[1, 2, 3], 100, &tol()).unwrap();
        assert_eq!(v.status, ClosednessStatus::GapVanishing);
        assert!(v.gaps[99] < 1e-3);
        for sub in proper_subsets(3) {
            let v = certify(&bs, &sub, 100, &tol()).unwrap();
            assert_eq!(v.status, ClosednessStatus::ClosedOnHorizon, "{sub:?}");
        }
    }

    #[test]
    fn constant_generator() {
        let block = simplex_lines(3);
        let bs = BlockSystem::constant(block, 10, &tol()).unwrap();
        let v = certify(&bs, &[1, 2, 3], 10, &tol()).unwrap();
        assert_eq!(v.inf_gap, bs.gaps()[0]);
        assert!((v.inf_gap - 1.5).abs() < 1e-12);
        assert_eq!(v.status, ClosednessStatus::ClosedOnHorizon);
    }

    #[test]
    fn halmos_block_angle() {
        let bs = block_family(Family::HalmosAccumulating { rate: 1.0 }, 2, 8, &tol()).unwrap();
        for k in 2..=8 {
            let b = bs.block(k);
            let ang = friedrichs_angle(b.member(0), b.member(1), &tol()).unwrap();
            let expect = (1.0 - 1.0 / k as f64).sqrt().acos();
            assert!((ang - expect).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(Family::parse("nope", None), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn sum_as_two_single_member() {
        let h = Subspace::coordinate(3, &[0, 2]);
        let bs = BlockSystem::constant(SubspaceSystem::new(vec![h.clone()]).unwrap(), 2, &tol()).unwrap();
        let r = sum_as_two(&bs, 2, &tol()).unwrap();
        for b in &r.blocks {
            assert!(b.m1.projector_distance(&h) < 1e-14);
            assert!(b.m2.is_zero());
        }
    }

    #[test]
    fn sum_as_two_one_over_k() {
        let bs = block_family(Family::OneOverK, 3, 20, &tol()).unwrap();
        let r = sum_as_two(&bs, 20, &tol()).unwrap();
        assert_eq!(r.report.get_flag("rank_equal"), Some(true));
        for b in &r.blocks {
            assert_eq!(b.intersection_dim + b.sum_dim, b.m1.dim() + b.m2.dim());
        }
    }
}
