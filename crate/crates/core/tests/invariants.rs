use proptest::prelude::*;

use subclosure_core::blockmodel::{certify, block_family, sum_as_two, Family};
use subclosure_core::images::{
    douglas_factor, p_radius, product_fixed_space, product_operator, quadratic_projector_criterion, sum_of_images,
    BetaClass, OperatorFamily, DEFAULT_BUDGET,
};
use subclosure_core::numerics::{
    c64, eig_hermitian, eigenvalues, multiset_distance, norm2, real_multiset_distance, spectral_projector, svd, CMatrix,
    Tolerances, C64,
};
use subclosure_core::paircalc::{build_b, spectrum_of_b, CalculusProfile, FunctionQuad, ScalarFunction};
use subclosure_core::pairs::{friedrichs_angle, halmos_decompose, pair_criteria};
use subclosure_core::reduction::{
    independence_certificate, oblique_projections, reduce_preserving_sum, reduce_system,
};
use subclosure_core::sample::Sampler;
use subclosure_core::subspace::{sum_span, Subspace, SubspaceSystem};
use subclosure_core::systems::{complement_graph_margin, dilation, sum_gap_values, PhaseSearch, WeightedGraph};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn eig_tol() -> f64 {
    tol().eig_tol
}

fn hermitian(s: &mut Sampler, d: usize) -> CMatrix {
    s.matrix(d, d).hermitian_part()
}

fn random_dims(s: &mut Sampler, n: usize, d: usize) -> Vec<usize> {
    (0..n).map(|_| 1 + s.below(d.max(2) - 1)).collect()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

// numerics

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn hermitian_norm_is_largest_eigenvalue_modulus(seed in any::<u64>(), d in 1usize..10) {
        let m = hermitian(&mut Sampler::new(seed), d);
        let spec = eig_hermitian(&m, &tol()).unwrap();
        let top = spec.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        prop_assert!((top - norm2(&m)).abs() <= eig_tol() * norm2(&m).max(1.0));
    }

    #[test]
    fn computed_projectors_are_orthogonal_idempotents(seed in any::<u64>(), d in 2usize..10, cut in -1.0f64..1.0) {
        let mut s = Sampler::new(seed);
        let m = hermitian(&mut s, d);
        let r1 = 1 + s.below(d);
        let mut ps = vec![s.subspace(d, r1).projector()];
        if let Ok(p) = spectral_projector(&m, f64::NEG_INFINITY..cut, &tol()) {
            ps.push(p);
        }
        let r2 = 1 + s.below(d);
        ps.push(s.subspace(d, r2).complement(&tol()).unwrap().projector());
        for p in ps {
            prop_assert!(norm2(&(&p.matmul(&p) - &p)) <= 10.0 * eig_tol());
            prop_assert!(norm2(&(&p - &p.adjoint())) <= 10.0 * eig_tol());
        }
    }

    #[test]
    fn svd_matches_gram_eigenvalues(seed in any::<u64>(), r in 1usize..9, c in 1usize..9) {
        let m = Sampler::new(seed).matrix(r, c);
        let sv = svd(&m, &tol()).unwrap();
        let mut sq: Vec<f64> = sv.sigma.iter().map(|x| x * x).collect();
        sq.resize(c, 0.0);
        let ev = eig_hermitian(&m.adjoint_mul(&m), &tol()).unwrap().eigenvalues;
        prop_assert!(real_multiset_distance(&ev, &sq) <= eig_tol() * norm2(&m).powi(2).max(1.0));
    }
}

// subspaces

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn complement_projector(seed in any::<u64>(), d in 1usize..10, r in 0usize..10) {
        let h = Sampler::new(seed).subspace(d, r.min(d));
        let c = h.complement(&tol()).unwrap();
        let expect = &CMatrix::identity(d) - &h.projector();
        prop_assert!(norm2(&(&c.projector() - &expect)) <= 10.0 * eig_tol());
    }

    #[test]
    fn sum_contains_summands(seed in any::<u64>(), d in 2usize..12) {
        let (a, b) = Sampler::new(seed).structured_pair(d);
        let s = sum_span(&[&a, &b], &tol()).unwrap();
        prop_assert!(s.contains(&a, &tol()));
        prop_assert!(s.contains(&b, &tol()));
    }

    #[test]
    fn dimension_law(seed in any::<u64>(), d in 2usize..12) {
        let (a, b) = Sampler::new(seed).structured_pair(d);
        let i = a.intersect(&b, &tol()).unwrap();
        let s = sum_span(&[&a, &b], &tol()).unwrap();
        prop_assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
    }
}

// pairs

fn spectrum_away_from_0_1(v: &[C64]) -> Vec<C64> {
    v.iter().copied().filter(|z| z.norm() > 1e-7 && (z - c64(1.0, 0.0)).norm() > 1e-7).collect()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn pair_norm_identity(seed in any::<u64>(), d in 2usize..12) {
        let (h1, h2) = Sampler::new(seed).structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let q = dec.both.projector();
        let (p1, p2) = (h1.projector(), h2.projector());
        let lhs = norm2(&(&p1.matmul(&p2) - &q)).powi(2);
        let rhs = norm2(&(&p1.matmul(&p2).matmul(&p1) - &q));
        prop_assert!((lhs - rhs).abs() <= 10.0 * eig_tol());
    }

    #[test]
    fn pair_product_spectrum(seed in any::<u64>(), d in 2usize..12) {
        let (h1, h2) = Sampler::new(seed).structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let prod = eigenvalues(&h1.projector().matmul(&h2.projector())).unwrap();
        let a: Vec<C64> = dec.a.iter().map(|&x| c64(x, 0.0)).collect();
        let dist = multiset_distance(&spectrum_away_from_0_1(&prod), &spectrum_away_from_0_1(&a));
        prop_assert!(dist <= eig_tol(), "distance {dist:e}");
    }

    #[test]
    fn friedrichs_angle_cosine(seed in any::<u64>(), d in 2usize..12) {
        let (h1, h2) = Sampler::new(seed).structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        if let Some(&top) = dec.a.last() {
            let g = friedrichs_angle(&h1, &h2, &tol()).unwrap();
            prop_assert!((g.cos().powi(2) - top).abs() <= 1e-8);
        }
    }

    #[test]
    fn complement_symmetry_of_generic_gap(seed in any::<u64>(), d in 2usize..12) {
        let (h1, h2) = Sampler::new(seed).structured_pair(d);
        let r = pair_criteria(&h1, &h2, &tol()).unwrap();
        let (c1, c4) = (r.margin("c1_generic_gap").unwrap(), r.margin("c4_complement_generic_gap").unwrap());
        prop_assert!(c1 == c4 || (c1 - c4).abs() <= 10.0 * eig_tol(), "{c1} vs {c4}");
    }

    #[test]
    fn halmos_reconstruction(seed in any::<u64>(), d in 2usize..12) {
        let (h1, h2) = Sampler::new(seed).structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let (p1, p2) = dec.reconstruct();
        prop_assert!(norm2(&(&p1 - &h1.projector())) <= 10.0 * eig_tol());
        prop_assert!(norm2(&(&p2 - &h2.projector())) <= 10.0 * eig_tol());
    }
}

// paircalc

fn random_poly(s: &mut Sampler) -> ScalarFunction {
    let deg = s.below(4);
    ScalarFunction::Polynomial((0..=deg).map(|_| s.complex_normal()).collect())
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn closed_form_spectrum_matches_dense(seed in any::<u64>(), d in 2usize..13) {
        let mut s = Sampler::new(seed);
        let (h1, h2) = s.structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let q = FunctionQuad::new(random_poly(&mut s), random_poly(&mut s), random_poly(&mut s), random_poly(&mut s));
        let b = build_b(&dec, &q);
        let dense = eigenvalues(&b).unwrap();
        let closed = spectrum_of_b(&dec, &q);
        let scale = b.frobenius_norm().max(1.0);
        let dist = multiset_distance(&dense, &closed);
        prop_assert!(dist <= 1e-6 * scale, "distance {dist:e}");
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn constant_trace_symmetry(seed in any::<u64>(), d in 2usize..10) {
        let mut s = Sampler::new(seed);
        let (h1, h2) = s.structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let c = s.complex_normal();
        let (f2, f3, f4) = (random_poly(&mut s), random_poly(&mut s), random_poly(&mut s));
        // f₁ = c − f₂ − x(f₃ + f₄) makes T ≡ c
        let p = |f: &ScalarFunction| f.coefficients().unwrap().to_vec();
        let (p2, p3, p4) = (p(&f2), p(&f3), p(&f4));
        let len = p2.len().max(p3.len().max(p4.len()) + 1);
        let mut p1 = vec![C64::default(); len];
        p1[0] += c;
        for (i, z) in p2.iter().enumerate() {
            p1[i] -= z;
        }
        for i in 0..p3.len().max(p4.len()) {
            p1[i + 1] -= p3.get(i).copied().unwrap_or_default() + p4.get(i).copied().unwrap_or_default();
        }
        let f1 = ScalarFunction::Polynomial(p1);
        let q = FunctionQuad::new(f1.clone(), f2.clone(), f3, f4);
        let profile = CalculusProfile::new(&q, &tol());
        prop_assert!(profile.c.is_some());
        let spec = spectrum_of_b(&dec, &q);
        let skip = [C64::default(), f1.eval(0.0), f2.eval(0.0), c];
        let keep: Vec<C64> = spec.into_iter().filter(|z| skip.iter().all(|w| (z - w).norm() > 1e-6)).collect();
        let mirrored: Vec<C64> = keep.iter().map(|z| c - z).collect();
        prop_assert!(multiset_distance(&keep, &mirrored) <= 1e-8);
    }

    #[test]
    fn projector_sum_quad_matches_sum_gap(seed in any::<u64>(), d in 2usize..10) {
        let (h1, h2) = Sampler::new(seed).structured_pair(d);
        let dec = halmos_decompose(&h1, &h2, &tol()).unwrap();
        let spec = spectrum_of_b(&dec, &FunctionQuad::projector_sum());
        let min_nonzero = spec.iter().map(|z| z.norm()).filter(|&x| x > 1e-9).fold(f64::INFINITY, f64::min);
        let sys = SubspaceSystem::new(vec![h1, h2]).unwrap();
        match sum_gap_values(&sys, &tol()).unwrap().gap {
            Some(g) => prop_assert!((g - min_nonzero).abs() <= 10.0 * eig_tol()),
            None => prop_assert!(min_nonzero.is_infinite()),
        }
    }
}

// systems

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn gap_with_zero_kernel_iff_full(seed in any::<u64>(), d in 2usize..7, n in 1usize..5) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        let g = sum_gap_values(&sys, &tol()).unwrap();
        let full = sys.sum_span(&tol()).unwrap().dim() == d;
        prop_assert_eq!(g.gap.is_some() && g.full, full);
    }

    #[test]
    fn dilation_spectral_relation(seed in any::<u64>(), d in 2usize..6, n in 2usize..4) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        let (pd, ph) = dilation(&sys);
        let lhs = eig_hermitian(&pd.matmul(&ph).matmul(&pd).hermitian_part(), &tol()).unwrap().eigenvalues;
        let rhs = eig_hermitian(&sys.projector_sum().scale_real(1.0 / n as f64), &tol()).unwrap().eigenvalues;
        let nz = |v: Vec<f64>| v.into_iter().filter(|x| x.abs() > 1e-9).collect::<Vec<_>>();
        prop_assert!(real_multiset_distance(&nz(lhs), &nz(rhs)) <= eig_tol());
    }

    #[test]
    fn complete_graph_margin_iff_full(seed in any::<u64>(), d in 2usize..6, n in 2usize..4) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        let r = complement_graph_margin(&sys, &WeightedGraph::complete(n), &tol(), &PhaseSearch::default()).unwrap();
        let full = sys.sum_span(&tol()).unwrap().dim() == d;
        prop_assert_eq!(r.margin("difference_form").unwrap() > 1e-8, full);
    }

    #[test]
    fn adding_an_edge_never_decreases_margin(seed in any::<u64>(), d in 2usize..6, n in 3usize..5) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        let path = WeightedGraph::path(n);
        let more = path.with_edge(0, n - 1, 1.0).unwrap();
        let ps = PhaseSearch::default();
        let a = complement_graph_margin(&sys, &path, &tol(), &ps).unwrap().margin("difference_form").unwrap();
        let b = complement_graph_margin(&sys, &more, &tol(), &ps).unwrap().margin("difference_form").unwrap();
        prop_assert!(b >= a - 10.0 * eig_tol());
    }
}

// reduction

/// Random local search for `min ‖Σxᵢ‖²` over `Σ‖xᵢ‖² = 1`, `xᵢ ∈ Hᵢ`.
fn brute_force_epsilon(sys: &SubspaceSystem, s: &mut Sampler, evals: usize) -> f64 {
    let g = sys.concatenation();
    let m = g.cols();
    let value = |y: &[C64]| {
        let n2: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        g.mul_vec(y).iter().map(|z| z.norm_sqr()).sum::<f64>() / n2
    };
    let mut best_y = s.vector(m);
    let mut best = value(&best_y);
    let mut step = 1.0;
    for i in 0..evals {
        let cand: Vec<C64> = if i % 10 == 0 {
            s.vector(m)
        } else {
            best_y.iter().map(|z| z + s.complex_normal() * step).collect()
        };
        let v = value(&cand);
        if v < best {
            best = v;
            best_y = cand;
        } else if i % 10 != 0 {
            step = (step * 0.995).max(1e-6);
        }
    }
    best
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn certificate_matches_brute_force(seed in any::<u64>(), d in 3usize..6, n in 2usize..4) {
        let mut s = Sampler::new(seed);
        let dims: Vec<usize> = (0..n).map(|_| 1 + s.below(d / n)).collect();
        let sys = s.system(d, &dims);
        let cert = independence_certificate(&sys, &tol()).unwrap();
        let oracle = brute_force_epsilon(&sys, &mut s, 20_000);
        prop_assert!(oracle >= cert.epsilon * (1.0 - 1e-9));
        prop_assert!(oracle <= cert.epsilon * 1.05 + 1e-12, "oracle {oracle} vs {}", cert.epsilon);
    }

    #[test]
    fn hereditary_independence(seed in any::<u64>(), d in 3usize..8, n in 2usize..5) {
        let mut s = Sampler::new(seed);
        let dims: Vec<usize> = (0..n).map(|_| 1 + s.below((d / n).max(1))).collect();
        let sys = s.system(d, &dims);
        let eps = independence_certificate(&sys, &tol()).unwrap().epsilon;
        for drop in 0..n {
            let idx: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
            let sub = independence_certificate(&sys.subsystem(&idx).unwrap(), &tol()).unwrap().epsilon;
            prop_assert!(sub >= eps - 10.0 * eig_tol());
        }
    }

    #[test]
    fn oblique_projections_resolve_identity(seed in any::<u64>(), d in 2usize..8) {
        let mut s = Sampler::new(seed);
        let mut dims = Vec::new();
        let mut left = d;
        while left > 0 {
            let r = 1 + s.below(left);
            dims.push(r);
            left -= r;
        }
        let sys = s.independent_system(d, &dims);
        let qs = oblique_projections(&sys, &tol()).unwrap();
        let mut sum = CMatrix::zeros(d, d);
        for q in &qs {
            sum = &sum + q;
        }
        let scale = qs.iter().map(norm2).fold(1.0, f64::max).powi(2);
        prop_assert!(norm2(&(&sum - &CMatrix::identity(d))) <= 10.0 * eig_tol() * scale);
        for i in 0..qs.len() {
            for j in 0..qs.len() {
                if i != j {
                    prop_assert!(norm2(&qs[i].matmul(&qs[j])) <= 10.0 * eig_tol() * scale);
                }
            }
        }
    }
}

fn containment(h: &Subspace, m: &Subspace) -> f64 {
    norm2(&(&m.basis().clone() - &h.projector().matmul(m.basis())))
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn reductions_shrink_and_certify(seed in any::<u64>(), d in 2usize..6, n in 2usize..5) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        for r in [reduce_system(&sys, &tol()), reduce_preserving_sum(&sys, &tol())] {
            let r = match r {
                Ok(r) => r,
                Err(subclosure_core::Error::GapTooSmall { .. }) => continue,
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            };
            for (h, m) in sys.members().iter().zip(r.reduced.members()) {
                prop_assert!(containment(h, m) <= eig_tol());
            }
            prop_assert!(r.certificate.slack >= -tol().margin_tol);
            prop_assert!(r.certificate.statement_slack >= -tol().margin_tol);
        }
        let r = reduce_preserving_sum(&sys, &tol()).unwrap();
        prop_assert!(r.sum_preserved);
        prop_assert!(r.independence.independent);
    }
}

// images

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn douglas_contracts(seed in any::<u64>(), d in 2usize..7, rb in 1usize..7, c in 1usize..5) {
        let mut s = Sampler::new(seed);
        let rb = rb.min(d);
        // B of rank rb with a kernel when rb < d
        let b = s.matrix(d, rb).matmul(&s.matrix(rb, d));
        let a = b.matmul(&s.matrix(d, c));
        let f = douglas_factor(&a, &b, &tol()).unwrap();
        let scale = norm2(&a).max(1.0) * norm2(&f.c).max(1.0);
        prop_assert!(f.residual <= 1e-8 * scale);
        prop_assert!(f.kernel_distance <= 1e-8);
        prop_assert!(f.image_residual <= 1e-8 * scale);
        // AA* ≤ λBB*
        let gap = &b.gram_outer().scale_real(f.lambda) - &a.gram_outer();
        let min = eig_hermitian(&gap.hermitian_part(), &tol()).unwrap().eigenvalues[0];
        prop_assert!(min >= -1e-8 * scale * scale);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn sum_of_images_range_equality(seed in any::<u64>(), d in 2usize..7, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let members: Vec<CMatrix> = (0..n)
            .map(|_| {
                let r = 1 + s.below(d);
                s.matrix(d, r).matmul(&s.matrix(r, d))
            })
            .collect();
        let f = OperatorFamily::general(members, &tol()).unwrap();
        let (_, r) = sum_of_images(&f, &tol()).unwrap();
        prop_assert!(r.get_value("range_distance").unwrap() <= 10.0 * eig_tol());
    }

    #[test]
    fn p_radius_submultiplicative(seed in any::<u64>(), d in 2usize..4, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        let f = OperatorFamily::projectors(&sys, &tol()).unwrap();
        let r = p_radius(&f, 2.0, 4, DEFAULT_BUDGET, &tol()).unwrap();
        prop_assert!(r.roots[1] <= r.roots[0] + eig_tol());
        prop_assert!(r.roots[3] <= r.roots[1] + eig_tol());
    }

    #[test]
    fn positive_definite_beta_equivalence(seed in any::<u64>(), d in 2usize..6, n in 2usize..4) {
        let mut s = Sampler::new(seed);
        let dims = random_dims(&mut s, n, d);
        let sys = s.system(d, &dims);
        // diagonally dominant α gives positive definite B
        let mut alpha = CMatrix::from_fn(n, n, |_, _| s.complex_normal().scale(0.2));
        for i in 0..n {
            alpha[(i, i)] = c64(1.0 + s.uniform(), 0.0);
        }
        let (beta, r) = quadratic_projector_criterion(&sys, &alpha, &tol()).unwrap();
        prop_assume!(beta.class == BetaClass::PositiveDefinite);
        let range_eq = r.get_flag("range_equals_sum").unwrap();
        let closed = r.margin("closed_range").unwrap() > tol().margin_tol;
        prop_assert_eq!(range_eq, closed);
    }

    #[test]
    fn fixed_vectors_of_product_are_common_kernel(seed in any::<u64>(), d in 2usize..6, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let members: Vec<CMatrix> = (0..n)
            .map(|_| {
                let r = s.below(d);
                let h = s.subspace(d, r);
                h.projector().scale_real(0.3 + 1.5 * s.uniform())
            })
            .collect();
        let f = OperatorFamily::nonnegative(members, &tol()).unwrap();
        let (fixed, worst) = product_fixed_space(&f, &tol()).unwrap();
        let e = product_operator(&f);
        if !fixed.is_zero() {
            let ex = norm2(&e.matmul(fixed.basis()));
            prop_assert!((ex - 1.0).abs() <= 1e-6);
            prop_assert!(worst <= 10.0 * eig_tol());
        }
    }
}

// blockmodel

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn certify_monotone_in_horizon(k in 1usize..60, fam in 0usize..3) {
        let family = Family::parse(Family::NAMES[fam], None).unwrap();
        let bs = block_family(family, 3, 1, &tol()).unwrap();
        let all: Vec<usize> = (1..=bs.n()).collect();
        let a = certify(&bs, &all, k, &tol()).unwrap().inf_gap;
        let b = certify(&bs, &all, k + 1, &tol()).unwrap().inf_gap;
        prop_assert!(b <= a);
    }

    #[test]
    fn sum_as_two_dimension_law(fam in 0usize..3, n in 2usize..5) {
        let family = Family::parse(Family::NAMES[fam], None).unwrap();
        let bs = block_family(family, n, 1, &tol()).unwrap();
        let r = sum_as_two(&bs, 25, &tol()).unwrap();
        for b in &r.blocks {
            prop_assert_eq!(b.intersection_dim + b.sum_dim, b.m1.dim() + b.m2.dim());
        }
    }
}

#[test]
fn one_over_k_gap_decays_like_inverse_square() {
    let bs = block_family(Family::OneOverK, 3, 100, &tol()).unwrap();
    // dense-eig oracle per block
    let pts: Vec<(f64, f64)> = (10..=100)
        .map(|k| {
            let b = bs.block(k);
            let ev = eig_hermitian(&b.projector_sum(), &tol()).unwrap().eigenvalues;
            ((k as f64).ln(), ev[0].ln())
        })
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((-2.2..=-1.8).contains(&slope), "slope {slope}");
    for (k, &(_, lg)) in (10..=100).zip(&pts) {
        assert!((bs.gaps()[k - 1] - lg.exp()).abs() <= 1e-12);
    }
}

#[test]
fn friedrichs_angle_of_lines() {
    let x = Subspace::coordinate(2, &[0]);
    let diag = Subspace::from_spanning(&CMatrix::from_real(2, 1, &[1.0, 1.0]), &tol()).unwrap();
    let g = friedrichs_angle(&x, &diag, &tol()).unwrap();
    assert!((g - std::f64::consts::FRAC_PI_4).abs() <= 1e-10);
}
