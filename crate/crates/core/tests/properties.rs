//! Property suites for each module, 100 cases per property.

use corner_core::battery::{d_parameters, properties as props};
use corner_core::classify3::classify;
use corner_core::compress::{
    certify_b, certify_c, certify_d, corner_is_algebra, falsify, Require, Verdict,
};
use corner_core::exactnum::{parse_rational, GaussianRational as Q, Mat};
use corner_core::generators::{
    b_st, c_r, d_rst, family_3_1_1, family_3_1_2, family_3_1_6, family_3_2_2, family_3_2_5, family_3_2_9,
    lr_algebra, random_invertible, sample_idempotent, sample_projection, ProjectionTriple, SampleConfig, Stream,
};
use corner_core::Span;
use proptest::prelude::*;

const CASES: u32 = 100;

fn small_q() -> impl Strategy<Value = Q> {
    (-3i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, d)| &Q::gaussian(a, b) * &Q::ratio(1, d))
}

fn real_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, d)| Q::ratio(a, d))
}

fn mat(n: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(small_q(), n * n).prop_map(move |v| Mat::new(n, n, v).unwrap())
}

fn upper3() -> impl Strategy<Value = Mat> {
    proptest::collection::vec(-2i64..=2, 6).prop_map(|v| {
        let mut m = Mat::zeros(3, 3);
        let mut it = v.into_iter();
        for i in 0..3 {
            for j in i..3 {
                m.set(i, j, Q::from_int(it.next().unwrap()));
            }
        }
        m
    })
}

fn sample_cfg() -> SampleConfig {
    SampleConfig::default()
}

fn ok(r: corner_core::Result<bool>) -> bool {
    r.unwrap_or_else(|e| panic!("{e}"))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exactnum_products_associate(a in mat(3), b in mat(3), c in mat(3)) {
        prop_assert!(props::associativity(&a, &b, &c));
    }

    #[test]
    fn exactnum_rref_is_idempotent(a in mat(3)) {
        prop_assert!(props::rref_idempotent(&a));
    }

    #[test]
    fn exactnum_inverse_is_two_sided(a in mat(3)) {
        prop_assert!(props::inverse_is_two_sided(&a));
    }

    #[test]
    fn exactnum_anti_transpose_reverses_products(a in mat(3), b in mat(3)) {
        prop_assert!(ok(props::anti_transpose_laws(&a, &b)));
    }

    #[test]
    fn exactnum_scalars_round_trip_through_text(q in small_q()) {
        let back: Q = q.to_string().parse().unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn span_closure_is_idempotent(a in mat(3), b in mat(3)) {
        let s = Span::from_generators(3, 3, &[a, b]).unwrap();
        prop_assert!(ok(props::closure_laws(&s)));
    }

    #[test]
    fn span_corner_dimension_is_bounded(seed in any::<u64>(), idx in 0u64..1000, rank in 1usize..=3) {
        let s = props::random_m3_algebra(seed, idx).unwrap();
        let e = sample_idempotent(3, rank, &sample_cfg(), idx).unwrap();
        prop_assert!(ok(props::corner_dimension_bound(&s, &e)));
    }

    #[test]
    fn span_corners_commute_with_transpose(seed in any::<u64>(), idx in 0u64..1000) {
        let s = props::random_m3_algebra(seed, idx).unwrap();
        let e = sample_idempotent(3, 2, &sample_cfg(), idx).unwrap();
        prop_assert!(ok(props::corner_transpose_symmetry(&s, &e)));
    }

    #[test]
    fn span_unitization_keeps_algebra_corners(a in upper3(), b in upper3(), idx in 0u64..1000) {
        let s = Span::from_generators(3, 3, &[a, b]).unwrap().closure().unwrap();
        let e = sample_idempotent(3, 2, &sample_cfg(), idx).unwrap();
        prop_assert!(ok(props::unitization_monotone(&s, &e)));
    }

    #[test]
    fn span_rank_one_absorbs(
        x in proptest::collection::vec(small_q(), 3),
        y in proptest::collection::vec(small_q(), 3),
        r in mat(3),
    ) {
        prop_assume!(x.iter().any(|v| *v != Q::from_int(0)) && y.iter().any(|v| *v != Q::from_int(0)));
        prop_assert!(ok(props::rank_one_absorption(&x, &y, &r)));
    }

    #[test]
    fn span_trivial_corners_are_algebras(a in upper3(), b in upper3(), idx in 0u64..1000) {
        let e11 = Mat::unit(3, 0, 0);
        let s = Span::from_generators(3, 3, &[e11.clone(), a, b]).unwrap().closure().unwrap();
        let rank_one = sample_idempotent(3, 1, &sample_cfg(), idx).unwrap();
        prop_assert!(ok(props::trivial_corners(&s, &e11, &rank_one)));
    }

    #[test]
    fn generators_samples_are_idempotents_of_the_right_rank(n in 2usize..=4, idx in 0u64..10_000, seed in any::<u64>()) {
        let cfg = SampleConfig { seed, ..sample_cfg() };
        for r in 0..=n {
            prop_assert!(props::sampled_idempotent_ok(&sample_idempotent(n, r, &cfg, idx).unwrap(), r, false));
            prop_assert!(props::sampled_idempotent_ok(&sample_projection(n, r, &cfg, idx).unwrap(), r, true));
        }
    }

    #[test]
    fn generators_lr_algebras_absorb_middle_idempotents(rp in 1usize..=3, rq in 1usize..=3, idx in 0u64..1000) {
        let cfg = sample_cfg();
        let p = sample_projection(3, rp, &cfg, idx).unwrap();
        let q = sample_projection(3, rq, &cfg, idx + 1).unwrap();
        let e = sample_idempotent(3, 2, &cfg, idx).unwrap();
        prop_assert!(ok(props::lr_products_stay(&p, &q, &e)));
        prop_assert!(lr_algebra(&p, &q).unwrap().is_mult_closed().unwrap());
    }

    #[test]
    fn generators_canonical_forms_are_unital_and_three_dimensional(r in small_q(), s in small_q(), t in small_q()) {
        let mut spans = vec![b_st(&s, &t), d_rst(&r, &s, &t)];
        if r != Q::from_int(0) {
            spans.push(c_r(&r).unwrap());
        }
        for span in spans {
            prop_assert_eq!(span.dim(), 3);
            prop_assert!(span.contains_identity());
            prop_assert!(span.is_mult_closed().unwrap());
        }
    }

    #[test]
    fn compress_witnesses_are_sound(seed in any::<u64>(), idx in 0u64..1000) {
        let s = props::random_m3_algebra(seed, idx).unwrap();
        let cfg = SampleConfig { seed, count: 5, ..sample_cfg() };
        let report = falsify(&s, Require::Idempotent, &cfg).unwrap();
        if report.verdict == Verdict::Counterexample {
            let e = report.witness_e.unwrap();
            prop_assert!(!corner_is_algebra(&s, &e, Require::Idempotent).unwrap());
            prop_assert!(!s.compress(&e).unwrap().contains(&report.witness_product.unwrap()).unwrap());
        }
    }

    #[test]
    fn compress_compressible_families_have_algebra_corners(idx in 0u64..10_000, rank in 1usize..=3) {
        let t = ProjectionTriple::coordinate(3, 1, 1).unwrap();
        let e = sample_idempotent(3, rank, &sample_cfg(), idx).unwrap();
        let p = sample_projection(3, 2, &sample_cfg(), idx).unwrap();
        let q = sample_projection(3, 1, &sample_cfg(), idx).unwrap();
        let lr = lr_algebra(&p, &q).unwrap();
        let families = [
            family_3_1_1(&t, true),
            family_3_1_2(&t, true).unwrap(),
            family_3_1_6(&t, true).unwrap(),
            family_3_2_2(&t).unwrap(),
            family_3_2_5(&t).unwrap(),
            family_3_2_9(&t).unwrap(),
            lr.unitize().unwrap(),
            lr,
        ];
        for f in &families {
            prop_assert!(corner_is_algebra(f, &e, Require::Idempotent).unwrap());
        }
    }

    #[test]
    fn compress_certificates_hold_for_admissible_parameters(r in real_q(), s in real_q(), t in real_q()) {
        let k = (1i64..).map(|n| parse_rational(&n.to_string()).unwrap())
            .find(|k| Q::real(k.clone()) != s && Q::real(k.clone()) != t)
            .unwrap();
        let b = certify_b(&s, &t, &k).unwrap();
        prop_assert!(b.identity_lhs == b.identity_rhs && !b.product_in_corner);
        if r != Q::from_int(0) {
            let c = certify_c(&r).unwrap();
            prop_assert!(c.identity_lhs == c.identity_rhs && !c.product_in_corner);
        }
        if let Some((k, m)) = d_parameters(&r, &s, &t) {
            let d = certify_d(&r, &s, &t, &k, &m).unwrap();
            prop_assert!(d.identity_lhs == d.identity_rhs && !d.product_in_corner);
        }
    }

    #[test]
    fn structure_block_sizes_survive_similarity(seed in any::<u64>(), idx in 0u64..1000) {
        let s = props::random_m3_algebra(seed, idx).unwrap();
        let (sim, _) = random_invertible(3, &SampleConfig { seed, ..sample_cfg() }, Stream::Similarity, idx).unwrap();
        prop_assert!(ok(props::conjugation_keeps_blocks(&s, &sim)));
    }

    #[test]
    fn structure_unhinged_forms_split(seed in any::<u64>(), idx in 0u64..1000) {
        let s = props::random_m3_algebra(seed, idx).unwrap();
        prop_assert!(ok(props::unhinged_form_laws(&s)));
    }

    #[test]
    fn structure_module_projections_round_trip(n in 2usize..=4, rank in 1usize..=3, idx in 0u64..10_000) {
        prop_assume!(rank < n);
        let q = sample_projection(n, rank, &sample_cfg(), idx).unwrap();
        prop_assert!(ok(props::module_round_trip(&q)));
    }

    #[test]
    fn classify_is_total_and_invariant(seed in any::<u64>(), idx in 0u64..1000) {
        let s = props::random_m3_algebra(seed, idx).unwrap();
        let (sim, _) = random_invertible(3, &SampleConfig { seed, ..sample_cfg() }, Stream::Similarity, idx).unwrap();
        prop_assert!(classify(&s).is_ok());
        prop_assert!(ok(props::classification_invariance(&s, &sim)));
    }
}
