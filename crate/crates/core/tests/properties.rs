//! Property tests for the algebraic invariants the counting pipeline
//! relies on.

use hermcount_core::algebra::{
    elements_with_norm_le, norm_census, units, OrderElement, ResidueRing, ScalarDomain,
};
use hermcount_core::counting::{count_ball, count_slab, count_slab_with_t_squared};
use hermcount_core::density::local_density;
use hermcount_core::forms::HermitianForm;
use hermcount_core::Budget;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn arb_domain() -> impl Strategy<Value = ScalarDomain> {
    prop_oneof![
        Just(ScalarDomain::real()),
        prop_oneof![Just(1u32), Just(2), Just(3), Just(7), Just(11), Just(43)]
            .prop_map(|d| ScalarDomain::imag_quad(d).unwrap()),
        Just(ScalarDomain::hurwitz()),
    ]
}

fn arb_element(domain: ScalarDomain) -> impl Strategy<Value = OrderElement> {
    let rank = domain.rank();
    proptest::collection::vec(-30i64..=30, rank)
        .prop_map(move |coords| OrderElement::from_coords(&coords))
}

proptest! {
    #[test]
    fn norm_is_multiplicative((dom, seed) in arb_domain().prop_flat_map(|d| {
        (Just(d), (arb_element(d), arb_element(d)))
    })) {
        let (x, y) = seed;
        prop_assert_eq!(dom.norm(&dom.mul(&x, &y)), dom.norm(&x) * dom.norm(&y));
    }

    #[test]
    fn conjugation_is_an_involution_with_integral_trace((dom, x) in arb_domain().prop_flat_map(|d| {
        (Just(d), arb_element(d))
    })) {
        prop_assert_eq!(dom.conj(&dom.conj(&x)), x);
        // x + conj(x) = 2 Re(x) as a rational integer element
        let sum = dom.add(&x, &dom.conj(&x));
        prop_assert_eq!(dom.as_rational_integer(&sum), Some(dom.trace(&x)));
        // norm(x) = x * conj(x)
        let prod = dom.mul(&x, &dom.conj(&x));
        prop_assert_eq!(dom.as_rational_integer(&prod), Some(dom.norm(&x) as i64));
    }

    #[test]
    fn residue_reduction_commutes((dom, x, y, pj) in arb_domain().prop_flat_map(|d| {
        (Just(d), arb_element(d), arb_element(d),
         prop_oneof![Just((3u64,1u32)), Just((3,2)), Just((5,1)), Just((7,2)), Just((11,1)), Just((2,3))])
    })) {
        let (p, j) = pj;
        if dom == ScalarDomain::hurwitz() && p == 2 {
            return Ok(());
        }
        let ring = ResidueRing::new(dom, p, j).unwrap();
        prop_assert_eq!(ring.reduce(&dom.mul(&x, &y)), ring.mul(&ring.reduce(&x), &ring.reduce(&y)));
        prop_assert_eq!(ring.reduce(&dom.add(&x, &y)), ring.add(&ring.reduce(&x), &ring.reduce(&y)));
        prop_assert_eq!(ring.reduce(&dom.conj(&x)), ring.conj(&ring.reduce(&x)));
    }

    #[test]
    fn census_equals_element_histogram((dom, bound) in (arb_domain(), 0u64..200)) {
        let bound = if dom == ScalarDomain::hurwitz() { bound.min(60) } else { bound };
        let elems = elements_with_norm_le(dom, bound, Budget::default()).unwrap();
        let census = norm_census(dom, bound, Budget::default()).unwrap();
        let mut hist = vec![0u64; bound as usize + 1];
        for e in &elems {
            hist[dom.norm(e) as usize] += 1;
        }
        let total: u64 = census.iter().sum();
        prop_assert_eq!(hist, census);
        prop_assert_eq!(total as usize, elems.len());
    }
}

fn form_pool() -> Vec<HermitianForm> {
    let gauss = ScalarDomain::imag_quad(1).unwrap();
    let eis = ScalarDomain::imag_quad(3).unwrap();
    let e = |a, b| gauss.element(&[a, b]).unwrap();
    vec![
        HermitianForm::lorentzian(ScalarDomain::real(), 2).unwrap(),
        HermitianForm::lorentzian(ScalarDomain::real(), 3).unwrap(),
        HermitianForm::diagonal(ScalarDomain::real(), &[1, 2], 3).unwrap(),
        HermitianForm::lorentzian(gauss, 2).unwrap(),
        HermitianForm::new(gauss, 2, vec![e(2, 0), e(1, 1), e(1, -1), e(3, 0)], 2).unwrap(),
        HermitianForm::lorentzian(eis, 2).unwrap(),
        HermitianForm::lorentzian(ScalarDomain::hurwitz(), 2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn whole_vector_unit_action_preserves_values(
        (idx, seeds) in (0usize..7, proptest::collection::vec(-6i64..=6, 16))
    ) {
        let pool = form_pool();
        let q = &pool[idx];
        let dom = q.domain();
        let rank = dom.rank();
        let x: Vec<OrderElement> = (0..=q.n())
            .map(|i| {
                let start = (i * rank) % (16 - rank);
                OrderElement::from_coords(&seeds[start..start + rank])
            })
            .collect();
        let value = q.evaluate(&x).unwrap();
        for eps in units(dom) {
            let xe: Vec<OrderElement> = x.iter().map(|c| dom.mul(c, &eps)).collect();
            prop_assert_eq!(q.evaluate(&xe).unwrap(), value);
        }
    }

    #[test]
    fn single_coordinate_units_preserve_diagonal_values(
        (idx, seeds, coord) in (0usize..7, proptest::collection::vec(-6i64..=6, 16), 0usize..4)
    ) {
        let pool = form_pool();
        let q = &pool[idx];
        if !q.is_diagonal() {
            return Ok(());
        }
        let dom = q.domain();
        let rank = dom.rank();
        let x: Vec<OrderElement> = (0..=q.n())
            .map(|i| {
                let start = (i * rank) % (16 - rank);
                OrderElement::from_coords(&seeds[start..start + rank])
            })
            .collect();
        let value = q.evaluate(&x).unwrap();
        let coord = coord % x.len();
        for eps in units(dom) {
            let mut xe = x.clone();
            xe[coord] = dom.mul(&xe[coord], &eps);
            prop_assert_eq!(q.evaluate(&xe).unwrap(), value);
        }
    }

    #[test]
    fn realified_form_evaluates_identically(
        (idx, seeds) in (0usize..7, proptest::collection::vec(-8i64..=8, 16))
    ) {
        let pool = form_pool();
        let q = &pool[idx];
        let rank = q.domain().rank();
        let xhat: Vec<OrderElement> = (0..q.n())
            .map(|i| {
                let start = (i * rank) % (16 - rank);
                OrderElement::from_coords(&seeds[start..start + rank])
            })
            .collect();
        let rf = q.realify().unwrap();
        let y = rf.coords_of(&xhat);
        prop_assert_eq!(rf.value_times_two(&y), 2 * q.a_value(&xhat).unwrap());
    }

    #[test]
    fn slab_ball_identity_exact((idx, k, s_num) in (0usize..6, 1u64..4, 1i64..20)) {
        let pool = form_pool();
        let q = &pool[idx];
        // s in halves: 1/2, 1, 3/2, ...
        let s = BigRational::new(BigInt::from(s_num), BigInt::from(2));
        let ball = count_ball(q, k, &s, Budget::default()).unwrap();
        let tsq = (&s * &s + BigRational::from_integer(BigInt::from(k)))
            / BigRational::from_integer(BigInt::from(2 * q.a()));
        let slab = count_slab_with_t_squared(q, k, &tsq, Budget::default()).unwrap();
        prop_assert_eq!(ball.total, slab.total);
    }

    #[test]
    fn unit_count_divides_totals((idx, k, t) in (0usize..7, 1u64..4, 1i64..6)) {
        let pool = form_pool();
        let q = &pool[idx];
        let r = count_slab(q, k, &BigRational::from_integer(BigInt::from(t)), Budget::default()).unwrap();
        let w = q.domain().unit_count() as u128;
        prop_assert_eq!(r.total % w, 0);
    }

    #[test]
    fn good_odd_primes_stabilize_at_depth_one((idx, k, pidx) in (0usize..6, 1u64..5, 0usize..6)) {
        let pool = form_pool();
        let q = &pool[idx];
        if q.domain() == ScalarDomain::hurwitz() || !q.is_diagonal() {
            // deep-j direct enumeration for non-diagonal blocks is budget-bound
            return Ok(());
        }
        let p = [3u64, 5, 7, 11, 13, 17][pidx];
        let det_a = q.det_a().unwrap().to_integer();
        let disc = q.domain().discriminant().unwrap().unsigned_abs();
        let divides = |n: &BigInt| (n % BigInt::from(p)) == BigInt::from(0);
        let product = BigInt::from(q.a()) * BigInt::from(k) * det_a * BigInt::from(disc);
        if divides(&product) {
            return Ok(()); // not a good prime for this configuration
        }
        let r = local_density(q, k, p, 6, Budget::default()).unwrap();
        prop_assert!(r.stabilized, "p={p} trace={:?}", r.trace);
        prop_assert_eq!(r.trace.len(), 2);
        prop_assert_eq!(&r.trace[0], &r.trace[1]);
    }
}
