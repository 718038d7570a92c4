use std::time::Instant;

use mahlercf::arith::{int, RatPoly};
use mahlercf::contfrac::{expand_family, PrecisionPolicy};
use mahlercf::laurent::{rate_of_approximation, series, SeriesKind};
use mahlercf::structure::{
    bzz_beta, lemma33_map, rational_equivalence_window, theorem1_classify, theorem2_sequence, transport,
    verify_identity, wellapprox_witness, Direction, FamilyData, Identity, Origin, StructureError,
};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn p(c: &[i64]) -> RatPoly {
    RatPoly::from_i64s(c)
}

#[test]
fn transport_of_first_convergents() {
    for d in [2u32, 3] {
        let data = FamilyData::compute(d, 8).unwrap();
        for (t, conv) in data.h.convergents.iter().enumerate().take(4) {
            let r = transport(d, Origin::H, conv, &data.g_series).unwrap();
            assert!(r.measured_rate >= r.claimed_rate_lower_bound, "d={d} H t={t}");
        }
        for (t, conv) in data.u.convergents.iter().enumerate().take(4) {
            let r = transport(d, Origin::U, conv, &data.g_series).unwrap();
            assert!(r.measured_rate >= r.claimed_rate_lower_bound, "d={d} U t={t}");
        }
    }
}

#[test]
fn lemma33_round_trip() {
    let h = series(2, SeriesKind::H, -80).unwrap();
    let u = series(2, SeriesKind::U, -80).unwrap();
    let (cf, _) = expand_family(2, SeriesKind::U, 6, PrecisionPolicy::default()).unwrap();
    for c in &cf.convergents {
        let rate = c.rate.unwrap() as i64;
        let (hp, hq, hr) = lemma33_map(Direction::UToH, &c.p, &c.q, rate, &h).unwrap();
        assert!(hr >= rate - 1);
        let (_, _, ur) = lemma33_map(Direction::HToU, &hp, &hq, hr, &u).unwrap();
        assert!(ur >= hr - 1);
    }
}

#[test]
fn every_convergent_has_a_source() {
    for (d, n) in [(2u32, 200usize), (3, 200)] {
        let start = Instant::now();
        let data = FamilyData::compute(d, n).unwrap();
        for m in 0..=n {
            let c = theorem1_classify(&data, m).unwrap();
            assert_eq!(c.origin, if m % 2 == 0 { Origin::H } else { Origin::U });
            let r = transport(d, c.origin, &c.source, &data.g_series).unwrap();
            let target = &data.g.convergents[m];
            let c = target.q.leading_coeff().unwrap() / r.result_q.leading_coeff().unwrap();
            assert_eq!(r.result_q.scale(&c), target.q, "d={d} m={m}");
            assert_eq!(r.result_p.scale(&c), target.p, "d={d} m={m}");
        }
        eprintln!("classification d={d} n={n}: {:?}", start.elapsed());
    }
}

#[test]
fn recurrence_shape_to_200() {
    let out = theorem2_sequence(2, 200).unwrap();
    assert!(out.betas.betas[2..].iter().all(|b| !b.is_zero()));
    let out3 = theorem2_sequence(3, 200).unwrap();
    assert_eq!(out3.betas.betas[2], int(2));
}

#[test]
fn closed_recurrence_matches_oracle() {
    let oracle = theorem2_sequence(2, 300).unwrap().betas.betas;
    assert_eq!(bzz_beta(300).unwrap(), oracle);
    assert!(matches!(bzz_beta(3), Err(StructureError::InvalidParameter(_))));
}

#[test]
fn d3_degrees_skip_one_mod_three() {
    let out = theorem2_sequence(3, 200).unwrap();
    for (n, q) in out.monic_denominators.iter().enumerate() {
        let k = q.deg().unwrap();
        assert_ne!(k % 3, 1, "n={n} deg={k}");
        let want = if n % 2 == 0 { 3 * n / 2 } else { 3 * (n - 1) / 2 + 2 };
        assert_eq!(k, want, "n={n}");
    }
}

#[test]
fn linear_quotients_of_h_and_u() {
    for d in [2u32, 3] {
        for kind in [SeriesKind::H, SeriesKind::U] {
            let (cf, _) = expand_family(d, kind, 200, PrecisionPolicy::default()).unwrap();
            for (i, a) in cf.partial_quotients.iter().enumerate().skip(1) {
                assert_eq!(a.deg(), Some(1), "d={d} {kind:?} a_{i}");
            }
        }
    }
}

#[test]
fn identity_reports_pass() {
    for (id, d, hi) in [
        (Identity::Funceq, 2, 100),
        (Identity::Lemma5, 3, 20),
        (Identity::Prop2, 3, 20),
        (Identity::PropSum3, 3, 20),
        (Identity::PropBk, 3, 20),
        (Identity::Bzz, 2, 200),
        (Identity::Theorem1, 3, 40),
    ] {
        let r = verify_identity(id, d, 0, hi).unwrap();
        assert_eq!(r.status, "pass", "{id}: {:?}", r.failures);
    }
}

#[test]
fn large_degree_quotients_for_d_at_least_4() {
    let r = wellapprox_witness(4, 3, 10).unwrap();
    let rates: Vec<i64> = r.rates.iter().map(|x| x.measured).collect();
    assert_eq!(rates, vec![2, 6, 22, 86]);
    assert_eq!(r.first_large_quotient, Some((6, 5)));
    let r5 = wellapprox_witness(5, 3, 8).unwrap();
    assert_eq!(r5.rates.iter().map(|x| x.measured).collect::<Vec<_>>(), vec![3, 13, 63, 313]);
    for d in 4..=6 {
        assert!(matches!(theorem2_sequence(d, 20), Err(StructureError::ShapeViolation(_))), "d={d}");
    }
}

#[test]
fn zero_and_one_are_poor_approximations() {
    let g = series(2, SeriesKind::G, -40).unwrap();
    assert_eq!(rate_of_approximation(&g, &RatPoly::zero(), &RatPoly::one()).unwrap(), 1);
    let w = rational_equivalence_window(2, &p(&[1, 1]), &p(&[2, 0, 1]), 30).unwrap();
    assert!(w.max_degree_scaled <= w.max_degree_g + w.shift);
    assert!(w.max_degree_g <= w.max_degree_scaled + w.shift);
}

proptest! {
    #![proptest_config(Config { cases: 10, rng_seed: RngSeed::Fixed(0x57C), failure_persistence: None, ..Config::default() })]

    #[test]
    fn rational_multiples_stay_badly_approximable(
        d in 2u32..=3,
        a in prop::collection::vec(-4i64..5, 1..4),
        b in prop::collection::vec(-4i64..5, 1..4),
    ) {
        let a = RatPoly::from_i64s(&a);
        let b = RatPoly::from_i64s(&b);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let w = rational_equivalence_window(d, &a, &b, 10).unwrap();
        prop_assert!(w.max_degree_scaled <= w.max_degree_g + w.shift);
        prop_assert!(w.max_degree_g < d as usize);
    }
}
