use mahlercf::arith::{int, rat, RatPoly, Rational};
use mahlercf::laurent::{
    finite_product, generate_series, rate_of_approximation, series, verify_functional_equations, LaurentError,
    SeriesDegree, SeriesFamily, SeriesKind, TruncatedLaurentSeries,
};
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Coefficient of `x^{-n}` in `f_d`: `(-1)^{digit sum}` when every base-`d`
/// digit of `n` is 0 or 1, else 0.
fn digit_oracle(d: u64, mut n: u64) -> i64 {
    let mut sign = 1;
    while n > 0 {
        match n % d {
            0 => {}
            1 => sign = -sign,
            _ => return 0,
        }
        n /= d;
    }
    sign
}

fn as_ints(u: &TruncatedLaurentSeries) -> Vec<(i64, i64)> {
    u.terms().rev().map(|(k, c)| (k, i64::try_from(c.to_integer()).unwrap())).collect()
}

#[test]
fn generation_examples() {
    let f = series(2, SeriesKind::F, -5).unwrap();
    assert_eq!(as_ints(&f), vec![(0, 1), (-1, -1), (-2, -1), (-3, 1), (-4, -1), (-5, 1)]);
    let g = series(2, SeriesKind::G, -3).unwrap();
    assert_eq!(as_ints(&g), vec![(-1, 1), (-2, -1), (-3, -1)]);
    for d in 2..6 {
        assert_eq!(as_ints(&series(d, SeriesKind::F, 0).unwrap()), vec![(0, 1)]);
    }
    assert!(matches!(
        generate_series(SeriesFamily { d: 1, kind: SeriesKind::F, floor: -3 }),
        Err(LaurentError::InvalidParameter(_))
    ));
}

#[test]
fn digit_oracle_agrees() {
    for d in 2u32..=5 {
        let f = series(d, SeriesKind::F, -300).unwrap();
        for n in 0..=300i64 {
            let c = f.coeff(-n).unwrap();
            assert_eq!(c, int(digit_oracle(d as u64, n as u64)), "d={d} n={n}");
        }
    }
}

#[test]
fn degree_examples() {
    assert_eq!(series(2, SeriesKind::F, -20).unwrap().degree(), SeriesDegree::Known(0));
    assert_eq!(series(3, SeriesKind::G, -20).unwrap().degree(), SeriesDegree::Known(-2));
    let u = series(3, SeriesKind::U, -20).unwrap();
    assert_eq!(u.sub(&u).degree(), SeriesDegree::ZeroSoFar);
}

#[test]
fn rate_examples() {
    for d in 2u32..=5 {
        let g = series(d, SeriesKind::G, -40).unwrap();
        assert_eq!(rate_of_approximation(&g, &RatPoly::zero(), &RatPoly::one()).unwrap(), d as i64 - 1);
    }
    let h2 = series(2, SeriesKind::H, -40).unwrap();
    assert!(rate_of_approximation(&h2, &RatPoly::one(), &RatPoly::from_i64s(&[1, 1])).unwrap() >= 1);
    let f4 = series(4, SeriesKind::F, -40).unwrap();
    let (p, e) = finite_product(4, 1);
    assert_eq!(e, 5);
    let q = RatPoly::monomial(Rational::one(), e);
    assert_eq!(rate_of_approximation(&f4, &p, &q).unwrap(), 6);
    // An exact approximation is indistinguishable from u at any floor.
    let exact = TruncatedLaurentSeries::from_rational(&RatPoly::one(), &RatPoly::from_i64s(&[1, 1]), -30).unwrap();
    assert!(matches!(
        rate_of_approximation(&exact, &RatPoly::one(), &RatPoly::from_i64s(&[1, 1])),
        Err(LaurentError::InsufficientPrecision { .. })
    ));
}

#[test]
fn functional_equation_examples() {
    assert_eq!(verify_functional_equations(2, -64).unwrap().verified_floor, -32);
    assert_eq!(verify_functional_equations(3, -81).unwrap().verified_floor, -27);
    assert!(verify_functional_equations(2, -2).is_ok());
}

#[test]
fn functional_equations_to_minus_200() {
    for d in 2..=5 {
        verify_functional_equations(d, -200).unwrap();
    }
}

#[test]
fn h_times_x_minus_one_is_u() {
    for d in [2u32, 3] {
        let h = series(d, SeriesKind::H, -200).unwrap();
        let u = series(d, SeriesKind::U, -199).unwrap();
        assert_eq!(h.mul_poly(&RatPoly::x_minus_one()), u);
    }
}

#[test]
fn product_tail_degree() {
    for d in 2u32..=5 {
        for k in 0..=3u32 {
            let top = (d as i64).pow(k + 1);
            let f = series(d, SeriesKind::F, -(top + 4)).unwrap();
            let (p, e) = finite_product(d, k);
            let r = TruncatedLaurentSeries::from_poly(&p, -(top + 4) + e as i64).shift(-(e as i64));
            assert_eq!(f.sub(&r).degree(), SeriesDegree::Known(-top), "d={d} k={k}");
        }
    }
}

#[test]
fn json_form() {
    let g = series(2, SeriesKind::G, -3).unwrap();
    let v = serde_json::to_value(&g).unwrap();
    assert_eq!(v, serde_json::json!({"floor": -3, "coeffs": {"-1": "1", "-2": "-1", "-3": "-1"}}));
    let back: TruncatedLaurentSeries = serde_json::from_value(v).unwrap();
    assert_eq!(back, g);
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..10).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(Config { cases: 48, rng_seed: RngSeed::Fixed(0x1A0), failure_persistence: None, ..Config::default() })]

    #[test]
    fn truncation_is_sound(d in 2u32..=5, kind in prop::sample::select(vec![SeriesKind::F, SeriesKind::G, SeriesKind::H, SeriesKind::U]), depth in 4i64..150) {
        let short = series(d, kind, -depth).unwrap();
        let long = series(d, kind, -depth - 1 - depth / 2).unwrap();
        prop_assert_eq!(long.truncate(short.floor()), short);
    }

    #[test]
    fn reciprocal_is_inverse(coeffs in prop::collection::vec(small_rational(), 1..6), lead in 1i64..5, floor in -40i64..-5) {
        let mut terms: Vec<(i64, Rational)> = coeffs.into_iter().enumerate().map(|(i, c)| (-(i as i64) - 1, c)).collect();
        terms.push((0, int(lead)));
        let u = TruncatedLaurentSeries::from_terms(terms, floor);
        let inv = u.reciprocal().unwrap();
        let one = u.mul(&inv);
        let expected = TruncatedLaurentSeries::from_terms([(0, Rational::one())], one.floor());
        prop_assert_eq!(one, expected);
    }

    #[test]
    fn rational_expansion_matches_product(pc in prop::collection::vec(small_rational(), 1..5), qc in prop::collection::vec(small_rational(), 1..5)) {
        let p = RatPoly::from_dense(pc);
        let q = RatPoly::from_dense(qc);
        prop_assume!(!q.is_zero());
        let s = TruncatedLaurentSeries::from_rational(&p, &q, -25).unwrap();
        let back = s.mul_poly(&q);
        let poly = TruncatedLaurentSeries::from_poly(&p, back.floor());
        prop_assert_eq!(back, poly);
    }
}
