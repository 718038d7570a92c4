//! Certified real evaluation of Mahler numbers and approximation quality.
//!
//! No floating point is used: every inequality between reals is decided by
//! cross-multiplying integers, and decimal strings are renderings only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rational_string, RatPoly, Rational};
use crate::padic::{ConvergentTable, IntegerConvergent};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApproxError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("required precision of {bits} bits exceeds the limit of {limit}")]
    PrecisionCascade { bits: u64, limit: u64 },
    #[error("convergent unavailable: {0}")]
    Convergent(String),
}

/// Largest exponent `d^{K+1}` (in bits of `a`) an evaluation may use.
pub const MAX_EXPONENT: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    F,
    G,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedValue {
    #[serde(with = "rational_string")]
    pub value: Rational,
    #[serde(with = "rational_string")]
    pub error_bound: Rational,
    pub decimal: String,
    pub target: String,
    /// Number of product factors used.
    pub terms: u32,
}

fn pow_big(a: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(a), e as usize)
}

fn d_pow(d: u32, k: u32) -> Result<u64, ApproxError> {
    (d as u64)
        .checked_pow(k)
        .filter(|&x| x <= MAX_EXPONENT)
        .ok_or(ApproxError::PrecisionCascade { bits: u64::MAX, limit: MAX_EXPONENT })
}

/// `r_K(a) = prod_{t<=K} (1 - a^{-d^t})` as an integer fraction `(num, den)`.
pub fn partial_product(a: u64, d: u32, k: u32) -> Result<(BigInt, BigInt), ApproxError> {
    let mut num = BigInt::one();
    let mut e = 0u64;
    for t in 0..=k {
        let dt = d_pow(d, t)?;
        num *= pow_big(a, dt) - 1;
        e += dt;
    }
    Ok((num, pow_big(a, e)))
}

/// `f_d(a)` or `g_d(a) = a^{1-d} f_d(a)` to within `eps`, using the tail bound
/// `|f_d(a) - r_K(a)| <= 2 / a^{d^{K+1}}`.
pub fn eval_mahler(a: u64, d: u32, eps: &Rational, which: Which) -> Result<CertifiedValue, ApproxError> {
    if a < 2 || d < 2 {
        return Err(ApproxError::InvalidParameter(format!("need a >= 2 and d >= 2, got a = {a}, d = {d}")));
    }
    if !eps.is_positive() {
        return Err(ApproxError::InvalidParameter("eps must be positive".into()));
    }
    let shift = match which {
        Which::F => 0,
        Which::G => d as u64 - 1,
    };
    // Smallest K with 2 <= eps * a^{d^{K+1} + shift}.
    let mut k = 0u32;
    loop {
        let e = d_pow(d, k + 1)?;
        if eps * Rational::from_integer(pow_big(a, e + shift)) >= Rational::from_integer(BigInt::from(2)) {
            break;
        }
        k += 1;
    }
    let (num, den) = partial_product(a, d, k)?;
    let value = Rational::new(num, den * pow_big(a, shift));
    let error_bound = Rational::new(BigInt::from(2), pow_big(a, d_pow(d, k + 1)? + shift));
    let target = format!("{}_{d}({a})", if which == Which::F { "f" } else { "g" });
    Ok(CertifiedValue { decimal: render_decimal(&value, &error_bound), value, error_bound, target, terms: k + 1 })
}

/// Decimal digits of `value`, truncated where the error bound starts to
/// matter, with a trailing ellipsis when the value is inexact.
pub fn render_decimal(value: &Rational, error_bound: &Rational) -> String {
    let ten = BigInt::from(10);
    let mut digits = 0usize;
    if error_bound.is_positive() {
        let mut scale = BigInt::one();
        while digits < 2000 && error_bound * Rational::from_integer(&scale * &ten) <= Rational::one() {
            scale *= &ten;
            digits += 1;
        }
    } else {
        digits = 40;
    }
    let neg = value.is_negative();
    let exact_scaled = value.abs() * Rational::from_integer(num_traits::pow(ten, digits));
    let truncated = !exact_scaled.is_integer();
    let mut s = exact_scaled.floor().to_integer().to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let (int_part, frac) = s.split_at(s.len() - digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    // An exact, terminating value drops its trailing zeros.
    let frac = if error_bound.is_zero() && !truncated { frac.trim_end_matches('0') } else { frac };
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    if !error_bound.is_zero() || truncated {
        out.push('…');
    }
    out
}

/// Integer continued-fraction quotients shared by every point of
/// `[value - bound, value + bound]`.
pub fn real_cf_prefix(v: &CertifiedValue, max_terms: usize) -> Vec<BigInt> {
    let mut lo = &v.value - &v.error_bound;
    let mut hi = &v.value + &v.error_bound;
    let mut out = Vec::new();
    while out.len() < max_terms {
        let (fl, fh) = (lo.floor(), hi.floor());
        if fl != fh {
            break;
        }
        out.push(fl.to_integer());
        lo -= &fl;
        hi -= &fl;
        if lo.is_zero() {
            break;
        }
        let (nlo, nhi) = (hi.recip(), lo.recip());
        lo = nlo;
        hi = nhi;
    }
    out
}

/// `x^{d^n}`-substituted approximant of `g_d` built from a convergent:
/// `p~(x) = prod_{k<n} x^{d^k (d^2 - 2d)} (x^{d^k} - 1) p_t(x^{d^n})`, `q~(x) = q_t(x^{d^n})`.
pub fn tilde_polynomials(d: u32, n: u32, conv: &IntegerConvergent) -> (RatPoly, RatPoly) {
    let dn = (d as usize).pow(n);
    let mut prod = RatPoly::one();
    for k in 0..n {
        let dk = (d as usize).pow(k);
        let factor = &RatPoly::monomial(Rational::one(), dk) - &RatPoly::one();
        prod = &prod * &factor.shift(dk * (d * d - 2 * d) as usize);
    }
    (&prod * &conv.p_cleared.to_ratpoly().substitute_power(dn), conv.q_cleared.to_ratpoly().substitute_power(dn))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeApproximant {
    pub a: u64,
    pub d: u32,
    pub t: usize,
    pub n: u32,
    pub p_tilde: BigInt,
    pub q_tilde: BigInt,
    /// Certified enclosure of `|g_d(a) - p~/q~| * q~^2`.
    pub quality_lower: Rational,
    pub quality_upper: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityRow {
    pub n: u32,
    pub q_bits: u64,
    #[serde(with = "rational_string")]
    pub quality_lower: Rational,
    #[serde(with = "rational_string")]
    pub quality_upper: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TildeReport {
    pub a: u64,
    pub d: u32,
    pub t: usize,
    pub rows: Vec<QualityRow>,
    /// Largest certified upper bound: the empirical constant.
    #[serde(with = "rational_string")]
    pub sup_upper: Rational,
}

const QUALITY_BITS: u32 = 32;

/// Builds the approximants for `n = 0..=n_max` and encloses their quality.
/// Enclosures are rounded outward to multiples of `2^-32`.
pub fn tilde_approximants(
    a: u64,
    d: u32,
    n_max: u32,
    conv: &IntegerConvergent,
) -> Result<(Vec<TildeApproximant>, TildeReport), ApproxError> {
    if d != 2 && d != 3 {
        return Err(ApproxError::InvalidParameter(format!("d = {d}: only 2 and 3 are covered")));
    }
    if d == 3 && conv.t % 2 == 1 {
        return Err(ApproxError::InvalidParameter("t must be even for d = 3".into()));
    }
    if a < 2 {
        return Err(ApproxError::InvalidParameter("a must be at least 2".into()));
    }
    let unit = BigInt::one() << QUALITY_BITS;
    let mut out = Vec::new();
    let mut rows = Vec::new();
    let mut prod = BigInt::one();
    for n in 0..=n_max {
        if n > 0 {
            let dk = d_pow(d, n - 1)?;
            let mono = if d == 3 { pow_big(a, 3 * dk) } else { BigInt::one() };
            prod *= mono * (pow_big(a, dk) - 1);
        }
        let x = pow_big(a, d_pow(d, n)?);
        let p_tilde = &prod * conv.p_cleared.eval(&x);
        let q_tilde = conv.q_cleared.eval(&x);
        if q_tilde.is_zero() {
            return Err(ApproxError::InvalidParameter(format!("q~ vanishes at n = {n}")));
        }
        let q_abs = q_tilde.abs();
        // eps * q~^2 <= 2^{-64}: ample separation for the enclosure.
        let q_bits = q_abs.bits();
        let eps = Rational::new(BigInt::one(), BigInt::one() << (2 * q_bits + 64));
        if 2 * q_bits + 64 > MAX_EXPONENT {
            return Err(ApproxError::PrecisionCascade { bits: 2 * q_bits + 64, limit: MAX_EXPONENT });
        }
        let v = eval_mahler(a, d, &eps, Which::G)?;
        let (vn, vd) = (v.value.numer(), v.value.denom());
        let (en, ed) = (v.error_bound.numer(), v.error_bound.denom());
        // |v - p~/q~| = diff_num / diff_den, all positive integers.
        let diff_num = (vn * &q_tilde - vd * &p_tilde).abs();
        let diff_den = vd * &q_abs;
        let q2 = &q_abs * &q_abs;
        let den = &diff_den * ed;
        let upper_num = (&diff_num * ed + en * &diff_den) * &q2;
        let lower_num = (&diff_num * ed - en * &diff_den).max(BigInt::zero()) * &q2;
        let upper = Rational::new((upper_num * &unit).div_ceil(&den), unit.clone());
        let lower = Rational::new((lower_num * &unit).div_floor(&den), unit.clone());
        rows.push(QualityRow { n, q_bits, quality_lower: lower.clone(), quality_upper: upper.clone() });
        out.push(TildeApproximant { a, d, t: conv.t, n, p_tilde, q_tilde, quality_lower: lower, quality_upper: upper });
    }
    let sup_upper = rows.iter().map(|r| r.quality_upper.clone()).max().unwrap_or_else(Rational::zero);
    Ok((out, TildeReport { a, d, t: conv.t, rows, sup_upper }))
}

/// Same as [`tilde_approximants`], computing the `t`-th convergent of `g_d` first.
pub fn tilde_report(a: u64, d: u32, t: usize, n_max: u32) -> Result<TildeReport, ApproxError> {
    let table = ConvergentTable::for_g(d, t).map_err(|e| ApproxError::Convergent(e.to_string()))?;
    let conv = table.get(t).ok_or_else(|| ApproxError::Convergent(format!("t = {t}")))?;
    Ok(tilde_approximants(a, d, n_max, conv)?.1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalityRow {
    pub k: u32,
    /// Bit length of `q_k = a^{(d^{k+1}-1)/(d-1)}`.
    pub q_bits: u64,
    /// `2 / a^{d^{k+1}} <= q_k^{-(d-1)}`, decided exactly.
    pub inequality_holds: bool,
    /// Certified lower bound for `log(1/|f_d(a) - r_k(a)|) / log q_k`.
    #[serde(with = "rational_string")]
    pub exponent_lower: Rational,
    pub exponent_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalityReport {
    pub a: u64,
    pub d: u32,
    pub rows: Vec<IrrationalityRow>,
}

/// Effective irrationality exponents of `f_d(a)` along the truncated
/// products `r_k(a)`, for `d >= 4`.
pub fn irrationality_witness(a: u64, d: u32, k_max: u32) -> Result<IrrationalityReport, ApproxError> {
    if d < 4 || a < 2 {
        return Err(ApproxError::InvalidParameter(format!("need d >= 4 and a >= 2, got a = {a}, d = {d}")));
    }
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let top = d_pow(d, k + 1)?;
        let e = (top - 1) / (d as u64 - 1);
        let a_top = pow_big(a, top);
        let q = pow_big(a, e);
        // 2 / a^top <= a^{-e(d-1)}  <=>  2 a^{e(d-1)} <= a^top.
        let inequality_holds = BigInt::from(2) * pow_big(a, e * (d as u64 - 1)) <= a_top;
        // log2(a^top / 2) >= bits(a^top) - 2 and log2 q < bits(q).
        let exponent_lower = Rational::new(BigInt::from(a_top.bits()) - 2, BigInt::from(q.bits()));
        let exponent_decimal = render_decimal(&exponent_lower, &Rational::new(BigInt::one(), BigInt::from(10_000)));
        rows.push(IrrationalityRow { k, q_bits: q.bits(), inequality_holds, exponent_lower, exponent_decimal });
    }
    Ok(IrrationalityReport { a, d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn eps(e: u32) -> Rational {
        Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), e as usize))
    }

    #[test]
    fn f2_of_2() {
        let v = eval_mahler(2, 2, &eps(8), Which::F).unwrap();
        assert!(v.error_bound <= eps(8));
        assert!(v.decimal.starts_with("0.35018386"), "{}", v.decimal);
        assert_eq!(v.target, "f_2(2)");
        assert_eq!(v.terms, 5);
    }

    #[test]
    fn coarse_eps_uses_one_factor() {
        let v = eval_mahler(3, 2, &Rational::one(), Which::F).unwrap();
        assert_eq!(v.value, rat(2, 3));
        assert_eq!(v.terms, 1);
    }

    #[test]
    fn d4_needs_three_factors_for_1e10() {
        let v = eval_mahler(2, 4, &eps(10), Which::F).unwrap();
        assert_eq!(v.terms, 3);
        assert_eq!(v.error_bound, Rational::new(BigInt::from(2), BigInt::one() << 64));
    }

    #[test]
    fn g_is_shifted_f() {
        let f = eval_mahler(2, 3, &eps(30), Which::F).unwrap();
        let g = eval_mahler(2, 3, &eps(30), Which::G).unwrap();
        assert!((&f.value / Rational::from_integer(BigInt::from(4)) - &g.value).abs() <= &g.error_bound + &f.error_bound);
    }

    #[test]
    fn cf_prefix_cases() {
        let third = CertifiedValue { value: rat(1, 3), error_bound: Rational::zero(), decimal: String::new(), target: String::new(), terms: 0 };
        assert_eq!(real_cf_prefix(&third, 10), vec![BigInt::zero(), BigInt::from(3)]);
        let wide = CertifiedValue { value: rat(7, 20), error_bound: rat(1, 2), decimal: String::new(), target: String::new(), terms: 0 };
        assert!(real_cf_prefix(&wide, 10).len() <= 1);
        let v = eval_mahler(2, 2, &eps(40), Which::F).unwrap();
        let cf = real_cf_prefix(&v, 50);
        assert!(cf.len() > 10);
        assert_eq!(cf[0], BigInt::zero());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&rat(-1, 8), &Rational::new(BigInt::one(), BigInt::from(1000))), "-0.125…");
        assert_eq!(render_decimal(&rat(5, 2), &rat(1, 2)), "2…");
    }

    #[test]
    fn irrationality_small() {
        let r = irrationality_witness(2, 4, 3).unwrap();
        assert!(r.rows.iter().all(|x| x.inequality_holds));
        assert!(r.rows[3].exponent_lower >= rat(5, 2));
        assert!(irrationality_witness(2, 3, 2).is_err());
    }
}
