use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::StructureError;
use crate::arith::{int, RatPoly, Rational};
use crate::contfrac::{expand_family, monic_normalize, MonicCf, PrecisionPolicy};
use crate::laurent::SeriesKind;

/// Recurrence coefficients `beta_n`, indexed by `n`. Entries 0 and 1 are
/// zero by convention (`q_{-1} = 0`, so no beta term enters `q_1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSequence {
    pub d: u32,
    #[serde(with = "rational_vec")]
    pub betas: Vec<Rational>,
    /// `a_n` for `d = 3`: coefficient of `x^{3k-3}` in `q_{2k}` and in `q_{2k+1}/(x^2+x+1)`.
    #[serde(with = "opt_rational_vec", default, skip_serializing_if = "Option::is_none")]
    pub sub_leading_a: Option<Vec<Rational>>,
    /// `b_n` for `d = 3`: the coefficient of `x^{3k-6}` in the same forms.
    #[serde(with = "opt_rational_vec", default, skip_serializing_if = "Option::is_none")]
    pub sub_sub_leading_b: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Output {
    pub betas: BetaSequence,
    pub monic_denominators: Vec<RatPoly>,
    pub monic_numerators: Vec<RatPoly>,
}

/// Exact `beta` with `diff = beta * base`, if any.
fn scalar_multiple(diff: &RatPoly, base: &RatPoly) -> Option<Rational> {
    let (q, r) = diff.divmod(base).ok()?;
    (r.is_zero() && q.deg().is_none_or(|k| k == 0)).then(|| q.coeff(0))
}

/// Checks the two-step monic recurrence
/// `q_{2k+1} = (1 + ... + x^{d-1}) q_{2k} + beta q_{2k-1}`,
/// `q_{2k+2} = (x - 1) q_{2k+1} + beta q_{2k}` on `q_0..q_n` and extracts betas.
pub fn theorem2_from_monic(d: u32, m: &MonicCf, n: usize) -> Result<Theorem2Output, StructureError> {
    let q = &m.monic_denominators;
    if q.len() <= n || n < 1 {
        return Err(StructureError::InvalidParameter(format!(
            "need convergents 0..={n}, have {}",
            q.len()
        )));
    }
    let du = d as usize;
    let s = RatPoly::geometric(du);
    let xm1 = RatPoly::x_minus_one();
    if q[1] != s {
        return Err(StructureError::ShapeViolation(1));
    }
    if n >= 2 && q[2] != &RatPoly::monomial(Rational::one(), du) + &RatPoly::one() {
        return Err(StructureError::ShapeViolation(2));
    }
    let mut betas = vec![Rational::zero(), Rational::zero()];
    for j in 2..=n {
        let factor = if j % 2 == 1 { &s } else { &xm1 };
        let diff = &q[j] - &(factor * &q[j - 1]);
        let beta = scalar_multiple(&diff, &q[j - 2]).ok_or(StructureError::ShapeViolation(j))?;
        if beta.is_zero() || beta != m.betas[j] || m.monic_quotients[j] != *factor {
            return Err(StructureError::ShapeViolation(j));
        }
        betas.push(beta);
    }
    let (a, b) = if d == 3 {
        let (a, b) = sub_leading_coeffs(&q[..=n]);
        (Some(a), Some(b))
    } else {
        (None, None)
    };
    Ok(Theorem2Output {
        betas: BetaSequence { d, betas, sub_leading_a: a, sub_sub_leading_b: b },
        monic_denominators: q[..=n].to_vec(),
        monic_numerators: m.monic_numerators[..=n].to_vec(),
    })
}

/// `a_n` and `b_n` for the `d = 3` monic denominators. Out-of-range
/// coefficients are zero.
pub fn sub_leading_coeffs(q: &[RatPoly]) -> (Vec<Rational>, Vec<Rational>) {
    let s = RatPoly::geometric(3);
    let mut a = Vec::with_capacity(q.len());
    let mut b = Vec::with_capacity(q.len());
    for (n, qn) in q.iter().enumerate() {
        let base = if n % 2 == 0 { qn.clone() } else { qn.div_exact(&s).unwrap_or_default() };
        let k = n / 2;
        let at = |e: i64| if e >= 0 { base.coeff(e as usize) } else { Rational::zero() };
        a.push(at(3 * k as i64 - 3));
        b.push(at(3 * k as i64 - 6));
    }
    (a, b)
}

/// Monic denominators and betas of `g_d` up to index `n`, straight from the
/// continued-fraction oracle.
pub fn theorem2_sequence(d: u32, n: usize) -> Result<Theorem2Output, StructureError> {
    if d < 2 {
        return Err(StructureError::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    let (cf, _) = expand_family(d, SeriesKind::G, n.max(2), PrecisionPolicy::default())?;
    let m = monic_normalize(&cf)?;
    theorem2_from_monic(d, &m, n)
}

/// `beta_n` for `d = 2` from the closed recurrence
/// `beta_{2k+1} = -beta_{k+1}/beta_{2k}`, `beta_{2k+2} = 1 + (-1)^k - beta_{2k+1}`
/// with seeds `beta_2 = 2`, `beta_3 = -1`, `beta_4 = 1`.
pub fn bzz_beta(n: usize) -> Result<Vec<Rational>, StructureError> {
    if n < 4 {
        return Err(StructureError::InvalidParameter(format!("n = {n} must be at least 4")));
    }
    let mut b = vec![Rational::zero(), Rational::zero(), int(2), int(-1), int(1)];
    let mut k = 2;
    while b.len() <= n {
        if b[2 * k].is_zero() {
            return Err(StructureError::ZeroDenominator(2 * k));
        }
        let odd = -&b[k + 1] / &b[2 * k];
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let even = int(1 + sign) - &odd;
        b.push(odd);
        b.push(even);
        k += 1;
    }
    b.truncate(n + 1);
    Ok(b)
}

mod rational_vec {
    use crate::arith::{parse_rational, rational_to_string, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

mod opt_rational_vec {
    use crate::arith::{parse_rational, rational_to_string, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(rational_to_string)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| v.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn d2_first_betas() {
        let out = theorem2_sequence(2, 4).unwrap();
        assert_eq!(out.monic_denominators[1], RatPoly::from_i64s(&[1, 1]));
        assert_eq!(out.monic_denominators[2], RatPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(&out.betas.betas[2..], &[int(2), int(-1), int(1)]);
    }

    #[test]
    fn d3_beta2() {
        let out = theorem2_sequence(3, 2).unwrap();
        assert_eq!(out.betas.betas[2], int(2));
        assert_eq!(out.monic_denominators[2], RatPoly::from_i64s(&[1, 0, 0, 1]));
    }

    #[test]
    fn d3_known_betas() {
        let out = theorem2_sequence(3, 6).unwrap();
        assert_eq!(
            &out.betas.betas[2..=6],
            &[int(2), rat(-1, 2), rat(-1, 2), int(4), int(-2)]
        );
        let a = out.betas.sub_leading_a.unwrap();
        assert_eq!(a[0], Rational::zero());
        assert_eq!(a[2], int(1));
    }

    #[test]
    fn bzz_by_hand() {
        let b = bzz_beta(4).unwrap();
        assert_eq!(&b[2..], &[int(2), int(-1), int(1)]);
        let b = bzz_beta(6).unwrap();
        assert_eq!((b[5].clone(), b[6].clone()), (int(1), int(1)));
        assert!(bzz_beta(3).is_err());
    }

    #[test]
    fn bzz_matches_oracle_prefix() {
        let out = theorem2_sequence(2, 40).unwrap();
        assert_eq!(bzz_beta(40).unwrap(), out.betas.betas);
    }

    #[test]
    fn d4_breaks_shape() {
        assert!(matches!(theorem2_sequence(4, 20), Err(StructureError::ShapeViolation(_))));
    }

    #[test]
    fn beta_json() {
        let b = BetaSequence { d: 2, betas: vec![int(0), int(0), rat(-1, 2)], sub_leading_a: None, sub_sub_leading_b: None };
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"d":2,"betas":["0","0","-1/2"]}"#);
        assert_eq!(serde_json::from_str::<BetaSequence>(&s).unwrap(), b);
    }
}
