//! Rational scalars and univariate polynomials over Q.

mod intpoly;
mod ratpoly;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use intpoly::{eval_mod_u64, IntPoly, IntPolyWithContent};
pub use ratpoly::RatPoly;
pub use text::PolyJson;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("the zero polynomial has no primitive form")]
    ZeroPolynomial,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Degree of a polynomial; the zero polynomial sits below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(k) => Some(k),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(k) => write!(f, "{k}"),
        }
    }
}

/// `n/1` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational; panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Canonical text form of a rational: `num/den`, or the bare integer.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter storing a rational as its canonical string.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ordering() {
        assert!(Degree::MinusInfinity < Degree::Finite(0));
        assert!(Degree::Finite(2) < Degree::Finite(3));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "1/2", "-7/9"] {
            assert_eq!(rational_to_string(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
