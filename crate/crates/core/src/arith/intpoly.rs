use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{RatPoly, Rational};

/// Dense polynomial with integer coefficients, ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// `original = scale * primitive`, where `primitive` has content one and a
/// positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolyWithContent {
    pub primitive: IntPoly,
    pub scale: Rational,
}

impl IntPolyWithContent {
    pub fn reconstruct(&self) -> RatPoly {
        self.primitive.to_ratpoly().scale(&self.scale)
    }
}

impl IntPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect(),
        )
    }

    pub fn to_ratpoly(&self) -> RatPoly {
        RatPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, Rational::from_integer(c.clone()))),
        )
    }

    /// Exact value at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `q(r) mod m` in `[0, m)` by Horner with reduction at every step.
    pub fn eval_mod(&self, r: &BigInt, m: &BigInt) -> BigInt {
        assert!(m.is_positive(), "modulus must be positive");
        let r = r.mod_floor(m);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * &r + c).mod_floor(m))
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce_mod_u64(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&mb).to_u64().expect("reduced below a u64 modulus"))
            .collect()
    }

    /// Comma separated ascending coefficients, e.g. `1,0,1`.
    pub fn to_text(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Horner evaluation of reduced coefficients modulo `m < 2^64`.
pub fn eval_mod_u64(coeffs: &[u64], r: u64, m: u64) -> u64 {
    let (r, m) = (r as u128 % m as u128, m as u128);
    coeffs.iter().rev().fold(0u128, |acc, &c| (acc * r + c as u128) % m) as u64
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.to_ratpoly())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratpoly())
    }
}
