use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{int, ArithError, Degree, IntPoly, IntPolyWithContent, Rational};

/// Univariate polynomial over Q with sparse storage.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty map
/// and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: BTreeMap<usize, Rational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// Builds from `(degree, coefficient)` pairs; repeated degrees are summed.
    pub fn from_terms<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    /// Builds from an ascending dense coefficient list.
    pub fn from_dense(dense: Vec<Rational>) -> Self {
        Self::from_terms(dense.into_iter().enumerate())
    }

    /// Ascending integer coefficients, e.g. `[1, 0, 1]` is `x^2 + 1`.
    pub fn from_i64s(dense: &[i64]) -> Self {
        Self::from_terms(dense.iter().enumerate().map(|(k, &c)| (k, int(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.coeffs.keys().next_back().map_or(Degree::MinusInfinity, |&k| Degree::Finite(k))
    }

    /// Degree as a plain integer, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    /// Nonzero terms in ascending degree order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let n = self.deg().map_or(0, |d| d + 1);
        let mut v = vec![Rational::zero(); n];
        for (k, c) in self.terms() {
            v[k] = c.clone();
        }
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&e, v)| (e + k, v.clone())).collect() }
    }

    /// Divides by its leading coefficient; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// Euclidean division: `self = q * b + r` with `deg r < deg b`.
    pub fn divmod(&self, b: &RatPoly) -> Result<(RatPoly, RatPoly), ArithError> {
        let db = b.deg().ok_or(ArithError::DivisionByZeroPoly)?;
        let da = match self.deg() {
            Some(da) if da >= db => da,
            _ => return Ok((RatPoly::zero(), self.clone())),
        };
        let mut rem = self.to_dense();
        let bd = b.to_dense();
        // Only the nonzero divisor terms below the top participate.
        let bterms: Vec<(usize, &Rational)> =
            bd[..db].iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let inv_lead = bd[db].recip();
        let mut quot = vec![Rational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let top = std::mem::take(&mut rem[k + db]);
            if top.is_zero() {
                continue;
            }
            let qk = top * &inv_lead;
            for &(j, bj) in &bterms {
                rem[k + j] -= &qk * bj;
            }
            quot[k] = qk;
        }
        rem.truncate(db);
        Ok((RatPoly::from_dense(quot), RatPoly::from_dense(rem)))
    }

    /// Quotient when `b` divides `self` exactly, otherwise `None`.
    pub fn div_exact(&self, b: &RatPoly) -> Option<RatPoly> {
        match self.divmod(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// `q(x) -> q(x^d)`.
    pub fn substitute_power(&self, d: usize) -> Self {
        assert!(d >= 1, "substitution power must be positive");
        Self { coeffs: self.coeffs.iter().map(|(&k, v)| (k * d, v.clone())).collect() }
    }

    /// Inverse of [`substitute_power`](Self::substitute_power): `Some(r)` with
    /// `r(x^d) = self` when every exponent is a multiple of `d`.
    pub fn contract_power(&self, d: usize) -> Option<Self> {
        assert!(d >= 1, "substitution power must be positive");
        if self.coeffs.keys().any(|k| k % d != 0) {
            return None;
        }
        Some(Self { coeffs: self.coeffs.iter().map(|(&k, v)| (k / d, v.clone())).collect() })
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|(k, _)| *k > 0)
                .map(|(k, c)| (k - 1, c * int(k as i64))),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut prev: Option<usize> = None;
        for (k, c) in self.terms().rev() {
            if let Some(p) = prev {
                acc *= num_traits::pow(x.clone(), p - k);
            }
            acc += c;
            prev = Some(k);
        }
        match prev {
            Some(p) if p > 0 => acc * num_traits::pow(x.clone(), p),
            _ => acc,
        }
    }

    /// Primitive integer form: `self = scale * primitive` with a positive
    /// leading coefficient and content one.
    pub fn normalize_integer(&self) -> Result<IntPolyWithContent, ArithError> {
        let lc = self.leading_coeff().ok_or(ArithError::ZeroPolynomial)?;
        let lcm = self.coeffs.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<(usize, BigInt)> =
            self.terms().map(|(k, c)| (k, c.numer() * (&lcm / c.denom()))).collect();
        let mut content = ints.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        if lc.is_negative() {
            content = -content;
        }
        let mut dense = vec![BigInt::zero(); self.deg().unwrap() + 1];
        for (k, c) in ints {
            dense[k] = c / &content;
        }
        Ok(IntPolyWithContent {
            primitive: IntPoly::from_coeffs(dense),
            scale: Rational::new(content, lcm),
        })
    }

    /// Lowest common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Integer coefficient form, provided every coefficient is an integer.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        if self.coeffs.values().any(|c| !c.denom().is_one()) {
            return None;
        }
        let mut dense = vec![BigInt::zero(); self.deg().map_or(0, |d| d + 1)];
        for (k, c) in self.terms() {
            dense[k] = c.numer().clone();
        }
        Some(IntPoly::from_coeffs(dense))
    }

    /// `1 + x + ... + x^{n-1}`.
    pub fn geometric(n: usize) -> Self {
        Self::from_terms((0..n).map(|k| (k, Rational::one())))
    }

    /// `x - 1`.
    pub fn x_minus_one() -> Self {
        Self::from_i64s(&[-1, 1])
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    /// Human form in descending powers, e.g. `x^2 - 1/2*x + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coef = super::rational_to_string(&mag);
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coef}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{coef}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|(&k, v)| (k, -v)).collect() }
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let mut coeffs = self.coeffs.clone();
        for (&k, v) in &rhs.coeffs {
            let e = coeffs.entry(k).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                coeffs.remove(&k);
            }
        }
        RatPoly { coeffs }
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let mut coeffs = self.coeffs.clone();
        for (&k, v) in &rhs.coeffs {
            let e = coeffs.entry(k).or_insert_with(Rational::zero);
            *e -= v;
            if e.is_zero() {
                coeffs.remove(&k);
            }
        }
        RatPoly { coeffs }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                *coeffs.entry(i + j).or_insert_with(Rational::zero) += a * b;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        RatPoly { coeffs }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: &RatPoly) -> RatPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    #[test]
    fn divmod_by_hand() {
        let (q, r) = p(&[1, 0, 1]).divmod(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, p(&[2]));
        let (q, r) = p(&[1, 0, 0, 1]).divmod(&p(&[1, 0, 0, 1])).unwrap();
        assert_eq!((q, r), (RatPoly::one(), RatPoly::zero()));
    }

    #[test]
    fn divmod_factorization() {
        let s = p(&[2, 0, 1, 0, 0, 0, -1, 0, 1]);
        let q9 = &p(&[1, 1]) * &s;
        let (q, r) = q9.divmod(&p(&[1, 1])).unwrap();
        assert_eq!(q, s);
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_by_zero() {
        assert_eq!(p(&[1]).divmod(&RatPoly::zero()), Err(ArithError::DivisionByZeroPoly));
    }

    #[test]
    fn substitute_and_contract() {
        assert_eq!(p(&[1, 1]).substitute_power(2), p(&[1, 0, 1]));
        assert_eq!(p(&[1, 1, 1]).substitute_power(3), p(&[1, 0, 0, 1, 0, 0, 1]));
        let q = p(&[3, -1, 4]);
        assert_eq!(q.substitute_power(1), q);
        assert_eq!(q.substitute_power(3).contract_power(3), Some(q.clone()));
        assert_eq!(q.contract_power(2), None);
    }

    #[test]
    fn derivative_cases() {
        assert_eq!(p(&[1, 0, 1]).derivative(), p(&[0, 2]));
        assert!(p(&[5]).derivative().is_zero());
        let q9 = &p(&[1, 1]) * &p(&[2, 0, 1, 0, 0, 0, -1, 0, 1]);
        assert_eq!(q9.derivative().eval(&int(1)), int(11));
    }

    #[test]
    fn normalize_examples() {
        let q8 = RatPoly::from_terms([
            (12, int(1)),
            (9, int(1)),
            (6, rat(1, 2)),
            (3, rat(1, 2)),
            (0, rat(1, 2)),
        ]);
        let n = q8.normalize_integer().unwrap();
        assert_eq!(n.primitive, IntPoly::from_i64s(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 2, 0, 0, 2]));
        assert_eq!(n.scale, rat(1, 2));

        let n = p(&[3, 3]).normalize_integer().unwrap();
        assert_eq!(n.primitive, IntPoly::from_i64s(&[1, 1]));
        assert_eq!(n.scale, int(3));

        let n = p(&[1, -1]).normalize_integer().unwrap();
        assert_eq!(n.primitive, IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(n.scale, int(-1));

        assert_eq!(RatPoly::zero().normalize_integer(), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn gcd_and_eval() {
        let a = &p(&[1, 1]) * &p(&[-2, 1]);
        let b = &p(&[1, 1]) * &p(&[5, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(p(&[1, 0, 1]).eval(&rat(1, 2)), rat(5, 4));
        assert_eq!(p(&[0, 0, 0, 1]).eval(&int(2)), int(8));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, 1]).to_string(), "x^2 + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(RatPoly::from_terms([(1, rat(-1, 2)), (0, int(3))]).to_string(), "-1/2*x + 3");
        assert_eq!(RatPoly::zero().to_string(), "0");
    }
}
