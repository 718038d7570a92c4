//! Truncated Laurent series in `x^{-1}`.
//!
//! A [`TruncatedLaurentSeries`] stores exact coefficients for every degree at
//! or above its `floor`; degrees below the floor are unknown. Arithmetic
//! tracks how the floor moves, so every stored coefficient is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, parse_rational, rational_to_string, RatPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient precision at floor {floor}")]
    InsufficientPrecision { floor: i64 },
    #[error("division by a series that is zero at current precision")]
    ZeroSoFarDivision,
    #[error("{equation}: coefficients differ at degree {degree}")]
    MismatchAt { equation: &'static str, degree: i64 },
}

/// Degree of a truncated series: the top nonzero degree, or `ZeroSoFar` when
/// nothing nonzero is known above the floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesDegree {
    Known(i64),
    ZeroSoFar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesKind {
    /// `f_d = prod (1 - x^{-d^t})`
    F,
    /// `g_d = x^{1-d} f_d`
    G,
    /// `h_d = x^{-1} f_d`
    H,
    /// `u_d = (1 - x^{-1}) f_d`
    U,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::F => "f",
            SeriesKind::G => "g",
            SeriesKind::H => "h",
            SeriesKind::U => "u",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFamily {
    pub d: u32,
    pub kind: SeriesKind,
    pub floor: i64,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedLaurentSeries {
    coeffs: BTreeMap<i64, Rational>,
    floor: i64,
}

impl TruncatedLaurentSeries {
    /// Builds a series, dropping zeros and anything below `floor`.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I, floor: i64) -> Self {
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (k, c) in terms {
            if k >= floor {
                *coeffs.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs, floor }
    }

    /// A polynomial viewed as an exact series, known down to `floor`.
    pub fn from_poly(p: &RatPoly, floor: i64) -> Self {
        Self::from_terms(p.terms().map(|(k, c)| (k as i64, c.clone())), floor)
    }

    /// Expansion of `p/q` in descending powers, exact down to `floor`.
    pub fn from_rational(p: &RatPoly, q: &RatPoly, floor: i64) -> Result<Self, LaurentError> {
        let m = q
            .deg()
            .ok_or_else(|| LaurentError::InvalidParameter("zero denominator".into()))?;
        let Some(dp) = p.deg() else {
            return Ok(Self::from_terms([], floor));
        };
        let top = dp as i64 - m as i64;
        if top < floor {
            return Ok(Self::from_terms([], floor));
        }
        let inv_lead = q.leading_coeff().unwrap().recip();
        // Lower terms of q as (offset below the leading term, coefficient).
        let lower: Vec<(usize, &Rational)> =
            q.terms().filter(|&(k, _)| k < m).map(|(k, c)| (m - k, c)).collect();
        let len = (top - floor + 1) as usize;
        let mut s: Vec<Rational> = Vec::with_capacity(len);
        for j in 0..len {
            let k = top - j as i64;
            let pk = k + m as i64;
            let mut acc = if pk >= 0 { p.coeff(pk as usize) } else { Rational::zero() };
            for &(i, qc) in &lower {
                if i <= j {
                    let sv: &Rational = &s[j - i];
                    if !sv.is_zero() {
                        acc -= qc * sv;
                    }
                }
            }
            s.push(acc * &inv_lead);
        }
        Ok(Self::from_terms(s.into_iter().enumerate().map(|(j, c)| (top - j as i64, c)), floor))
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Coefficient at degree `k`, or `None` when `k` lies below the floor.
    pub fn coeff(&self, k: i64) -> Option<Rational> {
        (k >= self.floor).then(|| self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn degree(&self) -> SeriesDegree {
        self.coeffs.keys().next_back().map_or(SeriesDegree::ZeroSoFar, |&k| SeriesDegree::Known(k))
    }

    /// Upper bound for the true degree: the known degree, or `floor - 1`.
    fn degree_bound(&self) -> i64 {
        match self.degree() {
            SeriesDegree::Known(k) => k,
            SeriesDegree::ZeroSoFar => self.floor - 1,
        }
    }

    /// Lowers the floor requirement to `floor`, discarding deeper terms.
    pub fn truncate(&self, floor: i64) -> Self {
        let floor = floor.max(self.floor);
        Self { coeffs: self.coeffs.range(floor..).map(|(&k, c)| (k, c.clone())).collect(), floor }
    }

    /// Polynomial part: terms of degree `>= 0`. Requires `floor <= 0`.
    pub fn polynomial_part(&self) -> Result<RatPoly, LaurentError> {
        if self.floor > 0 {
            return Err(LaurentError::InsufficientPrecision { floor: self.floor });
        }
        Ok(RatPoly::from_terms(self.coeffs.range(0..).map(|(&k, c)| (k as usize, c.clone()))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = self.floor.max(other.floor);
        let terms = self.coeffs.range(floor..).chain(other.coeffs.range(floor..));
        Self::from_terms(terms.map(|(&k, c)| (k, c.clone())), floor)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(), floor: self.floor }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * c)), self.floor)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
            floor: self.floor + k,
        }
    }

    /// `u(x) -> u(x^d)`; the known region scales with `d`.
    pub fn substitute_power(&self, d: u32) -> Self {
        let d = d as i64;
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e * d, c.clone())).collect(),
            floor: self.floor * d,
        }
    }

    /// Exact product with a polynomial.
    pub fn mul_poly(&self, p: &RatPoly) -> Self {
        let Some(dp) = p.deg() else {
            // 0 * u is exactly zero at any precision.
            return Self::from_terms([], self.floor);
        };
        let floor = self.floor + dp as i64;
        let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, a) in p.terms() {
            let i = i as i64;
            for (j, b) in self.coeffs.range(floor - i..) {
                *out.entry(i + j).or_insert_with(Rational::zero) += a * b;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self { coeffs: out, floor }
    }

    /// Product of two truncated series, exact above the induced floor.
    pub fn mul(&self, other: &Self) -> Self {
        let floor = (self.floor + other.degree_bound()).max(other.floor + self.degree_bound());
        let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, a) in self.terms() {
            for (j, b) in other.coeffs.range(floor - i..) {
                *out.entry(i + j).or_insert_with(Rational::zero) += a * b;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self { coeffs: out, floor }
    }

    /// Multiplicative inverse, solved coefficient by coefficient from the
    /// leading term. A leading degree `e` and floor `f` give floor `f - 2e`.
    pub fn reciprocal(&self) -> Result<Self, LaurentError> {
        let SeriesDegree::Known(e) = self.degree() else {
            return Err(LaurentError::ZeroSoFarDivision);
        };
        let lead_inv = self.coeffs[&e].recip();
        let depth = (e - self.floor) as usize;
        let below: Vec<(usize, &Rational)> =
            self.coeffs.range(..e).rev().map(|(&k, c)| ((e - k) as usize, c)).collect();
        let mut v: Vec<Rational> = Vec::with_capacity(depth + 1);
        v.push(lead_inv.clone());
        for j in 1..=depth {
            let mut acc = Rational::zero();
            for &(i, c) in &below {
                if i > j {
                    break;
                }
                acc += c * &v[j - i];
            }
            v.push(-acc * &lead_inv);
        }
        let floor = self.floor - 2 * e;
        Ok(Self::from_terms(v.into_iter().enumerate().map(|(j, c)| (-e - j as i64, c)), floor))
    }

    pub fn div(&self, other: &Self) -> Result<Self, LaurentError> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// Coefficientwise comparison at every degree both series know.
    pub fn first_mismatch(&self, other: &Self) -> Option<i64> {
        let floor = self.floor.max(other.floor);
        let top = self.degree_bound().max(other.degree_bound());
        (floor..=top).rev().find(|&k| self.coeff(k) != other.coeff(k))
    }
}

impl fmt::Debug for TruncatedLaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(")?;
        for (i, (k, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*x^{k}", rational_to_string(c))?;
        }
        write!(f, " + O(x^{}))", self.floor - 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    floor: i64,
    coeffs: BTreeMap<String, String>,
}

impl Serialize for TruncatedLaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            floor: self.floor,
            coeffs: self.terms().map(|(k, c)| (k.to_string(), rational_to_string(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedLaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = SeriesJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(j.coeffs.len());
        for (k, v) in j.coeffs {
            let k: i64 = k.parse().map_err(D::Error::custom)?;
            terms.push((k, parse_rational(&v).map_err(D::Error::custom)?));
        }
        Ok(Self::from_terms(terms, j.floor))
    }
}

/// Coefficients of `f_d` at `x^0, x^{-1}, ..., x^{-depth}`.
fn thue_morse_coeffs(d: u32, depth: usize) -> Vec<i64> {
    let mut c = vec![0i64; depth + 1];
    c[0] = 1;
    let mut e = 1usize;
    while e <= depth {
        // Multiply by (1 - x^{-e}) in place, high degrees first.
        for n in (e..=depth).rev() {
            c[n] -= c[n - e];
        }
        match e.checked_mul(d as usize) {
            Some(next) => e = next,
            None => break,
        }
    }
    c
}

/// Exact truncation of `f_d`, `g_d`, `h_d` or `u_d`.
pub fn generate_series(family: SeriesFamily) -> Result<TruncatedLaurentSeries, LaurentError> {
    let SeriesFamily { d, kind, floor } = family;
    if d < 2 {
        return Err(LaurentError::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    if floor > 0 {
        return Err(LaurentError::InvalidParameter(format!("floor = {floor} must be <= 0")));
    }
    let shift: i64 = match kind {
        SeriesKind::F | SeriesKind::U => 0,
        SeriesKind::G => -(d as i64 - 1),
        SeriesKind::H => -1,
    };
    // Degrees of f needed: those n with -n + shift >= floor.
    let depth = (-floor + shift).max(0) as usize;
    let c = thue_morse_coeffs(d, depth);
    let coeff = |n: usize| c.get(n).copied().unwrap_or(0);
    let terms: Vec<(i64, Rational)> = match kind {
        SeriesKind::U => (0..=depth)
            .map(|n| (-(n as i64), int(coeff(n) - if n > 0 { coeff(n - 1) } else { 0 })))
            .collect(),
        _ => (0..=depth).map(|n| (shift - n as i64, int(coeff(n)))).collect(),
    };
    Ok(TruncatedLaurentSeries::from_terms(terms, floor))
}

/// Convenience wrapper around [`generate_series`].
pub fn series(d: u32, kind: SeriesKind, floor: i64) -> Result<TruncatedLaurentSeries, LaurentError> {
    generate_series(SeriesFamily { d, kind, floor })
}

/// The finite product `r_k = prod_{t<=k} (1 - x^{-d^t})` as `(P, E)` with
/// `r_k = P(x) / x^E`, `E = (d^{k+1} - 1)/(d - 1)`.
pub fn finite_product(d: u32, k: u32) -> (RatPoly, usize) {
    let mut p = RatPoly::one();
    let mut e = 0usize;
    let mut power = 1usize;
    for _ in 0..=k {
        let mut factor = RatPoly::monomial(Rational::one(), power);
        factor = &factor - &RatPoly::one();
        p = &p * &factor;
        e += power;
        power *= d as usize;
    }
    (p, e)
}

/// `c` with `deg(u - p/q) = -2 deg q - c`.
pub fn rate_of_approximation(
    u: &TruncatedLaurentSeries,
    p: &RatPoly,
    q: &RatPoly,
) -> Result<i64, LaurentError> {
    let dq = q
        .deg()
        .ok_or_else(|| LaurentError::InvalidParameter("zero denominator".into()))?;
    // deg(q u - p) = deg q + deg(u - p/q). Scanning q u - p from the top
    // down stops at its leading term, so the full product is never formed.
    let lo = u.floor() + dq as i64;
    let top = match u.degree() {
        SeriesDegree::Known(e) => (e + dq as i64).max(p.deg().map_or(lo, |k| k as i64)),
        SeriesDegree::ZeroSoFar => p.deg().map_or(lo, |k| k as i64),
    };
    // Clearing denominators once keeps the scan in integer arithmetic.
    let lcm_pq = p.denominator_lcm().lcm(&q.denominator_lcm());
    let lcm_u = u.coeffs.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let to_int = |c: &Rational, l: &BigInt| c.numer() * (l / c.denom());
    let qi: Vec<(i64, BigInt)> = q.terms().map(|(i, a)| (i as i64, to_int(a, &lcm_pq))).collect();
    let ui: BTreeMap<i64, BigInt> = u.coeffs.iter().map(|(&k, c)| (k, to_int(c, &lcm_u))).collect();
    for k in (lo..=top).rev() {
        let mut c = if k >= 0 { -to_int(&p.coeff(k as usize), &lcm_pq) * &lcm_u } else { BigInt::zero() };
        for (i, a) in &qi {
            if let Some(b) = ui.get(&(k - i)) {
                c += a * b;
            }
        }
        if !c.is_zero() {
            return Ok(-(dq as i64) - k);
        }
    }
    Err(LaurentError::InsufficientPrecision { floor: u.floor() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncEqReport {
    pub d: u32,
    pub floor: i64,
    /// Every coefficient of `f_d` at degrees `>= verified_floor` enters both
    /// sides of each equation.
    pub verified_floor: i64,
    /// Lowest degree compared coefficientwise, per equation.
    pub compared_to: Vec<(String, i64)>,
}

/// Checks `f(x^d)(x - 1) = x f(x)` and `g(x^d) x^{d^2-2d} (x - 1) = g(x)`
/// coefficientwise above the common floor.
pub fn verify_functional_equations(d: u32, floor: i64) -> Result<FuncEqReport, LaurentError> {
    if d < 2 {
        return Err(LaurentError::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    if floor > -(d as i64) {
        return Err(LaurentError::InvalidParameter(format!("floor {floor} must be <= -{d}")));
    }
    let xm1 = RatPoly::x_minus_one();
    let mut compared_to = Vec::new();

    let f = series(d, SeriesKind::F, floor)?;
    let lhs = f.substitute_power(d).mul_poly(&xm1);
    let rhs = f.shift(1);
    check_equal("f", &lhs, &rhs, &mut compared_to)?;

    let g = series(d, SeriesKind::G, floor)?;
    let mono = RatPoly::monomial(Rational::one(), (d * d - 2 * d) as usize);
    let lhs = g.substitute_power(d).mul_poly(&(&mono * &xm1));
    check_equal("g", &lhs, &g, &mut compared_to)?;

    let dd = d as i64;
    Ok(FuncEqReport { d, floor, verified_floor: floor.div_euclid(dd) + i64::from(floor % dd != 0), compared_to })
}

fn check_equal(
    equation: &'static str,
    lhs: &TruncatedLaurentSeries,
    rhs: &TruncatedLaurentSeries,
    log: &mut Vec<(String, i64)>,
) -> Result<(), LaurentError> {
    if let Some(degree) = lhs.first_mismatch(rhs) {
        return Err(LaurentError::MismatchAt { equation, degree });
    }
    log.push((equation.to_string(), lhs.floor().max(rhs.floor())));
    Ok(())
}
