//! Continued fractions of Laurent series by the Euclidean algorithm.
//!
//! A series truncated at floor `-M` is exactly `S(x)/x^M` for a polynomial
//! `S`, so running polynomial Euclid on `(S, x^M)` yields the continued
//! fraction of the truncation. A convergent `p_k/q_k` of the truncation is a
//! convergent of the true series whenever `2 deg q_k <= M`, and its rate
//! `deg a_{k+1}` is certified when `2 deg q_k + deg a_{k+1} <= M`. Anything
//! beyond that is refused with [`CfError::InsufficientPrecision`].

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rational_to_string, RatPoly, Rational};
use crate::laurent::{rate_of_approximation, series, LaurentError, SeriesKind, TruncatedLaurentSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfError {
    #[error("insufficient precision at floor {floor} (convergent {index})")]
    InsufficientPrecision { floor: i64, index: usize },
    #[error("precision cap {cap} reached while expanding")]
    PrecisionCapReached { cap: i64 },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("convergent {index}: expected rate {expected}, measured {measured}")]
    RateMismatch { index: usize, expected: i64, measured: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `p_n/q_n` with the rate `deg a_{n+1}`; `rate` is `None` for the last
/// convergent of a terminating (rational) expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    #[serde(rename = "n")]
    pub index: usize,
    pub p: RatPoly,
    pub q: RatPoly,
    pub rate: Option<u64>,
}

impl Convergent {
    /// The same fraction scaled so that `q` is monic.
    pub fn monic(&self) -> (RatPoly, RatPoly) {
        let inv = self.q.leading_coeff().expect("nonzero denominator").recip();
        (self.p.scale(&inv), self.q.scale(&inv))
    }

    pub fn deg_q(&self) -> usize {
        self.q.deg().expect("nonzero denominator")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub partial_quotients: Vec<RatPoly>,
    pub convergents: Vec<Convergent>,
    /// True when the input was rational and the expansion ended exactly.
    pub terminated: bool,
}

impl CfExpansion {
    pub fn len(&self) -> usize {
        self.convergents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convergents.is_empty()
    }

    pub fn rates(&self) -> Vec<Option<u64>> {
        self.convergents.iter().map(|c| c.rate).collect()
    }

    /// `p_{n+1} q_n - p_n q_{n+1}`.
    pub fn determinant(&self, n: usize) -> RatPoly {
        let (a, b) = (&self.convergents[n], &self.convergents[n + 1]);
        &(&b.p * &a.q) - &(&a.p * &b.q)
    }

    /// JSON view, optionally carrying a beta sequence.
    pub fn to_json(&self, betas: Option<&[Rational]>) -> CfJson {
        CfJson {
            a: self.partial_quotients.clone(),
            convergents: self.convergents.clone(),
            betas: betas.map(|b| b.iter().map(rational_to_string).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfJson {
    pub a: Vec<RatPoly>,
    pub convergents: Vec<Convergent>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub betas: Option<Vec<String>>,
}

/// `(lambda, R)` with `u = lambda * R` and `R` primitive over Z; zero maps to `(1, 0)`.
fn primitive_part(u: &RatPoly) -> (Rational, RatPoly) {
    match u.normalize_integer() {
        Ok(n) => (n.scale, n.primitive.to_ratpoly()),
        Err(_) => (Rational::one(), RatPoly::zero()),
    }
}

/// Euclid on `num/den`. With `budget = Some(M)` the fraction is a truncation
/// `S/x^M` and every emitted item is certified against the true series.
fn euclid(
    num: &RatPoly,
    den: &RatPoly,
    n: usize,
    budget: Option<usize>,
    floor: i64,
    lenient: bool,
) -> Result<CfExpansion, CfError> {
    let (a0, r) = num.divmod(den).map_err(|e| CfError::InvalidParameter(e.to_string()))?;
    let mut quotients = vec![a0.clone()];
    let mut convergents = Vec::new();
    // Convergents are carried as `rho * (p^, q^)` with `q^` monic; the
    // monic pair has small coefficients even when the raw pair does not.
    let (mut p_prev, mut q_prev) = (RatPoly::one(), RatPoly::zero());
    let (mut p, mut q) = (a0, RatPoly::one());
    let (mut rho_prev, mut rho) = (Rational::one(), Rational::one());
    // Remainders are held as `lambda * R` with `R` primitive over Z, which
    // keeps coefficient growth out of the long remainder polynomials.
    let (mut l_prev, mut r_prev) = primitive_part(den);
    let (mut l_cur, mut r_cur) = primitive_part(&r);
    let mut terminated = false;
    for k in 0..=n {
        let dq = q.deg().expect("denominators are nonzero");
        let short = || CfError::InsufficientPrecision { floor, index: k };
        if budget.is_some_and(|m| 2 * dq > m) {
            if lenient {
                quotients.truncate(k);
                break;
            }
            return Err(short());
        }
        if r_cur.is_zero() {
            if budget.is_some() {
                if lenient {
                    quotients.truncate(k);
                    break;
                }
                // A truncated series that looks rational is not proof of rationality.
                return Err(short());
            }
            convergents.push(Convergent { index: k, p: p.scale(&rho), q: q.scale(&rho), rate: None });
            terminated = true;
            break;
        }
        let (a_scaled, r_scaled) = r_prev.divmod(&r_cur).expect("nonzero remainder");
        let a_next = a_scaled.scale(&(&l_prev / &l_cur));
        let c = a_next.deg().expect("quotient of a higher degree remainder");
        if c == 0 {
            return Err(CfError::Structural(format!("partial quotient {} is constant", k + 1)));
        }
        if budget.is_some_and(|m| 2 * dq + c > m) {
            if lenient {
                quotients.truncate(k);
                break;
            }
            return Err(short());
        }
        convergents.push(Convergent { index: k, p: p.scale(&rho), q: q.scale(&rho), rate: Some(c as u64) });
        if k == n {
            break;
        }
        let a_hat = a_scaled.monic();
        let rho_next = &rho * a_next.leading_coeff().expect("nonzero quotient");
        let beta = &rho_prev / &rho_next;
        let p_next = &(&a_hat * &p) + &p_prev.scale(&beta);
        let q_next = &(&a_hat * &q) + &q_prev.scale(&beta);
        rho_prev = std::mem::replace(&mut rho, rho_next);
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        quotients.push(a_next);
        let (l_next, r_next) = primitive_part(&r_scaled);
        r_prev = std::mem::replace(&mut r_cur, r_next);
        let l_next = &l_prev * &l_next;
        l_prev = std::mem::replace(&mut l_cur, l_next);
    }
    Ok(CfExpansion { partial_quotients: quotients, convergents, terminated })
}

/// Partial quotients `a_0..a_n` and convergents `0..n` of a truncated series.
pub fn cf_expand(u: &TruncatedLaurentSeries, n: usize) -> Result<CfExpansion, CfError> {
    let floor = u.floor();
    if floor > 0 {
        return Err(CfError::InsufficientPrecision { floor, index: 0 });
    }
    let m = (-floor) as usize;
    let s = RatPoly::from_terms(u.terms().map(|(k, c)| ((k - floor) as usize, c.clone())));
    let x_m = RatPoly::monomial(Rational::one(), m);
    euclid(&s, &x_m, n, Some(m), floor, false)
}

/// Like [`cf_expand`], but stops quietly at the first item the precision
/// cannot certify and returns the certified prefix.
pub fn cf_expand_prefix(u: &TruncatedLaurentSeries, max_n: usize) -> CfExpansion {
    let floor = u.floor().min(0);
    let m = (-floor) as usize;
    let s = RatPoly::from_terms(u.terms().map(|(k, c)| ((k - floor) as usize, c.clone())));
    let x_m = RatPoly::monomial(Rational::one(), m);
    euclid(&s, &x_m, max_n, Some(m), floor, true).expect("lenient expansion does not fail")
}

/// Finite continued fraction of the rational function `p/q`.
pub fn cf_expand_rational(p: &RatPoly, q: &RatPoly, n: usize) -> Result<CfExpansion, CfError> {
    if q.is_zero() {
        return Err(CfError::InvalidParameter("zero denominator".into()));
    }
    euclid(p, q, n, None, i64::MIN, false)
}

/// Precision schedule for drivers that refloor on failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial_floor: Option<i64>,
    /// Largest `-floor` the driver may try.
    pub max_depth: i64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { initial_floor: None, max_depth: 1 << 16 }
    }
}

/// Starting floor for `n` convergents of a degree-`d` family.
pub fn default_floor(d: u32, n: usize) -> i64 {
    -(2 * n as i64 * d as i64 + 16)
}

/// Expands `kind_d` to `n` convergents, doubling the depth on precision
/// failures. Returns the expansion together with the series it came from.
pub fn expand_family(
    d: u32,
    kind: SeriesKind,
    n: usize,
    policy: PrecisionPolicy,
) -> Result<(CfExpansion, TruncatedLaurentSeries), CfError> {
    let mut floor = policy.initial_floor.unwrap_or_else(|| default_floor(d, n)).min(-1).max(-policy.max_depth);
    loop {
        let u = series(d, kind, floor)?;
        match cf_expand(&u, n) {
            Err(CfError::InsufficientPrecision { .. }) => {
                if -floor >= policy.max_depth {
                    return Err(CfError::PrecisionCapReached { cap: policy.max_depth });
                }
                floor = (2 * floor).max(-policy.max_depth);
            }
            other => return other.map(|cf| (cf, u)),
        }
    }
}

/// Monic view of an expansion: `q^_{n+1} = a^_{n+1} q^_n + beta_{n+1} q^_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicCf {
    pub monic_quotients: Vec<RatPoly>,
    /// Indexed by `n`; `betas[0] = betas[1] = 0` since `q_{-1} = 0`.
    pub betas: Vec<Rational>,
    pub monic_denominators: Vec<RatPoly>,
    pub monic_numerators: Vec<RatPoly>,
    pub leading_coeffs: Vec<Rational>,
}

impl MonicCf {
    /// Regenerates the monic denominators from the monic recurrence.
    pub fn reconstruct(&self) -> Vec<RatPoly> {
        let mut out: Vec<RatPoly> = vec![RatPoly::one()];
        for n in 1..self.monic_denominators.len() {
            let mut next = &self.monic_quotients[n] * &out[n - 1];
            if n >= 2 {
                next = &next + &out[n - 2].scale(&self.betas[n]);
            }
            out.push(next);
        }
        out
    }
}

pub fn monic_normalize(cf: &CfExpansion) -> Result<MonicCf, CfError> {
    if cf.convergents.len() < 2 {
        return Err(CfError::InvalidParameter("monic view needs at least two convergents".into()));
    }
    let rho: Vec<Rational> = cf
        .convergents
        .iter()
        .map(|c| c.q.leading_coeff().expect("nonzero denominator").clone())
        .collect();
    let n = rho.len();
    let mut monic_quotients = vec![cf.partial_quotients[0].clone()];
    let mut betas = vec![Rational::zero(), Rational::zero()];
    for k in 1..n {
        monic_quotients.push(cf.partial_quotients[k].scale(&(&rho[k - 1] / &rho[k])));
        if k >= 2 {
            betas.push(&rho[k - 2] / &rho[k]);
        }
    }
    let inv: Vec<Rational> = rho.iter().map(|r| r.recip()).collect();
    Ok(MonicCf {
        monic_quotients,
        betas,
        monic_denominators: cf.convergents.iter().zip(&inv).map(|(c, i)| c.q.scale(i)).collect(),
        monic_numerators: cf.convergents.iter().zip(&inv).map(|(c, i)| c.p.scale(i)).collect(),
        leading_coeffs: rho,
    })
}

/// Measures every convergent's rate directly against `u` and checks it
/// equals the recorded `deg a_{n+1} >= 1`.
pub fn convergent_soundness(u: &TruncatedLaurentSeries, cf: &CfExpansion) -> Result<Vec<u64>, CfError> {
    let mut rates = Vec::new();
    for c in &cf.convergents {
        let Some(expected) = c.rate else { continue };
        let measured = rate_of_approximation(u, &c.p, &c.q)?;
        if measured != expected as i64 || expected == 0 {
            return Err(CfError::RateMismatch { index: c.index, expected: expected as i64, measured });
        }
        rates.push(expected);
    }
    Ok(rates)
}
