use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::modular::{factorize, is_prime, pow_mod, primes_up_to, totient};
use super::PadicError;

/// `|Gamma(base, prime^power)|`, the multiplicative order of `base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaOrder {
    pub base: u64,
    pub prime: u64,
    pub power: u32,
    pub order: u64,
}

/// Least `e >= 1` with `a^e = 1 (mod m)`, by descending through the divisors
/// of `phi(m)`.
pub fn mult_order(a: u64, m: u64) -> Result<u64, PadicError> {
    if m == 0 {
        return Err(PadicError::InvalidParameter("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    if a.gcd(&m) != 1 {
        return Err(PadicError::NotCoprime { a, m });
    }
    let mut order = totient(m);
    for (r, _) in factorize(order) {
        while order.is_multiple_of(r) && pow_mod(a, order / r, m) == 1 {
            order /= r;
        }
    }
    Ok(order)
}

fn check_odd_prime(p: u64) -> Result<(), PadicError> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(PadicError::InvalidParameter(format!("{p} is not an odd prime")));
    }
    if p.checked_mul(p).is_none() {
        return Err(PadicError::Overflow(format!("{p}^2 exceeds 64 bits")));
    }
    Ok(())
}

/// `|Gamma(a, p^2)| = p |Gamma(a, p)|`.
pub fn gamma_growth(a: u64, p: u64) -> Result<bool, PadicError> {
    check_odd_prime(p)?;
    Ok(mult_order(a, p * p)? == p * mult_order(a, p)?)
}

/// `a^{p-1} != 1 (mod p^2)`. When true, [`gamma_growth`] must hold as well;
/// a counterexample is reported as an error.
pub fn fermat_quotient_nonzero(a: u64, p: u64) -> Result<bool, PadicError> {
    check_odd_prime(p)?;
    if a.is_multiple_of(p) {
        return Err(PadicError::NotCoprime { a, m: p });
    }
    let nonzero = pow_mod(a, p - 1, p * p) != 1;
    if nonzero && !gamma_growth(a, p)? {
        return Err(PadicError::LemmaWViolated { a, p });
    }
    Ok(nonzero)
}

/// Odd primes `p <= bound`, `p !| a`, with `a^{p-1} = 1 (mod p^2)`.
pub fn wieferich_scan(a: u64, bound: u64) -> Vec<u64> {
    let primes = primes_up_to(bound);
    primes
        .par_iter()
        .copied()
        .filter(|&p| p > 2 && !a.is_multiple_of(p) && pow_mod(a, p - 1, p * p) == 1)
        .collect()
}

/// `p || n`: `p` divides `n` but `p^2` does not.
pub fn exact_divisibility(p: u64, n: &BigInt) -> bool {
    let p = BigInt::from(p);
    !n.is_zero() && n.mod_floor(&p).is_zero() && !n.mod_floor(&(&p * &p)).is_zero()
}

/// `p || a^{d^{n0}} - 1`, read off the residue `r = a^{d^{n0}} mod p^2`.
pub fn exactly_divides_residue(p: u64, r: u64) -> bool {
    let m = p * p;
    let shifted = (r + m - 1) % m;
    shifted.is_multiple_of(p) && shifted != 0
}

/// `a^{d^n} mod m` by `n` successive `d`-th powers.
pub fn iterated_power(a: u64, d: u64, n: u64, m: u64) -> u64 {
    (0..n).fold(a % m, |x, _| pow_mod(x, d, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaGammaReport {
    pub a: u64,
    pub p: u64,
    pub orders: Vec<GammaOrder>,
}

/// Checks `|Gamma(a, p^{m+1})| = p^m |Gamma(a, p)|` for `m <= max_m`.
pub fn lemma_gamma_check(a: u64, p: u64, max_m: u32) -> Result<LemmaGammaReport, PadicError> {
    if max_m < 1 {
        return Err(PadicError::InvalidParameter("max_m must be at least 1".into()));
    }
    if !gamma_growth(a, p)? {
        return Err(PadicError::HypothesisFailed { a, p });
    }
    let base = mult_order(a, p)?;
    let mut orders = vec![GammaOrder { base: a, prime: p, power: 1, order: base }];
    for m in 1..=max_m {
        let modulus = p
            .checked_pow(m + 1)
            .ok_or_else(|| PadicError::Overflow(format!("{p}^{} exceeds 64 bits", m + 1)))?;
        let order = mult_order(a, modulus)?;
        let expected = p.pow(m) * base;
        if order != expected {
            return Err(PadicError::LemmaGammaViolated { a, p, m, expected, order });
        }
        orders.push(GammaOrder { base: a, prime: p, power: m + 1, order });
    }
    Ok(LemmaGammaReport { a, p, orders })
}
