use serde::{Deserialize, Serialize};

use super::convergents::IntegerConvergent;
use super::modular::{inv_mod, mul_mod, pow_mod};
use super::order::iterated_power;
use super::search::BadApproxWitness;
use super::PadicError;
use crate::arith::eval_mod_u64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HenselReport {
    pub a: u64,
    pub d: u32,
    pub p: u64,
    pub t: usize,
    pub m: u32,
    pub modulus: u64,
    /// Root of `q_t` modulo `p^m` lying over the witness residue.
    pub lifted_root: u64,
    /// Least `n >= n0` with `a^{d^n}` equal to the lifted root mod `p^m`.
    pub n: u64,
    pub cap: u64,
}

/// Lifts the witness root of `q_t` to `p^m` by Newton iteration, then finds
/// `n` with `p^m | q_t(a^{d^n})`, searching at most `cap` steps past `n0`
/// (default `4 p^{m-1}`).
pub fn hensel_divisibility_demo(
    w: &BadApproxWitness,
    conv: &IntegerConvergent,
    m: u32,
    cap: Option<u64>,
) -> Result<HenselReport, PadicError> {
    if m < 2 {
        return Err(PadicError::InvalidParameter("m must be at least 2".into()));
    }
    if conv.t != w.t {
        return Err(PadicError::InvalidParameter("convergent does not match the witness".into()));
    }
    let overflow = || PadicError::Overflow(format!("{}^{m} exceeds 63 bits", w.p));
    let modulus = w.p.checked_pow(m).filter(|&x| x < 1 << 63).ok_or_else(overflow)?;
    let cap = match cap {
        Some(c) => c,
        None => w.p.checked_pow(m - 1).and_then(|x| x.checked_mul(4)).ok_or_else(overflow)?,
    };
    let q = conv.q.reduce_mod_u64(modulus);
    let dq = conv.q.derivative().reduce_mod_u64(modulus);
    let mut r = w.residue % modulus;
    // Quadratic convergence: a handful of steps reaches any m below 64.
    for _ in 0..8 {
        let value = eval_mod_u64(&q, r, modulus);
        if value == 0 {
            break;
        }
        let slope = eval_mod_u64(&dq, r, modulus);
        let inv = inv_mod(slope, modulus)
            .ok_or_else(|| PadicError::InvalidParameter("derivative is not a unit at the root".into()))?;
        r = (r + modulus - mul_mod(value, inv, modulus)) % modulus;
    }
    if eval_mod_u64(&q, r, modulus) != 0 {
        return Err(PadicError::InvalidParameter("Newton iteration did not converge".into()));
    }
    let mut x = iterated_power(w.a, w.d as u64, w.n0, modulus);
    for step in 0..=cap {
        if x == r {
            debug_assert_eq!(eval_mod_u64(&q, x, modulus), 0);
            return Ok(HenselReport {
                a: w.a,
                d: w.d,
                p: w.p,
                t: w.t,
                m,
                modulus,
                lifted_root: r,
                n: w.n0 + step,
                cap,
            });
        }
        x = pow_mod(x, w.d as u64, modulus);
    }
    Err(PadicError::SearchExhausted { cap })
}
