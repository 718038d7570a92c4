use serde::{Deserialize, Serialize};

use super::convergents::IntegerConvergent;
use super::modular::is_prime;
use super::order::{exactly_divides_residue, gamma_growth, iterated_power, mult_order};
use super::PadicError;
use crate::arith::eval_mod_u64;

/// Which form of condition 2 to demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition2Variant {
    /// `|Gamma(d, p^2)| = p |Gamma(d, p)|`.
    #[default]
    Growth,
    /// `d` is a primitive root modulo `p^2` (stricter).
    PrimitiveRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdicts {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl ConditionVerdicts {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEvidence {
    /// `|Gamma(d, p)|` and `|Gamma(d, p^2)|`, when `p` does not divide `d`.
    pub order_p: Option<u64>,
    pub order_p2: Option<u64>,
    pub q_at_residue_mod_p2: u64,
    pub dq_at_one_mod_p: u64,
    pub t_parity_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub a: u64,
    pub d: u32,
    pub p: u64,
    pub n0: u64,
    pub t: usize,
    /// `a^{d^{n0}} mod p^2`.
    pub residue: u64,
    pub conditions: ConditionVerdicts,
    pub evidence: ConditionEvidence,
}

fn validate(d: u32, p: u64) -> Result<(), PadicError> {
    if d != 2 && d != 3 {
        return Err(PadicError::InvalidParameter(format!("d = {d}: only 2 and 3 are covered")));
    }
    if p < 2 || p > u32::MAX as u64 {
        return Err(PadicError::InvalidParameter(format!("p = {p} out of range")));
    }
    Ok(())
}

/// Conditions 2 to 4 at a given residue `r` mod `p^2`, plus the shape of
/// condition 1 (`r = 1 + cp` with `p !| c`), independent of any `a`.
pub fn check_residue(
    d: u32,
    p: u64,
    residue: u64,
    conv: &IntegerConvergent,
    variant: Condition2Variant,
) -> Result<(ConditionVerdicts, ConditionEvidence), PadicError> {
    validate(d, p)?;
    if !conv.scale_invertible_mod(p) {
        return Err(PadicError::ScaleNotInvertible { p, t: conv.t });
    }
    let p2 = p * p;
    let prime_ok = is_prime(p) && if d == 2 { p % 2 == 1 } else { p >= 5 };
    let c1 = prime_ok && exactly_divides_residue(p, residue % p2);
    let (order_p, order_p2, c2) = if prime_ok && !(d as u64).is_multiple_of(p) {
        let op = mult_order(d as u64, p)?;
        let op2 = mult_order(d as u64, p2)?;
        let ok = match variant {
            Condition2Variant::Growth => gamma_growth(d as u64, p)?,
            Condition2Variant::PrimitiveRoot => op2 == p * (p - 1),
        };
        (Some(op), Some(op2), ok)
    } else {
        (None, None, false)
    };
    let t_parity_ok = d != 3 || conv.t.is_multiple_of(2);
    let q_at = eval_mod_u64(&conv.q.reduce_mod_u64(p2), residue, p2);
    let c3 = t_parity_ok && q_at == 0;
    let dq_at_one = eval_mod_u64(&conv.q.derivative().reduce_mod_u64(p), 1, p);
    let c4 = dq_at_one != 0;
    Ok((
        ConditionVerdicts { c1, c2, c3, c4 },
        ConditionEvidence { order_p, order_p2, q_at_residue_mod_p2: q_at, dq_at_one_mod_p: dq_at_one, t_parity_ok },
    ))
}

/// Evaluates all four witness conditions for `f_d(a)` at `(p, n0, t)`.
/// Condition 2 uses the radix `d` as base.
pub fn check_conditions(
    a: u64,
    d: u32,
    p: u64,
    n0: u64,
    conv: &IntegerConvergent,
    variant: Condition2Variant,
) -> Result<ConditionReport, PadicError> {
    validate(d, p)?;
    let p2 = p * p;
    let residue = iterated_power(a, d as u64, n0, p2);
    let (mut conditions, evidence) = check_residue(d, p, residue, conv, variant)?;
    conditions.c1 &= n0 >= 1 && !a.is_multiple_of(p);
    Ok(ConditionReport { a, d, p, n0, t: conv.t, residue, conditions, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ConvergentTable;

    #[test]
    fn corollary_d3() {
        let tab = ConvergentTable::for_g(3, 8).unwrap();
        let r = check_conditions(2, 3, 7, 2, &tab.convs[8], Condition2Variant::Growth).unwrap();
        assert_eq!(r.residue, 22);
        assert!(r.conditions.all(), "{r:?}");
        assert_eq!(r.evidence.dq_at_one_mod_p, 2);
    }

    #[test]
    fn p3_row_d2() {
        let tab = ConvergentTable::for_g(2, 9).unwrap();
        let r = check_conditions(2, 2, 3, 2, &tab.convs[9], Condition2Variant::Growth).unwrap();
        assert_eq!(r.residue, 7);
        assert!(r.conditions.all());
        assert_eq!(r.evidence.dq_at_one_mod_p, 2);
    }

    #[test]
    fn a15_fails_at_p3() {
        let tab = ConvergentTable::for_g(2, 9).unwrap();
        for n0 in 1..8 {
            let r = check_conditions(15, 2, 3, n0, &tab.convs[9], Condition2Variant::Growth).unwrap();
            assert!(!(r.conditions.c1 && r.conditions.c3));
        }
    }

    #[test]
    fn odd_t_rejected_for_d3() {
        let tab = ConvergentTable::for_g(3, 15).unwrap();
        let conv = tab.convs.iter().find(|c| c.t % 2 == 1 && c.scale_invertible_mod(7)).unwrap();
        let r = check_conditions(2, 3, 7, 2, conv, Condition2Variant::Growth).unwrap();
        assert!(!r.evidence.t_parity_ok && !r.conditions.c3);
    }

    #[test]
    fn primitive_root_variant() {
        let tab = ConvergentTable::for_g(2, 9).unwrap();
        // 2 generates (Z/9)^*, so the stricter form also holds at p = 3.
        let r = check_conditions(2, 2, 3, 2, &tab.convs[9], Condition2Variant::PrimitiveRoot).unwrap();
        assert!(r.conditions.c2);
    }
}
