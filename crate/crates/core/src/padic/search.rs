use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::{check_conditions, Condition2Variant, ConditionEvidence, ConditionVerdicts};
use super::convergents::ConvergentTable;
use super::modular::{is_prime, pow_mod, primes_up_to};
use super::order::{exactly_divides_residue, gamma_growth};
use super::PadicError;
use crate::arith::eval_mod_u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub p_bound: u64,
    pub n0_bound: u64,
    pub t_bound: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self { p_bound: 40, n0_bound: 16, t_bound: 200 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Restrict the scan to these primes (still capped by `p_bound`).
    pub primes: Option<Vec<u64>>,
    /// Scan primes one at a time instead of in parallel.
    pub serial: bool,
    pub variant: Condition2Variant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadApproxWitness {
    pub a: u64,
    pub d: u32,
    pub p: u64,
    pub n0: u64,
    pub t: usize,
    pub residue: u64,
    pub conditions: ConditionVerdicts,
    /// Primitive integer `q_t`, ascending coefficients.
    pub qt: String,
    pub evidence: ConditionEvidence,
}

/// How far a prime got before the search gave up on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMiss {
    pub p: u64,
    /// Last condition examined: `"p | a"`, `"c2"`, `"c1"` (no admissible `n0`)
    /// or `"c3/c4"` (no convergent root).
    pub failed: String,
    pub admissible_n0: Vec<u64>,
    pub scale_skipped_t: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotFoundSummary {
    pub a: u64,
    pub d: u32,
    pub bounds: SearchBounds,
    pub primes: Vec<NearMiss>,
}

enum PrimeOutcome {
    Hit { t: usize, n0: u64, residue: u64 },
    Miss(NearMiss),
}

fn scan_prime(a: u64, d: u32, p: u64, bounds: &SearchBounds, table: &ConvergentTable, variant: Condition2Variant) -> PrimeOutcome {
    let miss = |failed: &str, admissible_n0: Vec<u64>, scale_skipped_t: Vec<usize>| {
        PrimeOutcome::Miss(NearMiss { p, failed: failed.into(), admissible_n0, scale_skipped_t })
    };
    if a.is_multiple_of(p) {
        return miss("p | a", vec![], vec![]);
    }
    let p2 = p * p;
    let c2 = match variant {
        Condition2Variant::Growth => gamma_growth(d as u64, p).unwrap_or(false),
        Condition2Variant::PrimitiveRoot => {
            super::order::mult_order(d as u64, p2).map(|o| o == p * (p - 1)).unwrap_or(false)
        }
    };
    if !c2 {
        return miss("c2", vec![], vec![]);
    }
    // Distinct admissible residues, each with its least n0.
    let mut admissible: Vec<(u64, u64)> = Vec::new();
    let mut x = a % p2;
    for n0 in 1..=bounds.n0_bound {
        x = pow_mod(x, d as u64, p2);
        if exactly_divides_residue(p, x) && !admissible.iter().any(|&(_, r)| r == x) {
            admissible.push((n0, x));
        }
    }
    if admissible.is_empty() {
        return miss("c1", vec![], vec![]);
    }
    let mut skipped = Vec::new();
    let t_max = bounds.t_bound.min(table.t_max());
    for t in 0..=t_max {
        if d == 3 && t % 2 == 1 {
            continue;
        }
        let conv = &table.convs[t];
        if !conv.scale_invertible_mod(p) {
            skipped.push(t);
            continue;
        }
        if eval_mod_u64(&conv.q.derivative().reduce_mod_u64(p), 1, p) == 0 {
            continue;
        }
        let coeffs = conv.q.reduce_mod_u64(p2);
        if let Some(&(n0, residue)) = admissible.iter().find(|&&(_, r)| eval_mod_u64(&coeffs, r, p2) == 0) {
            return PrimeOutcome::Hit { t, n0, residue };
        }
    }
    miss("c3/c4", admissible.iter().map(|&(n0, _)| n0).collect(), skipped)
}

/// Searches primes in increasing order; for each prime, convergent indices
/// in increasing order; for each index, the least admissible `n0`. The first
/// hit in this `(p, t, n0)` order is returned regardless of scheduling.
pub fn witness_search(
    a: u64,
    d: u32,
    bounds: SearchBounds,
    table: &ConvergentTable,
    opts: &SearchOptions,
) -> Result<BadApproxWitness, PadicError> {
    if a < 2 {
        return Err(PadicError::InvalidParameter(format!("a = {a} must be at least 2")));
    }
    if d != 2 && d != 3 {
        return Err(PadicError::InvalidParameter(format!("d = {d}: only 2 and 3 are covered")));
    }
    if bounds.p_bound < 3 || bounds.n0_bound < 1 || bounds.p_bound > u32::MAX as u64 {
        return Err(PadicError::InvalidParameter("bounds must be positive and p_bound >= 3".into()));
    }
    if table.d != d {
        return Err(PadicError::InvalidParameter("convergent table is for another d".into()));
    }
    let min_p = if d == 2 { 3 } else { 5 };
    let mut primes: Vec<u64> = match &opts.primes {
        Some(list) => list.iter().copied().filter(|&p| is_prime(p)).collect(),
        None => primes_up_to(bounds.p_bound),
    };
    primes.retain(|&p| p >= min_p && p <= bounds.p_bound);
    primes.sort_unstable();
    primes.dedup();

    let outcomes: Vec<PrimeOutcome> = if opts.serial {
        let mut out = Vec::new();
        for &p in &primes {
            let o = scan_prime(a, d, p, &bounds, table, opts.variant);
            let hit = matches!(o, PrimeOutcome::Hit { .. });
            out.push(o);
            if hit {
                break;
            }
        }
        out
    } else {
        primes.par_iter().map(|&p| scan_prime(a, d, p, &bounds, table, opts.variant)).collect()
    };

    let mut misses = Vec::new();
    for (&p, outcome) in primes.iter().zip(outcomes) {
        match outcome {
            PrimeOutcome::Hit { t, n0, residue } => {
                let conv = &table.convs[t];
                // Double entry: re-derive every verdict from scratch.
                let report = check_conditions(a, d, p, n0, conv, opts.variant)?;
                if !report.conditions.all() || report.residue != residue {
                    return Err(PadicError::ReplayMismatch(format!("search hit at p = {p}, t = {t} does not re-validate")));
                }
                return Ok(BadApproxWitness {
                    a,
                    d,
                    p,
                    n0,
                    t,
                    residue,
                    conditions: report.conditions,
                    qt: conv.q.to_text(),
                    evidence: report.evidence,
                });
            }
            PrimeOutcome::Miss(m) => misses.push(m),
        }
    }
    Err(PadicError::NotFound(Box::new(NotFoundSummary { a, d, bounds, primes: misses })))
}

/// Re-validates a witness from nothing but its stated parameters.
pub fn replay_witness(w: &BadApproxWitness) -> Result<super::ConditionReport, PadicError> {
    let table = ConvergentTable::for_g(w.d, w.t.max(2))?;
    let conv = &table.convs[w.t];
    if conv.q.to_text() != w.qt {
        return Err(PadicError::ReplayMismatch(format!("q_{} is {}, witness states {}", w.t, conv.q.to_text(), w.qt)));
    }
    let report = check_conditions(w.a, w.d, w.p, w.n0, conv, Condition2Variant::Growth)?;
    if report.residue != w.residue {
        return Err(PadicError::ReplayMismatch(format!("residue is {}, witness states {}", report.residue, w.residue)));
    }
    if !report.conditions.all() {
        return Err(PadicError::ReplayMismatch(format!("conditions {:?}", report.conditions)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a15_d2() {
        let table = ConvergentTable::for_g(2, 50).unwrap();
        let b = SearchBounds { p_bound: 11, n0_bound: 8, t_bound: 50 };
        let w = witness_search(15, 2, b, &table, &SearchOptions::default()).unwrap();
        assert_eq!((w.p, w.t, w.residue, w.n0), (7, 41, 15, 3));
    }

    #[test]
    fn a2_d3() {
        let table = ConvergentTable::for_g(3, 10).unwrap();
        let b = SearchBounds { p_bound: 7, n0_bound: 6, t_bound: 10 };
        let w = witness_search(2, 3, b, &table, &SearchOptions::default()).unwrap();
        assert_eq!((w.p, w.n0, w.t, w.residue), (7, 2, 8, 22));
        assert_eq!(w.qt, "1,0,0,1,0,0,1,0,0,2,0,0,2");
        replay_witness(&w).unwrap();
    }

    #[test]
    fn serial_equals_parallel() {
        let table = ConvergentTable::for_g(2, 60).unwrap();
        let b = SearchBounds { p_bound: 40, n0_bound: 10, t_bound: 60 };
        for a in 2..30 {
            let par = witness_search(a, 2, b, &table, &SearchOptions::default());
            let ser = witness_search(a, 2, b, &table, &SearchOptions { serial: true, ..Default::default() });
            match (par, ser) {
                (Ok(x), Ok(y)) => assert_eq!(x, y),
                (Err(PadicError::NotFound(_)), Err(PadicError::NotFound(_))) => {}
                other => panic!("a = {a}: {other:?}"),
            }
        }
    }

    #[test]
    fn not_found_summary() {
        let table = ConvergentTable::for_g(2, 5).unwrap();
        let b = SearchBounds { p_bound: 5, n0_bound: 2, t_bound: 5 };
        match witness_search(9, 2, b, &table, &SearchOptions::default()) {
            Err(PadicError::NotFound(s)) => {
                assert_eq!(s.primes.iter().map(|m| m.p).collect::<Vec<_>>(), vec![3, 5]);
                assert_eq!(s.primes[0].failed, "p | a");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_json_shape() {
        let table = ConvergentTable::for_g(3, 10).unwrap();
        let b = SearchBounds { p_bound: 7, n0_bound: 6, t_bound: 10 };
        let w = witness_search(2, 3, b, &table, &SearchOptions::default()).unwrap();
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["conditions"], serde_json::json!({"c1": true, "c2": true, "c3": true, "c4": true}));
        let back: BadApproxWitness = serde_json::from_value(v).unwrap();
        assert_eq!(back, w);
    }
}
