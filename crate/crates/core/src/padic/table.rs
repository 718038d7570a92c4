use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::convergents::ConvergentTable;
use super::modular::is_prime;
use super::order::gamma_growth;
use super::PadicError;
use crate::arith::eval_mod_u64;

/// One `(p, t, residue)` entry of the `d = 2` witness table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u64,
    /// `None` marks a prime with no qualifying convergent up to the bound.
    pub t: Option<usize>,
    pub residue: Option<u64>,
    /// Row belongs to the least `t` with a qualifying root for this prime.
    pub first_for_p: bool,
    /// Row covers some residue class of `a` not covered by earlier rows.
    pub new_classes: bool,
    /// Units `a mod p^2` with `a^{2^{n0}} = residue` for some `n0 >= 1`.
    pub a_classes: Vec<u64>,
}

/// All `a mod p^2` (units) whose iterated squares reach `r`.
pub fn a_classes(p: u64, r: u64) -> Vec<u64> {
    let m = p * p;
    let mut preimages: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for x in 1..m {
        if x % p != 0 {
            preimages[((x * x) % m) as usize].push(x);
        }
    }
    let mut seen = vec![false; m as usize];
    let mut frontier = vec![r];
    while let Some(y) = frontier.pop() {
        for &x in &preimages[y as usize] {
            if !seen[x as usize] {
                seen[x as usize] = true;
                frontier.push(x);
            }
        }
    }
    (1..m).filter(|&x| seen[x as usize]).collect()
}

/// Every `(t, residue)` with `t <= t_bound` satisfying conditions 2 to 4 at a
/// nontrivial 1-unit residue mod `p^2`, for each prime in `primes`.
pub fn table_rows(primes: &[u64], t_bound: usize, table: &ConvergentTable) -> Result<Vec<TableRow>, PadicError> {
    if table.d != 2 {
        return Err(PadicError::InvalidParameter("the table is built for d = 2".into()));
    }
    let mut rows = Vec::new();
    for &p in primes {
        if p % 2 == 0 || !is_prime(p) || p > 1 << 16 {
            return Err(PadicError::InvalidParameter(format!("{p} is not an odd prime below 2^16")));
        }
        let none = TableRow { p, t: None, residue: None, first_for_p: false, new_classes: false, a_classes: vec![] };
        if !gamma_growth(2, p)? {
            rows.push(none);
            continue;
        }
        let m = p * p;
        let mut covered: BTreeSet<u64> = BTreeSet::new();
        let mut first_t: Option<usize> = None;
        for t in 0..=t_bound.min(table.t_max()) {
            let conv = &table.convs[t];
            if !conv.scale_invertible_mod(p) {
                continue;
            }
            if eval_mod_u64(&conv.q.derivative().reduce_mod_u64(p), 1, p) == 0 {
                continue;
            }
            let coeffs = conv.q.reduce_mod_u64(m);
            for k in 1..p {
                let r = 1 + k * p;
                if eval_mod_u64(&coeffs, r, m) != 0 {
                    continue;
                }
                let classes = a_classes(p, r);
                let new_classes = classes.iter().any(|a| !covered.contains(a));
                covered.extend(classes.iter().copied());
                let first = *first_t.get_or_insert(t) == t;
                rows.push(TableRow { p, t: Some(t), residue: Some(r), first_for_p: first, new_classes, a_classes: classes });
            }
        }
        if first_t.is_none() {
            rows.push(none);
        }
    }
    Ok(rows)
}
