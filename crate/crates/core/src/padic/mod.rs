//! p-adic certificates that a Mahler number `f_d(a)` is not badly
//! approximable.
//!
//! A witness is a prime `p`, an exponent `n0` and a convergent index `t`
//! such that
//!
//! 1. `p || a^{d^{n0}} - 1` (with `p` odd for `d = 2`, `p >= 5` for `d = 3`),
//! 2. `|Gamma(d, p^2)| = p |Gamma(d, p)|` (the base is the radix `d`, not `a`),
//! 3. `q_t(a^{d^{n0}}) = 0 (mod p^2)` (and `t` even for `d = 3`),
//! 4. `q_t'(1) != 0 (mod p)`,
//!
//! where `q_t` is the primitive integer form of the `t`-th monic convergent
//! denominator of `g_d`. Hensel lifting then produces `n` with `p^m` dividing
//! `q_t(a^{d^n})` for every `m`.

mod conditions;
mod convergents;
mod hensel;
mod modular;
mod order;
mod search;
mod table;

pub use conditions::{check_conditions, check_residue, ConditionEvidence, ConditionReport, ConditionVerdicts, Condition2Variant};
pub use convergents::{ConvergentTable, IntegerConvergent};
pub use hensel::{hensel_divisibility_demo, HenselReport};
pub use modular::{factorize, inv_mod, is_prime, mul_mod, pow_mod, primes_up_to, reduce, totient};
pub use order::{
    exact_divisibility, exactly_divides_residue, fermat_quotient_nonzero, gamma_growth, iterated_power,
    lemma_gamma_check, mult_order, wieferich_scan, GammaOrder, LemmaGammaReport,
};
pub use search::{replay_witness, witness_search, BadApproxWitness, NearMiss, NotFoundSummary, SearchBounds, SearchOptions};
pub use table::{a_classes, table_rows, TableRow};

use crate::contfrac::CfError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: u64, m: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("a^(p-1) != 1 mod p^2 but the order does not grow (a = {a}, p = {p})")]
    LemmaWViolated { a: u64, p: u64 },
    #[error("order growth fails for a = {a}, p = {p}")]
    HypothesisFailed { a: u64, p: u64 },
    #[error("order of {a} mod {p}^{m}+1 is {order}, expected {expected}")]
    LemmaGammaViolated { a: u64, p: u64, m: u32, expected: u64, order: u64 },
    #[error("d_t of convergent {t} is divisible by {p}")]
    ScaleNotInvertible { p: u64, t: usize },
    #[error("no witness within bounds")]
    NotFound(Box<NotFoundSummary>),
    #[error("no suitable n within {cap} steps")]
    SearchExhausted { cap: u64 },
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error(transparent)]
    Cf(#[from] CfError),
}
