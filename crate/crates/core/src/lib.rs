//! Exact continued fractions of the generalized Thue-Morse series
//! `f_d(x) = prod_{t>=0} (1 - x^{-d^t})` and certification of the Mahler
//! numbers `f_d(a)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: rationals and sparse univariate polynomials over Q.
//! * [`laurent`]: truncated Laurent series in `x^{-1}` with an exact floor.
//! * [`contfrac`]: the Euclidean continued-fraction oracle.
//! * [`structure`]: convergent transports, classification and the monic
//!   beta recurrence for `g_d`.
//! * [`padic`]: multiplicative orders, Hensel lifting and witness search.
//! * [`approx`]: certified real evaluation and approximation quality.

pub mod approx;
pub mod arith;
pub mod contfrac;
pub mod laurent;
pub mod padic;
pub mod structure;

pub use arith::{Degree, IntPoly, IntPolyWithContent, RatPoly, Rational};
pub use contfrac::{CfExpansion, Convergent, MonicCf};
pub use laurent::{SeriesDegree, SeriesFamily, SeriesKind, TruncatedLaurentSeries};
