use serde::{Deserialize, Serialize};

use super::StructureError;
use crate::arith::{RatPoly, Rational};
use crate::contfrac::{cf_expand_prefix, expand_family, PrecisionPolicy};
use crate::laurent::{finite_product, rate_of_approximation, series, SeriesKind, TruncatedLaurentSeries};
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateRow {
    pub k: u32,
    pub measured: i64,
    pub expected: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellApproxReport {
    pub d: u32,
    pub rates: Vec<RateRow>,
    pub strictly_increasing: bool,
    /// `(index, degree)` of the first partial quotient of degree `>= d`.
    pub first_large_quotient: Option<(usize, usize)>,
    pub depth: usize,
}

/// Rates of the truncated products `r_k` against `f_d` for `k <= k_max`, and
/// the first partial quotient of `g_d` with degree at least `d` within
/// `depth` partial quotients.
pub fn wellapprox_witness(d: u32, k_max: u32, depth: usize) -> Result<WellApproxReport, StructureError> {
    if d < 4 {
        return Err(StructureError::InvalidParameter(format!("d = {d}: need d >= 4")));
    }
    let top = (d as i64)
        .checked_pow(k_max + 1)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| StructureError::InvalidParameter("k_max too large".into()))?;
    let f = series(d, SeriesKind::F, -(top + 8))?;
    let mut rates = Vec::new();
    for k in 0..=k_max {
        let (p, e) = finite_product(d, k);
        let q = RatPoly::monomial(Rational::one(), e);
        let measured = rate_of_approximation(&f, &p, &q)?;
        let dk = (d as i64).pow(k + 1);
        let expected = dk - 2 * (dk - 1) / (d as i64 - 1);
        rates.push(RateRow { k, measured, expected });
    }
    let strictly_increasing = rates.windows(2).all(|w| w[1].measured > w[0].measured);
    let (cf, _) = expand_family(d, SeriesKind::G, depth, PrecisionPolicy::default())?;
    let first_large_quotient = cf
        .partial_quotients
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| a.deg().filter(|&k| k >= d as usize).map(|k| (i, k)));
    Ok(WellApproxReport { d, rates, strictly_increasing, first_large_quotient, depth })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub window: usize,
    /// Largest `deg a_i`, `i >= 1`, among convergents of `g_d` with `deg q <= window`.
    pub max_degree_g: usize,
    /// The same for `(a/b) g_d` with `deg q <= window + deg b`.
    pub max_degree_scaled: usize,
    /// `deg a + deg b`: multiplying by `a/b` moves any rate by at most this much.
    pub shift: usize,
}

fn max_quotient_degree(u: &TruncatedLaurentSeries, window: usize) -> Option<usize> {
    let cf = cf_expand_prefix(u, 4 * window + 8);
    let covered = cf.convergents.last().is_some_and(|c| c.deg_q() >= window);
    if !covered {
        return None;
    }
    cf.convergents
        .iter()
        .filter(|c| c.deg_q() <= window)
        .filter_map(|c| c.rate)
        .map(|r| r as usize)
        .max()
}

/// Finite form of the invariance of approximation quality under `u -> (a/b) u`:
/// a convergent of `g_d` with rate `c` yields an approximation of `(a/b) g_d`
/// with rate at least `c - deg a - deg b`, and conversely.
pub fn rational_equivalence_window(
    d: u32,
    a: &RatPoly,
    b: &RatPoly,
    window: usize,
) -> Result<WindowReport, StructureError> {
    let (da, db) = match (a.deg(), b.deg()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(StructureError::InvalidParameter("a and b must be nonzero".into())),
    };
    let shift = da + db;
    let mut depth = (4 * (window + shift) + 32) as i64;
    loop {
        let g = series(d, SeriesKind::G, -depth)?;
        let b_series = TruncatedLaurentSeries::from_poly(b, -depth - 4 * db as i64);
        let scaled = g.mul_poly(a).div(&b_series)?;
        let mg = max_quotient_degree(&g, window);
        let ms = max_quotient_degree(&scaled, window + db);
        if let (Some(max_degree_g), Some(max_degree_scaled)) = (mg, ms) {
            return Ok(WindowReport { window, max_degree_g, max_degree_scaled, shift });
        }
        if depth > 1 << 14 {
            return Err(StructureError::InvalidParameter("window too large".into()));
        }
        depth *= 2;
    }
}
