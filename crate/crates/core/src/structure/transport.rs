use serde::{Deserialize, Serialize};

use super::{FamilyData, StructureError};
use crate::arith::RatPoly;
use crate::contfrac::{CfExpansion, Convergent};
use crate::laurent::{rate_of_approximation, TruncatedLaurentSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    H,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    UToH,
    HToU,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportedConvergent {
    pub source: Convergent,
    pub origin: Origin,
    /// The transported fraction in lowest terms.
    pub result_p: RatPoly,
    pub result_q: RatPoly,
    pub claimed_rate_lower_bound: i64,
    pub measured_rate: i64,
    /// `(x-1) !| q` for origin H, `(x-1) !| p` for origin U.
    pub exact_rate_condition: bool,
}

fn reduce(p: &RatPoly, q: &RatPoly) -> (RatPoly, RatPoly) {
    let g = p.gcd(q);
    if g.deg() == Some(0) {
        return (p.clone(), q.clone());
    }
    (p.div_exact(&g).unwrap(), q.div_exact(&g).unwrap())
}

/// Carries a convergent of `h_d` (origin H) or `u_d` (origin U) with rate
/// `c` to a fraction approximating `g_d`:
///
/// * H: `(x-1) p(x^d) / q(x^d)` with rate at least `cd - 1`,
/// * U: `p(x^d) / ((1 + ... + x^{d-1}) q(x^d))` with rate at least `d(c-1) + 1`,
///
/// with equality exactly when `x - 1` does not divide `q` (resp. `p`).
pub fn transport(
    d: u32,
    origin: Origin,
    conv: &Convergent,
    g: &TruncatedLaurentSeries,
) -> Result<TransportedConvergent, StructureError> {
    let c = conv
        .rate
        .ok_or_else(|| StructureError::InvalidParameter("source convergent has no rate".into()))?
        as i64;
    let du = d as usize;
    let dd = d as i64;
    let xm1 = RatPoly::x_minus_one();
    let (p, q, bound, condition) = match origin {
        Origin::H => (
            &xm1 * &conv.p.substitute_power(du),
            conv.q.substitute_power(du),
            c * dd - 1,
            !xm1.divides(&conv.q),
        ),
        Origin::U => (
            conv.p.substitute_power(du),
            &RatPoly::geometric(du) * &conv.q.substitute_power(du),
            dd * (c - 1) + 1,
            !xm1.divides(&conv.p),
        ),
    };
    // p(x^d) and q(x^d) stay coprime, so only the extra factor can cancel.
    let common = match origin {
        Origin::H => xm1.gcd(&q),
        Origin::U => RatPoly::geometric(du).gcd(&p),
    };
    let (p, q) = if common.deg() == Some(0) {
        (p, q)
    } else {
        (p.div_exact(&common).expect("common factor"), q.div_exact(&common).expect("common factor"))
    };
    let measured = rate_of_approximation(g, &p, &q)?;
    if measured < bound {
        return Err(StructureError::RateViolation { measured, bound });
    }
    if (measured == bound) != condition {
        return Err(StructureError::ExactnessViolation { measured, bound, condition });
    }
    Ok(TransportedConvergent {
        source: conv.clone(),
        origin,
        result_p: p,
        result_q: q,
        claimed_rate_lower_bound: bound,
        measured_rate: measured,
        exact_rate_condition: condition,
    })
}

/// Moves an approximation between `u_d = (x-1) h_d` and `h_d`: U to H gives
/// `p / ((x-1) q)`, H to U gives `(x-1) p / q`. The rate drops by at most one.
/// Returns the reduced fraction and its measured rate against `target`.
pub fn lemma33_map(
    direction: Direction,
    p: &RatPoly,
    q: &RatPoly,
    c: i64,
    target: &TruncatedLaurentSeries,
) -> Result<(RatPoly, RatPoly, i64), StructureError> {
    let xm1 = RatPoly::x_minus_one();
    let (p2, q2) = match direction {
        Direction::UToH => (p.clone(), &xm1 * q),
        Direction::HToU => (&xm1 * p, q.clone()),
    };
    let (p2, q2) = reduce(&p2, &q2);
    let measured = rate_of_approximation(target, &p2, &q2)?;
    if measured < c - 1 {
        return Err(StructureError::RateViolation { measured, bound: c - 1 });
    }
    Ok((p2, q2, measured))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub origin: Origin,
    pub source_t: usize,
    pub source: Convergent,
}

pub(crate) fn same_fraction(p1: &RatPoly, q1: &RatPoly, p2: &RatPoly, q2: &RatPoly) -> bool {
    // With q1 = c q2 the fractions agree iff p1 = c p2; this avoids the
    // cross product, which is costly for large raw coefficients.
    if let (Some(l1), Some(l2)) = (q1.leading_coeff(), q2.leading_coeff()) {
        let c = l1 / l2;
        if q1.deg() == q2.deg() && *q1 == q2.scale(&c) {
            return *p1 == p2.scale(&c);
        }
    }
    p1 * q2 == p2 * q1
}

fn locate(cf: &CfExpansion, p: &RatPoly, q: &RatPoly) -> Option<usize> {
    let dq = q.deg()?;
    let t = cf.convergents.iter().position(|c| c.deg_q() == dq)?;
    let c = &cf.convergents[t];
    same_fraction(&c.p, &c.q, p, q).then_some(t)
}

/// Finds the convergent of `h_d` (even `m`) or `u_d` (odd `m`) whose
/// transport is the `m`-th convergent of `g_d`.
pub fn theorem1_classify(data: &FamilyData, m: usize) -> Result<Classification, StructureError> {
    let fail = || StructureError::ClassificationFailure(m);
    let conv = data.g.convergents.get(m).ok_or_else(|| {
        StructureError::InvalidParameter(format!("convergent {m} of g_{} not computed", data.d))
    })?;
    let du = data.d as usize;
    let xm1 = RatPoly::x_minus_one();
    let (origin, cf, p, q) = if m.is_multiple_of(2) {
        let q = conv.q.contract_power(du).ok_or_else(fail)?;
        let p = conv.p.div_exact(&xm1).and_then(|p| p.contract_power(du)).ok_or_else(fail)?;
        (Origin::H, &data.h, p, q)
    } else {
        let q = conv
            .q
            .div_exact(&RatPoly::geometric(du))
            .and_then(|q| q.contract_power(du))
            .ok_or_else(fail)?;
        let p = conv.p.contract_power(du).ok_or_else(fail)?;
        (Origin::U, &data.u, p, q)
    };
    let t = locate(cf, &p, &q).ok_or_else(fail)?;
    let source = cf.convergents[t].clone();
    let coprime = match origin {
        Origin::H => !xm1.divides(&source.q),
        Origin::U => !xm1.divides(&source.p),
    };
    if !coprime {
        return Err(fail());
    }
    Ok(Classification { origin, source_t: t, source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{series, SeriesKind};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    #[test]
    fn transport_examples() {
        let g2 = series(2, SeriesKind::G, -60).unwrap();
        let h2 = series(2, SeriesKind::H, -60).unwrap();
        let u2 = series(2, SeriesKind::U, -60).unwrap();

        let c = rate_of_approximation(&h2, &RatPoly::zero(), &RatPoly::one()).unwrap() as u64;
        let zero = Convergent { index: 0, p: RatPoly::zero(), q: RatPoly::one(), rate: Some(c) };
        let t = transport(2, Origin::H, &zero, &g2).unwrap();
        assert!(t.result_p.is_zero());
        assert_eq!(t.result_q.deg(), Some(0));

        let c = rate_of_approximation(&u2, &RatPoly::one(), &RatPoly::one()).unwrap() as u64;
        let one = Convergent { index: 0, p: RatPoly::one(), q: RatPoly::one(), rate: Some(c) };
        let t = transport(2, Origin::U, &one, &g2).unwrap();
        assert_eq!((t.result_p, t.result_q), (RatPoly::one(), p(&[1, 1])));

        let g3 = series(3, SeriesKind::G, -60).unwrap();
        let h3 = series(3, SeriesKind::H, -60).unwrap();
        let c = rate_of_approximation(&h3, &RatPoly::one(), &p(&[1, 1])).unwrap() as u64;
        let conv = Convergent { index: 1, p: RatPoly::one(), q: p(&[1, 1]), rate: Some(c) };
        let t = transport(3, Origin::H, &conv, &g3).unwrap();
        assert_eq!(t.result_q.monic(), p(&[1, 0, 0, 1]));
        assert!(t.exact_rate_condition);
        assert_eq!(t.measured_rate, t.claimed_rate_lower_bound);
    }

    #[test]
    fn lemma33_examples() {
        let h2 = series(2, SeriesKind::H, -60).unwrap();
        let u2 = series(2, SeriesKind::U, -60).unwrap();
        let c = rate_of_approximation(&u2, &RatPoly::one(), &RatPoly::one()).unwrap();
        let (pp, qq, r) = lemma33_map(Direction::UToH, &RatPoly::one(), &RatPoly::one(), c, &h2).unwrap();
        assert_eq!((pp, qq.monic()), (RatPoly::one(), p(&[-1, 1])));
        assert!(r >= c - 1);

        let c = rate_of_approximation(&h2, &RatPoly::one(), &p(&[1, 1])).unwrap();
        let (pp, qq, r) = lemma33_map(Direction::HToU, &RatPoly::one(), &p(&[1, 1]), c, &u2).unwrap();
        assert!(same_fraction(&pp, &qq, &p(&[-1, 1]), &p(&[1, 1])));
        assert!(r >= c - 1);
    }

    #[test]
    fn classify_first_convergents() {
        let data = FamilyData::compute(2, 6).unwrap();
        let c1 = theorem1_classify(&data, 1).unwrap();
        assert_eq!((c1.origin, c1.source_t), (Origin::U, 0));
        assert!(same_fraction(&c1.source.p, &c1.source.q, &RatPoly::one(), &RatPoly::one()));
        let c2 = theorem1_classify(&data, 2).unwrap();
        assert_eq!((c2.origin, c2.source_t), (Origin::H, 1));
        assert!(same_fraction(&c2.source.p, &c2.source.q, &RatPoly::one(), &p(&[1, 1])));

        let data = FamilyData::compute(3, 4).unwrap();
        let c0 = theorem1_classify(&data, 0).unwrap();
        assert_eq!((c0.origin, c0.source_t), (Origin::H, 0));
        assert!(c0.source.p.is_zero());
    }
}
