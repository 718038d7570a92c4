use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::PadicError;
use crate::arith::{IntPoly, RatPoly, Rational};
use crate::contfrac::{expand_family, monic_normalize, PrecisionPolicy};
use crate::laurent::SeriesKind;

/// Integer data of the `t`-th monic convergent `p^_t/q^_t` of `g_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerConvergent {
    pub t: usize,
    /// Primitive integer form of `q^_t`.
    pub q: IntPoly,
    /// `q^_t = q_scale * q`.
    pub q_scale: Rational,
    /// Least common multiple of all denominators in `p^_t` and `q^_t`.
    pub d_t: BigInt,
    /// `d_t p^_t` and `d_t q^_t`, both with integer coefficients.
    pub p_cleared: IntPoly,
    pub q_cleared: IntPoly,
}

impl IntegerConvergent {
    pub fn from_monic(t: usize, p: &RatPoly, q: &RatPoly) -> Self {
        let norm = q.normalize_integer().expect("denominators are nonzero");
        let d_t = p.denominator_lcm().lcm(&q.denominator_lcm());
        let dt = Rational::from_integer(d_t.clone());
        let clear = |x: &RatPoly| x.scale(&dt).to_int_poly().expect("cleared by the lcm");
        Self {
            t,
            q: norm.primitive,
            q_scale: norm.scale,
            p_cleared: clear(p),
            q_cleared: clear(q),
            d_t,
        }
    }

    pub fn scale_invertible_mod(&self, p: u64) -> bool {
        !(&self.d_t % BigInt::from(p)).is_zero()
    }
}

/// Integer convergents `0..=t_max` of `g_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTable {
    pub d: u32,
    pub convs: Vec<IntegerConvergent>,
}

impl ConvergentTable {
    pub fn for_g(d: u32, t_max: usize) -> Result<Self, PadicError> {
        let (cf, _) = expand_family(d, SeriesKind::G, t_max.max(1), PrecisionPolicy::default())?;
        let m = monic_normalize(&cf)?;
        let convs = (0..=t_max)
            .map(|t| IntegerConvergent::from_monic(t, &m.monic_numerators[t], &m.monic_denominators[t]))
            .collect();
        Ok(Self { d, convs })
    }

    pub fn get(&self, t: usize) -> Option<&IntegerConvergent> {
        self.convs.get(t)
    }

    pub fn t_max(&self) -> usize {
        self.convs.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn known_denominators() {
        let t2 = ConvergentTable::for_g(2, 9).unwrap();
        let q9 = &IntPoly::from_i64s(&[1, 1]).to_ratpoly() * &IntPoly::from_i64s(&[2, 0, 1, 0, 0, 0, -1, 0, 1]).to_ratpoly();
        assert_eq!(t2.convs[9].q.to_ratpoly(), q9);
        assert!(t2.convs[9].q_scale.is_one());

        let t3 = ConvergentTable::for_g(3, 8).unwrap();
        let c8 = &t3.convs[8];
        assert_eq!(c8.q, IntPoly::from_i64s(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 2, 0, 0, 2]));
        assert!(c8.scale_invertible_mod(7));
        assert_eq!(c8.q_cleared.to_ratpoly().scale(&Rational::from_integer(c8.d_t.clone()).recip()).monic(), c8.q.to_ratpoly().monic());
    }
}
