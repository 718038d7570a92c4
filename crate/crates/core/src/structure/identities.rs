use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{bzz_beta, theorem1_classify, theorem2_sequence, transport, FamilyData, Origin, StructureError};
use crate::arith::{int, rational_to_string, RatPoly, Rational};
use crate::laurent::{verify_functional_equations, LaurentError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// Functional equations of `f_d` and `g_d`.
    Funceq,
    /// `q_{6k}(x) = q_{2k}(x^3)` and `p_{6k} ~ x^3 (x-1) p_{2k}(x^3)` for `d = 3`.
    Lemma5,
    /// `beta_{6k+6} beta_{6k+4} beta_{6k+2} = beta_{2k+2}` for `d = 3`.
    Prop2,
    /// The `a_n` relations and `sum_{i=1}^{6} beta_{6k+i} = 3` for `d = 3`.
    PropSum3,
    /// The `b_n` relations and the pair-product sum for `d = 3`.
    PropBk,
    /// Every convergent of `g_d` comes from `h_d` (even index) or `u_d` (odd index).
    Theorem1,
    /// Closed `d = 2` beta recurrence against the oracle.
    Bzz,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::Funceq,
        Identity::Lemma5,
        Identity::Prop2,
        Identity::PropSum3,
        Identity::PropBk,
        Identity::Theorem1,
        Identity::Bzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Funceq => "funceq",
            Identity::Lemma5 => "lemma5",
            Identity::Prop2 => "prop2",
            Identity::PropSum3 => "prop_sum3",
            Identity::PropBk => "prop_bk",
            Identity::Theorem1 => "theorem1",
            Identity::Bzz => "bzz",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown identity {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub k: i64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub d: u32,
    pub range: [i64; 2],
    pub status: String,
    pub failures: Vec<IdentityFailure>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub conventions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub details: Option<serde_json::Value>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const BETA_CONVENTION: &str = "beta_0 = beta_1 = 0 (q_{-1} = 0); beta_{n+1} = rho_{n-1}/rho_{n+1} otherwise";
const COEFF_CONVENTION: &str = "a_n, b_n outside the polynomial's support are 0";

/// Checks `identity` for every `k` in `lo..=hi`. For `funceq` the range is a
/// depth: the equations are compared down to floor `-hi`. For `theorem1` and
/// `bzz` the range indexes convergents.
pub fn verify_identity(identity: Identity, d: u32, lo: i64, hi: i64) -> Result<IdentityReport, StructureError> {
    if lo < 0 || hi < lo {
        return Err(StructureError::InvalidParameter(format!("bad range {lo}..{hi}")));
    }
    let needs_d3 = matches!(identity, Identity::Lemma5 | Identity::Prop2 | Identity::PropSum3 | Identity::PropBk);
    if needs_d3 && d != 3 {
        return Err(StructureError::InvalidParameter(format!("{identity} is stated for d = 3")));
    }
    if identity == Identity::Bzz && d != 2 {
        return Err(StructureError::InvalidParameter("bzz is stated for d = 2".into()));
    }
    let mut failures = Vec::new();
    let mut conventions = Vec::new();
    let mut details = None;
    let mut fail = |k: i64, detail: String| failures.push(IdentityFailure { k, detail });
    match identity {
        Identity::Funceq => match verify_functional_equations(d, -hi.max(d as i64)) {
            Ok(r) => details = Some(serde_json::to_value(r).expect("plain data")),
            Err(LaurentError::MismatchAt { equation, degree }) => {
                fail(degree, format!("{equation}: mismatch at degree {degree}"))
            }
            Err(e) => return Err(e.into()),
        },
        Identity::Lemma5 | Identity::Prop2 | Identity::PropSum3 | Identity::PropBk => {
            let n = 6 * hi as usize + 6;
            let out = theorem2_sequence(3, n)?;
            let beta = &out.betas.betas;
            let a = out.betas.sub_leading_a.as_ref().expect("d = 3 coefficients");
            let b = out.betas.sub_sub_leading_b.as_ref().expect("d = 3 coefficients");
            let q = &out.monic_denominators;
            let pn = &out.monic_numerators;
            let at = |v: &Vec<Rational>, i: i64| if i >= 0 { v[i as usize].clone() } else { Rational::zero() };
            for k in lo..=hi {
                let ku = k as usize;
                match identity {
                    Identity::Lemma5 => {
                        if q[6 * ku] != q[2 * ku].substitute_power(3) {
                            fail(k, "q_{6k} != q_{2k}(x^3)".into());
                        }
                        let rhs = &(&RatPoly::monomial(Rational::one(), 3) * &RatPoly::x_minus_one())
                            * &pn[2 * ku].substitute_power(3);
                        if !proportional(&pn[6 * ku], &rhs) {
                            fail(k, "p_{6k} is not a multiple of x^3 (x-1) p_{2k}(x^3)".into());
                        }
                    }
                    Identity::Prop2 => {
                        let lhs = &beta[6 * ku + 6] * &beta[6 * ku + 4] * &beta[6 * ku + 2];
                        if lhs != beta[2 * ku + 2] {
                            fail(k, format!("product {} != beta_{} = {}", rational_to_string(&lhs), 2 * k + 2, rational_to_string(&beta[2 * ku + 2])));
                        }
                    }
                    Identity::PropSum3 => {
                        if !a[6 * ku].is_zero() {
                            fail(k, format!("a_{} = {}", 6 * k, rational_to_string(&a[6 * ku])));
                        }
                        for m in 6 * k + 1..=6 * k + 6 {
                            let (lhs, rhs) = if m % 2 == 0 {
                                (at(a, m) - at(a, m - 1), at(beta, m) - int(1))
                            } else {
                                (at(a, m) - at(a, m - 1), at(beta, m))
                            };
                            if lhs != rhs {
                                fail(k, format!("a relation at index {m}"));
                            }
                        }
                        let sum: Rational = (1..=6).map(|i| beta[6 * ku + i].clone()).sum();
                        if sum != int(3) {
                            fail(k, format!("sum is {}", rational_to_string(&sum)));
                        }
                    }
                    Identity::PropBk => {
                        if !b[6 * ku].is_zero() {
                            fail(k, format!("b_{} = {}", 6 * k, rational_to_string(&b[6 * ku])));
                        }
                        for m in 6 * k + 1..=6 * k + 6 {
                            let lhs = at(b, m) - at(b, m - 1);
                            let rhs = if m % 2 == 0 {
                                at(beta, m) * at(a, m - 2) - at(a, m - 1)
                            } else {
                                at(beta, m) * at(a, m - 2)
                            };
                            if lhs != rhs {
                                fail(k, format!("b relation at index {m}"));
                            }
                        }
                        let mut sum = Rational::zero();
                        for i in 1..=6 {
                            for j in i + 2..=6 {
                                sum += &beta[6 * ku + i] * &beta[6 * ku + j];
                            }
                        }
                        let rhs = int(3) + &beta[6 * ku] * &beta[6 * ku + 1];
                        if sum != rhs {
                            fail(k, format!("pair sum {} != {}", rational_to_string(&sum), rational_to_string(&rhs)));
                        }
                    }
                    _ => unreachable!(),
                }
            }
            conventions.push(BETA_CONVENTION.to_string());
            if matches!(identity, Identity::PropSum3 | Identity::PropBk) {
                conventions.push(COEFF_CONVENTION.to_string());
            }
        }
        Identity::Theorem1 => {
            let data = FamilyData::compute(d, hi as usize)?;
            let mut table = Vec::new();
            for m in lo..=hi {
                match theorem1_classify(&data, m as usize) {
                    Ok(c) => {
                        let expected = if m % 2 == 0 { Origin::H } else { Origin::U };
                        if c.origin != expected {
                            fail(m, format!("origin {:?} for index parity {}", c.origin, m % 2));
                        }
                        match transport(d, c.origin, &c.source, &data.g_series) {
                            Ok(t) if proportional_pair(&t.result_p, &t.result_q, &data.g.convergents[m as usize].p, &data.g.convergents[m as usize].q) => {}
                            Ok(_) => fail(m, "transported source differs from the convergent".into()),
                            Err(e) if e.is_precision() => return Err(e),
                            Err(e) => fail(m, e.to_string()),
                        }
                        table.push(serde_json::json!({"m": m, "origin": c.origin, "t": c.source_t}));
                    }
                    Err(e @ StructureError::ClassificationFailure(_)) => fail(m, e.to_string()),
                    Err(e) => return Err(e),
                }
            }
            details = Some(serde_json::Value::Array(table));
        }
        Identity::Bzz => {
            let n = hi.max(4) as usize;
            let oracle = theorem2_sequence(2, n)?.betas.betas;
            let closed = bzz_beta(n)?;
            for k in lo.max(2)..=hi {
                let ku = k as usize;
                if oracle[ku] != closed[ku] {
                    fail(k, format!("oracle {} vs recurrence {}", rational_to_string(&oracle[ku]), rational_to_string(&closed[ku])));
                }
            }
        }
    }
    let status = if failures.is_empty() { "pass" } else { "fail" };
    Ok(IdentityReport {
        identity: identity.name().to_string(),
        d,
        range: [lo, hi],
        status: status.into(),
        failures,
        conventions,
        details,
    })
}

/// `a` and `b` are scalar multiples of each other (both zero counts).
fn proportional(a: &RatPoly, b: &RatPoly) -> bool {
    match (a.leading_coeff(), b.leading_coeff()) {
        (None, None) => true,
        (Some(la), Some(lb)) => a.scale(lb) == b.scale(la),
        _ => false,
    }
}

fn proportional_pair(p1: &RatPoly, q1: &RatPoly, p2: &RatPoly, q2: &RatPoly) -> bool {
    p1 * q2 == p2 * q1
}
