//! Text and JSON encodings of polynomials.
//!
//! Text: ascending coefficient list, e.g. `"1, 0, 1"` for `x^2 + 1`.
//! JSON: `{"coeffs": {"0": "1", "2": "1"}}`.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, rational_to_string, ArithError, RatPoly};

impl RatPoly {
    /// Ascending comma separated coefficients; the zero polynomial is `"0"`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.to_dense().iter().map(rational_to_string).collect::<Vec<_>>().join(", ")
    }
}

impl FromStr for RatPoly {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ArithError::Parse("empty coefficient list".into()));
        }
        let dense = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        Ok(RatPoly::from_dense(dense))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub coeffs: BTreeMap<String, String>,
}

impl From<&RatPoly> for PolyJson {
    fn from(p: &RatPoly) -> Self {
        PolyJson {
            coeffs: p.terms().map(|(k, c)| (k.to_string(), rational_to_string(c))).collect(),
        }
    }
}

impl TryFrom<PolyJson> for RatPoly {
    type Error = ArithError;

    fn try_from(j: PolyJson) -> Result<Self, Self::Error> {
        let mut terms = Vec::with_capacity(j.coeffs.len());
        for (k, v) in j.coeffs {
            let k: usize = k.parse().map_err(|_| ArithError::Parse(format!("bad degree {k:?}")))?;
            terms.push((k, parse_rational(&v)?));
        }
        Ok(RatPoly::from_terms(terms))
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RatPoly::try_from(PolyJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
