//! Exact big-rational scalars and their canonical text form.
//!
//! Every number in this crate is a [`Rat`]. The text form is `"p"` for
//! integers and `"p/q"` otherwise, always in lowest terms with `q > 0`;
//! that canonical form is what makes report output byte-deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{input}`: {reason}")]
pub struct RatParseError {
    pub input: String,
    pub reason: String,
}

/// Parses `"p"` or `"p/q"` with `q > 0`. The input need not be reduced.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let err = |reason: &str| RatParseError {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let mut parts = s.splitn(2, '/');
    let numer = parts.next().unwrap_or("");
    let numer = BigInt::from_str(numer.trim()).map_err(|_| err("numerator is not an integer"))?;
    match parts.next() {
        None => Ok(Rat::from_integer(numer)),
        Some(denom) => {
            let denom =
                BigInt::from_str(denom.trim()).map_err(|_| err("denominator is not an integer"))?;
            if denom.is_zero() {
                return Err(err("denominator is zero"));
            }
            if denom.is_negative() {
                return Err(err("denominator must be positive"));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

/// Canonical form: lowest terms, positive denominator, `"p"` when integral.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Serde adapter: a `Rat` field as its canonical string.
pub mod serde_rat {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rat(&raw).map_err(D::Error::custom)
    }
}

/// Serde adapter: a `BTreeMap<String, Rat>` field with canonical string values.
pub mod serde_rat_map {
    use super::{format_rat, parse_rat, Rat};
    use serde::ser::SerializeMap;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Rat>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &format_rat(v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, Rat>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| Ok((k, parse_rat(&v).map_err(D::Error::custom)?)))
            .collect()
    }
}

/// Serde adapter: a `Vec<Rat>` field as canonical strings.
pub mod serde_rat_vec {
    use super::{format_rat, parse_rat, Rat};
    use serde::ser::SerializeSeq;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rat(s).map_err(D::Error::custom))
            .collect()
    }
}

pub fn ratio(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}
