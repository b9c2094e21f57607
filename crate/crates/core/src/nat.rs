//! Arbitrary-precision naturals and the helpers the rest of the crate leans on.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;

pub type Nat = BigUint;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

/// Parse a decimal numeral, rejecting signs, blanks and non-digits.
pub fn parse_nat(s: &str) -> Result<Nat, Error> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal natural: {s:?}")));
    }
    t.parse::<Nat>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

pub fn to_u64(n: &Nat) -> Option<u64> {
    n.to_u64()
}

/// Saturating conversion, handy when a value is only used as a count bound.
pub fn to_usize_sat(n: &Nat) -> usize {
    n.to_usize().unwrap_or(usize::MAX)
}

pub fn pow(base: &Nat, exp: u32) -> Nat {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn is_zero(n: &Nat) -> bool {
    n.is_zero()
}

/// Serde adapter that writes naturals as decimal strings so bignums survive JSON.
pub mod serde_dec {
    use super::{parse_nat, Nat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => parse_nat(&s).map_err(D::Error::custom),
            serde_json::Value::Number(n) if n.is_u64() => Ok(Nat::from(n.as_u64().unwrap())),
            other => Err(D::Error::custom(format!(
                "expected decimal string, got {other}"
            ))),
        }
    }
}

/// Same as [`serde_dec`] for vectors.
pub mod serde_dec_vec {
    use super::{parse_nat, Nat};
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Nat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&n.to_str_radix(10))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Nat>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_nat(&s).map_err(D::Error::custom),
                serde_json::Value::Number(n) if n.is_u64() => Ok(Nat::from(n.as_u64().unwrap())),
                other => Err(D::Error::custom(format!(
                    "expected decimal string, got {other}"
                ))),
            })
            .collect()
    }
}
