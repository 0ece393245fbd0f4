//! Small helpers around big integers and rationals shared by every module:
//! reduced-fraction formatting, parsing, and JSON encodings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// Formats a rational in reduced `p/q` notation, dropping the denominator
/// when it is one.
pub fn fmt_q(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `p`, `-p` or `p/q` (with optional surrounding whitespace).
pub fn parse_q(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num = parse_int(num).ok_or_else(err)?;
    let den = parse_int(den).ok_or_else(err)?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Strict decimal integer parser: optional sign followed by ASCII digits.
pub fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

pub fn q_from_ints(n: &BigInt, d: &BigInt) -> BigRational {
    BigRational::new(n.clone(), d.clone())
}

pub fn ceil_q(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise. Both forms are accepted when reading.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                parse_int(v.trim()).map(JsonInt).ok_or_else(|| E::custom(format!("invalid integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// Rational that serializes as a reduced `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonRational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational \"p/q\" or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRational, E> {
                Ok(JsonRational(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRational, E> {
                Ok(JsonRational(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRational, E> {
                parse_q(v).map(JsonRational).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reduced() {
        let q = BigRational::new(6.into(), 4.into());
        assert_eq!(fmt_q(&q), "3/2");
        assert_eq!(fmt_q(&BigRational::from_integer(2.into())), "2");
        assert_eq!(fmt_q(&BigRational::new((-8).into(), 6.into())), "-4/3");
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_q(" 31/12 ").unwrap(), BigRational::new(31.into(), 12.into()));
        assert_eq!(parse_q("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a/2").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("1/").is_err());
        assert!(parse_q("--1").is_err());
    }

    #[test]
    fn json_int_round_trip() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&[JsonInt(5.into()), JsonInt(big.clone())]).unwrap();
        assert_eq!(s, "[5,\"123456789012345678901234567890\"]");
        let back: Vec<JsonInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[1].0, big);
    }
}
