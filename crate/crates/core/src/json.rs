//! Integer encoding shared by every JSON surface: a plain number when the
//! value fits in i64, a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

pub fn big_to_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn value_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::InvalidExpression(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidExpression(format!("{s:?} is not an integer"))),
        other => Err(Error::InvalidExpression(format!("expected an integer, got {other}"))),
    }
}

pub fn value_to_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::InvalidExpression(format!("{what} must be a nonnegative integer")))
}

pub fn ints_to_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big_to_value).collect())
}

pub fn value_to_ints(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidExpression(format!("expected an integer array, got {v}")))?
        .iter()
        .map(value_to_big)
        .collect()
}

struct Big<'a>(&'a BigInt);

impl serde::Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn serialize_big<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&Big(x), s)
}

pub fn serialize_int_slice<S: Serializer>(
    xs: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Big(x))?;
    }
    seq.end()
}

#[allow(clippy::ptr_arg)]
pub fn serialize_int_vec<S: Serializer>(
    xs: &Vec<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    serialize_int_slice(xs, s)
}

pub fn deserialize_int_vec<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<BigInt>, D::Error> {
    let v = Value::deserialize(d)?;
    value_to_ints(&v).map_err(serde::de::Error::custom)
}
