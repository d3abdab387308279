//! Serde helpers writing exact rationals as strings (`"3"`, `"-2/5"`).

use std::str::FromStr;

use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s.trim()).map_err(|e| format!("not an exact rational {s:?}: {e}"))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Str(String),
    Int(i64),
}

fn scalar_to_rational(v: Scalar) -> Result<BigRational, String> {
    match v {
        Scalar::Str(s) => parse_rational(&s),
        Scalar::Int(i) => Ok(BigRational::from_integer(i.into())),
    }
}

pub fn serialize_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Accepts strings or plain JSON integers.
pub fn deserialize_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
    let raw = Vec::<Scalar>::deserialize(d)?;
    raw.into_iter()
        .map(|v| scalar_to_rational(v).map_err(D::Error::custom))
        .collect()
}

pub fn serialize_matrix<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|row| row.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
    )
}

pub fn deserialize_matrix<'de, D: Deserializer<'de>>(
    d: D,
) -> Result<Vec<Vec<BigRational>>, D::Error> {
    let raw = Vec::<Vec<Scalar>>::deserialize(d)?;
    raw.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| scalar_to_rational(v).map_err(D::Error::custom))
                .collect()
        })
        .collect()
}
