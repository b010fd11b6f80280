//! Serde adapters that write exact integers as decimal strings.

use num_bigint::BigInt;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let raw = IntRepr::deserialize(d)?;
    raw.into_bigint().map_err(D::Error::custom)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Text(String),
}

impl IntRepr {
    fn into_bigint(self) -> Result<BigInt, String> {
        match self {
            IntRepr::Num(n) => Ok(BigInt::from(n)),
            IntRepr::Text(s) => s.trim().parse::<BigInt>().map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<IntRepr>::deserialize(d)?;
        raw.into_iter().map(|r| r.into_bigint().map_err(D::Error::custom)).collect()
    }
}
