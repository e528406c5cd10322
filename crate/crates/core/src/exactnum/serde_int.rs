//! Serde adapters writing `BigInt` as a decimal string. Reading accepts
//! either a string or a JSON integer.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Str(String),
    Signed(i64),
    Unsigned(u64),
}

impl IntRepr {
    fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Str(s) => s.trim().parse().map_err(E::custom),
            IntRepr::Signed(n) => Ok(n.into()),
            IntRepr::Unsigned(n) => Ok(n.into()),
        }
    }
}

pub fn serialize<S: Serializer>(n: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(n)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
    IntRepr::deserialize(deserializer)?.into_bigint()
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&n.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(deserializer)?
            .into_iter()
            .map(IntRepr::into_bigint)
            .collect()
    }
}
