//! Serde adapters for exact rationals: each value is written as `"p/q"` (or
//! `"p"` when integral) so reports stay readable and lossless.

use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::lattice_cone::Rational;

pub fn rational_to_string(x: &Rational) -> String {
    x.to_string()
}

pub fn rational_from_str(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| format!("invalid rational {s:?}: {e}"))
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| rational_from_str(s).map_err(D::Error::custom))
            .collect()
    }
}

pub mod opt_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(rational_to_string)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|raw| {
            raw.iter()
                .map(|s| rational_from_str(s).map_err(D::Error::custom))
                .collect()
        })
        .transpose()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        rational_from_str(&raw).map_err(D::Error::custom)
    }
}
