//! Serde helpers: every number leaves the crate as a decimal string.

use std::fmt::Display;

use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn decimal<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn decimal_opt<T: Display, S: Serializer>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn decimal_vec<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

/// `[["p", "e"], …]`.
pub fn factor_pairs<T: Display, S: Serializer>(pairs: &[(T, u32)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(pairs.len()))?;
    for (p, e) in pairs {
        seq.serialize_element(&(p.to_string(), e.to_string()))?;
    }
    seq.end()
}

pub fn decimal_pair_opt<T: Display, S: Serializer>(value: &Option<(T, T)>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some((a, b)) => s.collect_seq([a.to_string(), b.to_string()]),
        None => s.serialize_none(),
    }
}
