//! Elements as JSON, decoded against their term.
//!
//! Naturals and Γ indices are numbers, ordinals are strings in the ordinal
//! syntax, sum elements are `["L", e]` or `["R", e]`, points of `ℕ^d` are
//! flat arrays, other pairs are two-element arrays, and sets are arrays.

use serde_json::{json, Value};

use super::{Element, NwqoTerm};
use crate::error::{Error, Result};

impl NwqoTerm {
    pub fn element_to_json(&self, e: &Element) -> Value {
        use NwqoTerm as T;
        if self.nat_pow_dim().is_some_and(|d| d > 1) {
            if let Some(v) = e.as_vector() {
                return json!(v);
            }
        }
        match (self, e) {
            (_, Element::Gamma(i)) | (_, Element::Nat(i)) => json!(i),
            (_, Element::Ord(o)) => json!(o.to_string()),
            (T::Sum(a, _), Element::Left(x)) => json!(["L", a.element_to_json(x)]),
            (T::Sum(_, b), Element::Right(y)) => json!(["R", b.element_to_json(y)]),
            (T::Product(a, b), Element::Pair(x, y)) => json!([a.element_to_json(x), b.element_to_json(y)]),
            (T::MajPow(a), Element::Set(xs)) => Value::Array(xs.iter().map(|x| a.element_to_json(x)).collect()),
            (T::MinPow(d), Element::Set(xs)) => {
                let inner = NwqoTerm::nat_pow(*d);
                Value::Array(xs.iter().map(|x| inner.element_to_json(x)).collect())
            }
            (T::Residual(b, _), e) => b.element_to_json(e),
            // shape mismatch: fall back to the display form
            (_, e) => json!(e.to_string()),
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<Element> {
        use NwqoTerm as T;
        let bad = || Error::Parse(format!("JSON value {v} is not an element of {self}"));
        let e = if let Some(d) = self.nat_pow_dim().filter(|d| *d > 1) {
            let arr = v.as_array().ok_or_else(bad)?;
            if arr.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: arr.len() });
            }
            let pts: Option<Vec<u64>> = arr.iter().map(Value::as_u64).collect();
            Element::vector(&pts.ok_or_else(bad)?)
        } else {
            match self {
                T::Gamma(_) => Element::Gamma(v.as_u64().ok_or_else(bad)?),
                T::Nat => Element::Nat(v.as_u64().ok_or_else(bad)?),
                T::Ord(_) => Element::Ord(v.as_str().ok_or_else(bad)?.parse()?),
                T::Sum(a, b) => {
                    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                    match arr[0].as_str() {
                        Some("L") => Element::left(a.element_from_json(&arr[1])?),
                        Some("R") => Element::right(b.element_from_json(&arr[1])?),
                        _ => return Err(bad()),
                    }
                }
                T::Product(a, b) => {
                    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                    Element::pair(a.element_from_json(&arr[0])?, b.element_from_json(&arr[1])?)
                }
                T::MajPow(a) => {
                    let arr = v.as_array().ok_or_else(bad)?;
                    Element::set(arr.iter().map(|x| a.element_from_json(x)).collect::<Result<_>>()?)
                }
                T::MinPow(d) => {
                    let inner = NwqoTerm::nat_pow(*d);
                    let arr = v.as_array().ok_or_else(bad)?;
                    Element::set(arr.iter().map(|x| inner.element_from_json(x)).collect::<Result<_>>()?)
                }
                T::Residual(b, _) => b.element_from_json(v)?,
            }
        };
        if !self.contains(&e) {
            return Err(Error::DomainMismatch { term: self.to_string(), element: e.to_string() });
        }
        Ok(e)
    }

    pub fn sequence_to_json(&self, seq: &[Element]) -> Value {
        Value::Array(seq.iter().map(|e| self.element_to_json(e)).collect())
    }

    pub fn sequence_from_json(&self, v: &Value) -> Result<Vec<Element>> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("expected a JSON array of elements".into()))?;
        arr.iter().map(|x| self.element_from_json(x)).collect()
    }
}
