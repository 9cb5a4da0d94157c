use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// An upper limit on a decision variable: either a finite value or `+∞`.
///
/// Infinite limits are kept symbolic so that products such as `ν_j · d_j`
/// follow the `∞ · 0 = 0` convention exactly instead of going through a large
/// sentinel number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Limit {
    Finite(f64),
    Infinite,
}

impl Limit {
    pub fn is_finite(self) -> bool {
        matches!(self, Limit::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(v),
            Limit::Infinite => None,
        }
    }

    /// `self · w` for a non-negative weight `w`, with `∞ · 0 = 0`.
    pub fn scale(self, w: f64) -> f64 {
        match self {
            Limit::Finite(v) => v * w,
            Limit::Infinite if w == 0.0 => 0.0,
            Limit::Infinite => f64::INFINITY,
        }
    }

    /// Distance from `x` up to the limit (`+∞` when unbounded).
    pub fn headroom(self, x: f64) -> f64 {
        match self {
            Limit::Finite(v) => v - x,
            Limit::Infinite => f64::INFINITY,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Limit::Finite(v) => v,
            Limit::Infinite => f64::INFINITY,
        }
    }
}

impl From<f64> for Limit {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Limit::Infinite
        } else {
            Limit::Finite(v)
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(v) => write!(f, "{v}"),
            Limit::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Limit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Limit::Finite(v) => serializer.serialize_f64(*v),
            Limit::Infinite => serializer.serialize_str("inf"),
        }
    }
}

struct LimitVisitor;

impl<'de> Visitor<'de> for LimitVisitor {
    type Value = Limit;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or the string \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Limit, E> {
        Ok(Limit::from(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Limit, E> {
        Ok(Limit::Finite(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Limit, E> {
        Ok(Limit::Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Limit, E> {
        match v {
            "inf" | "+inf" | "Infinity" | "+Infinity" => Ok(Limit::Infinite),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for Limit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(LimitVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_times_zero_is_zero() {
        assert_eq!(Limit::Infinite.scale(0.0), 0.0);
        assert_eq!(Limit::Infinite.scale(2.0), f64::INFINITY);
        assert_eq!(Limit::Finite(3.0).scale(2.0), 6.0);
    }

    #[test]
    fn json_accepts_numbers_and_inf() {
        let v: Vec<Limit> = serde_json::from_str(r#"[1.5, 2, "inf"]"#).unwrap();
        assert_eq!(v, vec![Limit::Finite(1.5), Limit::Finite(2.0), Limit::Infinite]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.5,2.0,"inf"]"#);
        assert!(serde_json::from_str::<Limit>(r#""big""#).is_err());
    }
}
