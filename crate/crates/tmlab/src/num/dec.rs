//! Decimal-string encoding for floating-point values in JSON outputs.
//!
//! Every numeric quantity leaves the tool as a shortest round-trip decimal
//! string (Rust's float formatting), so parsing the string back yields the
//! identical f64 bit pattern and outputs stay byte-stable across runs.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// f64 newtype serialized as a decimal string with round-trip precision.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Dec(pub f64);

impl fmt::Debug for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else if self.0.is_nan() {
            write!(f, "nan")
        } else if self.0 > 0.0 {
            write!(f, "inf")
        } else {
            write!(f, "-inf")
        }
    }
}

impl From<f64> for Dec {
    fn from(x: f64) -> Self {
        Dec(x)
    }
}

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "nan" => Ok(Dec(f64::NAN)),
            "inf" => Ok(Dec(f64::INFINITY)),
            "-inf" => Ok(Dec(f64::NEG_INFINITY)),
            _ => s
                .parse::<f64>()
                .map(Dec)
                .map_err(|e| serde::de::Error::custom(format!("bad decimal string {s:?}: {e}"))),
        }
    }
}

/// A measured value with its reported error estimate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, Default)]
pub struct Meas {
    pub value: Dec,
    pub err: Dec,
}

impl Meas {
    pub fn new(value: f64, err: f64) -> Self {
        Meas {
            value: Dec(value),
            err: Dec(err),
        }
    }
    pub fn exactish(value: f64) -> Self {
        Meas {
            value: Dec(value),
            err: Dec(0.0),
        }
    }
    pub fn value(&self) -> f64 {
        self.value.0
    }
    pub fn err(&self) -> f64 {
        self.err.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_exact_bits() {
        for &x in &[
            std::f64::consts::PI,
            -1.0 / 3.0,
            1e-300,
            2.0f64.powi(-1074),
            9_210.340_371_976_184,
        ] {
            let json = serde_json::to_string(&Dec(x)).unwrap();
            let back: Dec = serde_json::from_str(&json).unwrap();
            assert_eq!(back.0.to_bits(), x.to_bits(), "{json}");
        }
    }

    #[test]
    fn nonfinite_encoding() {
        let json = serde_json::to_string(&Dec(f64::INFINITY)).unwrap();
        assert_eq!(json, "\"inf\"");
        let back: Dec = serde_json::from_str(&json).unwrap();
        assert!(back.0.is_infinite() && back.0 > 0.0);
    }
}
