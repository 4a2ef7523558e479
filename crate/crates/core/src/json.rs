// SPDX-License-Identifier: Apache-2.0

//! Canonical JSON output: object keys sorted, floats rounded to 12
//! significant digits and values below `1e-12` in magnitude written as zero,
//! so that identical inputs yield byte-identical reports.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::Result;

/// Rounds to 12 significant digits; tiny values become exactly zero.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x.abs() < 1e-12 {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Rewrites every float in `v` with [`round_sig`] and rebuilds objects so
/// keys are sorted.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = round_sig(n.as_f64().unwrap_or(0.0));
                Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
            } else {
                Value::Number(n)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => {
            let mut sorted: Vec<(String, Value)> = o.into_iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            let mut m = Map::new();
            for (k, v) in sorted {
                m.insert(k, canonicalize(v));
            }
            Value::Object(m)
        }
        other => other,
    }
}

/// Serializes `value` to canonical pretty-printed JSON with a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = canonicalize(serde_json::to_value(value)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounds_and_sorts() {
        let v = json!({"b": 0.1 + 0.2, "a": [1e-13, -2.0, 3], "c": {"z": 1, "y": 2}});
        let s = to_canonical_string(&v).unwrap();
        let a = s.find("\"a\"").unwrap();
        let b = s.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(s.contains("0.3"));
        assert!(!s.contains("0.30000000000000004"));
        assert!(s.contains("0.0"));
    }

    #[test]
    fn round_sig_keeps_twelve_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(-5e-13), 0.0);
        assert_eq!(round_sig(123456.7890123456), 123456.789012);
    }
}
