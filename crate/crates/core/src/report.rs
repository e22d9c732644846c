//! Number formatting shared by every textual output.

/// Twelve significant digits in scientific notation. Negative zero prints as zero.
pub fn fmt12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

/// Plain CSV field quoting for ids.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rounds every non-integer number in a JSON tree to twelve significant digits.
pub fn round_json(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                let r: f64 = fmt12(x).parse().unwrap_or(x);
                if let Some(m) = serde_json::Number::from_f64(r) {
                    *n = m;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with [`round_json`] applied and a trailing newline.
pub fn to_rounded_json<T: serde::Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(fmt12(-0.0), "0.00000000000e0");
        assert_eq!(fmt12(f64::INFINITY), "inf");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }

    #[test]
    fn json_rounding() {
        let s = to_rounded_json(&serde_json::json!({"x": [std::f64::consts::PI, 3], "y": 0.1 + 0.2}));
        assert!(s.contains("3.14159265359,") && s.contains("\"y\": 0.3") && s.contains("3\n"));
    }
}
