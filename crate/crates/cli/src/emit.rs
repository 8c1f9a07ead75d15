use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round to 12 significant digits; non-finite values become `null`.
pub fn round_f64(x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(0.0);
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().ok()
}

pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => match n.as_f64().and_then(round_f64) {
            Some(x) => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
            None => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_value<S: Serialize>(s: &S) -> Value {
    round_value(serde_json::to_value(s).expect("reports serialize"))
}

pub fn write_json(path: &Path, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialize");
    text.push('\n');
    std::fs::write(path, text)
}

/// Cell text for a CSV row, numbers at 12 significant digits.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => round_f64(x).map(|r| r.to_string()).unwrap_or_default(),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Value>]) -> Result<(), String> {
    let mut w = csv::Writer::from_path(path).map_err(|e| e.to_string())?;
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(row.iter().map(cell)).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_f64(1234.567890123456), Some(1234.56789012));
        assert_eq!(round_f64(-1.0 / 3.0), Some(-0.333333333333));
        assert_eq!(round_f64(f64::NAN), None);
        let v = round_value(serde_json::json!({"a": [0.1 + 0.2, 1, "x"], "b": f64::MAX}));
        assert_eq!(v["a"][0], serde_json::json!(0.3));
        assert_eq!(v["a"][1], serde_json::json!(1));
    }
}
