use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub use monopole_spectra::radial::fmt12;

/// Rounds every non-integer number in `v` to 12 significant digits.
pub fn round12(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(x) => fmt12(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round12).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round12(v))).collect()),
        other => other,
    }
}

pub fn json12<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("serialisable");
    let mut s = serde_json::to_string_pretty(&round12(v)).expect("serialisable");
    s.push('\n');
    s
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn opt12(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

/// Writes to `path`, or to stdout when absent. A reader that hangs up early
/// (`| head`) is not an error.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}
