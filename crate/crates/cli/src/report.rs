use serde::Serialize;
use serde_json::Value;

use qortho::Tolerance;

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub eq: f64,
    pub decision: f64,
}

/// Envelope shared by every command. Fields serialize in declaration order;
/// `result` is a `serde_json` map, whose keys are sorted.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub version: &'static str,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, tol: &Tolerance, seed: Option<u64>, result: Value) -> Self {
        Self {
            command,
            version: qortho::VERSION,
            tolerances: Tolerances {
                eq: tol.eq_tol,
                decision: tol.decision_tol,
            },
            seed,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One `path: value` line per leaf.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut lines = Vec::new();
        flatten("", &value, &mut lines);
        lines.join("\n")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        _ => out.push(format!("{prefix}: {v}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_flattens_nested_values() {
        let r = Report::new("q", &Tolerance::default(), Some(0), json!({"Q": 1.0, "w": {"k": [1, 2]}, "list": [{"a": true}]}));
        let text = r.to_text();
        assert!(text.contains("command: q"));
        assert!(text.contains("result.Q: 1.0"));
        assert!(text.contains("result.w.k: [1,2]"));
        assert!(text.contains("result.list.0.a: true"));
        assert!(text.contains("tolerances.decision: 1e-8"));
    }

    #[test]
    fn json_keeps_envelope_order() {
        let r = Report::new("latin-q", &Tolerance::default(), None, json!({"b": 1, "a": 2}));
        let s = r.to_json();
        let (c, v, t, res) = (s.find("command"), s.find("version"), s.find("tolerances"), s.find("result"));
        assert!(c < v && v < t && t < res);
        assert!(s.find("\"a\"") < s.find("\"b\""));
        assert!(!s.contains("seed"));
    }
}
