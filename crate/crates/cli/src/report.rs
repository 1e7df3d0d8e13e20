use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// One checked claim.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub claim: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Claim {
    pub fn new(claim: impl Into<String>, pass: bool, detail: Option<String>) -> Self {
        Claim { claim: claim.into(), pass, detail }
    }

    /// A claim about an expected value.
    pub fn expect<T: PartialEq + std::fmt::Debug>(claim: impl Into<String>, expected: &T, got: &T) -> Self {
        let pass = expected == got;
        Claim::new(claim, pass, (!pass).then(|| format!("expected {expected:?}, got {got:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub scenario: Value,
    pub window: i64,
    pub pass: bool,
    pub verdicts: Vec<Claim>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, scenario: Value, window: i64, verdicts: Vec<Claim>, data: Value) -> Self {
        let pass = verdicts.iter().all(|c| c.pass);
        Report { command: command.into(), scenario, window, pass, verdicts, data, timing_ms: None }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (window {}): {}", self.command, self.window, if self.pass { "PASS" } else { "FAIL" });
        for c in &self.verdicts {
            let _ = write!(out, "  [{}] {}", if c.pass { "PASS" } else { "FAIL" }, c.claim);
            if let Some(d) = &c.detail {
                let _ = write!(out, ": {d}");
            }
            out.push('\n');
        }
        if let Value::Object(map) = &self.data {
            for (k, v) in map {
                let line = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "  {k}: {line}");
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "  timing: {ms} ms");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_the_conjunction_of_claims() {
        let ok = Report::new("x", Value::Null, 1, vec![Claim::new("a", true, None)], Value::Null);
        assert!(ok.pass);
        let bad = Report::new("x", Value::Null, 1, vec![Claim::new("a", true, None), Claim::expect("b", &1, &2)], Value::Null);
        assert!(!bad.pass);
        assert_eq!(bad.verdicts[1].detail.as_deref(), Some("expected 1, got 2"));
        assert!(bad.to_text().contains("[FAIL] b: expected 1, got 2"));
        assert!(!bad.to_json().contains("timing_ms"));
    }
}
