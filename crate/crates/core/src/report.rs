//! The JSON report shared by every command: one document per invocation.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// SHA-256 of the canonical witness JSON.
    pub digest: String,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, witness: Value) -> Self {
        let digest = hex::encode(Sha256::digest(witness.to_string().as_bytes()));
        Check {
            name: name.into(),
            pass,
            digest,
            witness,
            timing_ms: None,
        }
    }

    pub fn with_timing(mut self, ms: Option<u64>) -> Self {
        self.timing_ms = ms;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub params: Value,
    pub environment: Environment,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, params: Value, seed: u64) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.into(),
            params,
            environment: Environment {
                seed,
                precision: None,
            },
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// One line per check, then the overall verdict.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.params);
        if let Some(p) = &self.environment.precision {
            out.push_str(&format!("precision {p}\n"));
        }
        out.push_str(&format!("seed {}\n", self.environment.seed));
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {} [{}]", c.name, &c.digest[..12]));
            if let Some(ms) = c.timing_ms {
                out.push_str(&format!(" {ms}ms"));
            }
            out.push_str(&format!(" {}\n", c.witness));
        }
        out.push_str(if self.pass {
            "overall PASS\n"
        } else {
            "overall FAIL\n"
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_is_sha256_of_compact_witness() {
        let c = Check::new("x", true, json!({"b": 1, "a": [2]}));
        assert_eq!(c.digest, hex::encode(Sha256::digest(br#"{"a":[2],"b":1}"#)));
    }

    #[test]
    fn one_failure_fails_the_report() {
        let mut r = Report::new("t", json!({}), 0);
        r.push(Check::new("ok", true, json!(null)));
        r.push(Check::new("bad", false, json!({"x": 3})));
        assert!(!r.pass);
        assert!(r.to_text().ends_with("overall FAIL\n"));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert!(v["checks"][0].get("timing_ms").is_none());
    }
}
