//! Machine-readable run reports.
//!
//! Every field except `wall_time_seconds` is a function of the command and
//! its inputs, so identical runs serialize identically once that field is
//! dropped. Object keys inside `details` are sorted.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Bumped on any incompatible change to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Every check passed.
    Pass,
    /// At least one check failed.
    Fail,
    /// A construction succeeded but its result differs from the transcription.
    Finding,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail | Outcome::Finding => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    /// `"symbolic"` or a rational such as `"-1/2"`.
    pub eps: String,
    pub precision: u32,
    pub order: usize,
    pub window: [i32; 2],
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

impl Check {
    pub fn new(name: &str, passed: bool, summary: impl Into<String>, details: Value) -> Self {
        Self { name: name.into(), passed, summary: summary.into(), details }
    }

    /// A check that could not run; the error text becomes the summary.
    pub fn errored(name: &str, err: &crate::Error) -> Self {
        Self::new(name, false, format!("error: {err}"), Value::Null)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Inputs,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub artifact: Option<String>,
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn new(command: &str, inputs: Inputs, checks: Vec<Check>) -> Self {
        let outcome = if checks.iter().all(|c| c.passed) { Outcome::Pass } else { Outcome::Fail };
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs,
            outcome,
            checks,
            artifact: None,
            wall_time_seconds: 0.0,
        }
    }

    /// One line per check, then the outcome. Every line's content is also
    /// in the JSON form.
    pub fn human(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("[{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.summary));
        }
        if let Some(a) = &self.artifact {
            s.push_str(&format!("artifact: {a}\n"));
        }
        let outcome = match self.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Finding => "finding",
        };
        s.push_str(&format!("{}: {outcome} ({:.2} s)\n", self.command, self.wall_time_seconds));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
