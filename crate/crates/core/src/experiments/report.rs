use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// Version of the JSON layout produced by [`Report::to_json`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// The mathematical statement the check is evidence for.
    pub claim: String,
    pub status: Status,
    pub data: Value,
    /// The resource bound that was hit, for inconclusive checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
}

/// Recorded data that is not asserted either way.
#[derive(Debug, Clone, Serialize)]
pub struct Observation {
    pub id: String,
    pub description: String,
    pub data: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

impl Report {
    pub fn new(suite: &str, parameters: Value) -> Self {
        Report { schema_version: SCHEMA_VERSION, suite: suite.to_string(), parameters, checks: Vec::new(), observations: Vec::new() }
    }

    pub fn check(&mut self, id: impl Into<String>, description: impl Into<String>, claim: &str, status: Status, data: Value) {
        self.checks.push(Check {
            id: id.into(),
            description: description.into(),
            claim: claim.to_string(),
            status,
            data,
            bound: None,
        });
    }

    pub fn inconclusive(&mut self, id: impl Into<String>, description: impl Into<String>, claim: &str, bound: String) {
        self.checks.push(Check {
            id: id.into(),
            description: description.into(),
            claim: claim.to_string(),
            status: Status::Inconclusive,
            data: Value::Null,
            bound: Some(bound),
        });
    }

    pub fn observe(&mut self, id: impl Into<String>, description: impl Into<String>, data: Value) {
        self.observations.push(Observation { id: id.into(), description: description.into(), data });
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    /// 0 when every check passes, 1 on any failure, 2 on any inconclusive check.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "suite {} ({})", self.suite, self.status().as_str()).unwrap();
        writeln!(out, "parameters {}", self.parameters).unwrap();
        for c in &self.checks {
            writeln!(out, "[{:<12}] {}: {}", c.status.as_str(), c.id, c.description).unwrap();
            if let Some(b) = &c.bound {
                writeln!(out, "               bound: {b}").unwrap();
            }
            if !c.data.is_null() {
                writeln!(out, "               {}", c.data).unwrap();
            }
        }
        for o in &self.observations {
            writeln!(out, "[observation ] {}: {}", o.id, o.description).unwrap();
            writeln!(out, "               {}", o.data).unwrap();
        }
        out
    }
}
