//! Pass/fail records for verification suites.

use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: String,
    pub anchor: String,
    pub checked: usize,
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl FamilyReport {
    pub fn new(family: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self { family: family.into(), anchor: anchor.into(), checked: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }
}

/// A named suite made of several families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub anchor: String,
    pub l: usize,
    pub passed: bool,
    pub families: Vec<FamilyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl VerificationReport {
    pub fn from_families(suite: &str, anchor: &str, l: usize, families: Vec<FamilyReport>) -> Self {
        let passed = families.iter().all(FamilyReport::passed);
        let counterexample = families.iter().find_map(|f| f.failures.first().map(|c| format!("{}: {c}", f.family)));
        Self { suite: suite.into(), anchor: anchor.into(), l, passed, families, counterexample, millis: None }
    }

    pub fn with_timing(mut self, d: Duration) -> Self {
        self.millis = Some(d.as_millis() as u64);
        self
    }
}
