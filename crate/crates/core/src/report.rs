//! Machine-readable results of the checks.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
    Unknown,
}

impl Status {
    /// Process exit code for the command line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Refuted => 2,
            Status::Unknown => 3,
        }
    }

    /// Combines per-item verdicts: any refutation wins, then any unknown.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Verified,
        }
    }
}

/// Outcome of one check, always relative to the finite sample it ran on.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub status: Status,
    pub sample: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, subject: impl Into<String>, sample: impl Into<String>) -> Self {
        CheckReport {
            check: check.to_string(),
            subject: subject.into(),
            status: Status::Verified,
            sample: sample.into(),
            counterexample: None,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn refute(&mut self, counterexample: Value) {
        self.status = Status::Refuted;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }

    pub fn undecided(&mut self, note: impl Into<String>) {
        self.status = self.status.combine(Status::Unknown);
        self.notes.push(note.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
