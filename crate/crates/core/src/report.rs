//! Pass/fail entries shared by every verification sweep.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Pass => f.write_str("PASS"),
            Status::Fail => f.write_str("FAIL"),
        }
    }
}

/// One checked condition: `{condition, status, counterexample?}`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub condition: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl CheckEntry {
    pub fn pass(condition: impl Into<String>) -> Self {
        CheckEntry {
            condition: condition.into(),
            status: Status::Pass,
            counterexample: None,
            detail: None,
        }
    }

    pub fn fail(condition: impl Into<String>, counterexample: impl Into<String>) -> Self {
        CheckEntry {
            condition: condition.into(),
            status: Status::Fail,
            counterexample: Some(counterexample.into()),
            detail: None,
        }
    }

    /// Pass when `witness` is `None`, otherwise fail with the witness.
    pub fn from_witness(condition: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => CheckEntry::pass(condition),
            Some(w) => CheckEntry::fail(condition, w),
        }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status.is_pass()
    }
}

/// Looks up an entry by condition name.
pub fn find<'a>(entries: &'a [CheckEntry], condition: &str) -> Option<&'a CheckEntry> {
    entries.iter().find(|e| e.condition == condition)
}

pub fn all_pass(entries: &[CheckEntry]) -> bool {
    entries.iter().all(CheckEntry::is_pass)
}

/// Absolute tolerance for identities between real-valued quantities.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Tolerance for an identity: zero for integer-valued data, otherwise
/// [`REAL_TOLERANCE`].
pub fn tolerance(integral: bool) -> f64 {
    if integral {
        0.0
    } else {
        REAL_TOLERANCE
    }
}

pub fn agree(a: f64, b: f64, integral: bool) -> bool {
    (a - b).abs() <= tolerance(integral)
}
