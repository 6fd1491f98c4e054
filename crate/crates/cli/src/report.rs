//! The JSON envelope every subcommand emits, plus a plain-text table view.

use serde::Serialize;
use serde_json::Value;
use wqm::Status;

use crate::instance::RunConfig;

/// One line of the table view.
#[derive(Clone, Debug)]
pub struct Row {
    pub check: String,
    pub value: String,
    pub status: Option<Status>,
}

impl Row {
    pub fn info(check: impl Into<String>, value: impl ToString) -> Self {
        Row {
            check: check.into(),
            value: value.to_string(),
            status: None,
        }
    }

    pub fn check(check: impl Into<String>, value: impl ToString, status: Status) -> Self {
        Row {
            check: check.into(),
            value: value.to_string(),
            status: Some(status),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    config: &'a RunConfig,
    status: Status,
    result: &'a Value,
}

pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    pub result: Value,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &'static str, config: RunConfig) -> Self {
        Report {
            command,
            config,
            result: Value::Object(Default::default()),
            rows: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.result.as_object_mut().expect("object").insert(key.to_string(), v);
    }

    pub fn row(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// PASS iff every checked row passed and at least one check ran.
    pub fn status(&self) -> Status {
        let mut checks = self.rows.iter().filter_map(|r| r.status).peekable();
        Status::from_bool(checks.peek().is_some() && checks.all(Status::is_pass))
    }

    pub fn to_json(&self) -> String {
        let env = Envelope {
            command: self.command,
            config: &self.config,
            status: self.status(),
            result: &self.result,
        };
        let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let w0 = self.rows.iter().map(|r| r.check.chars().count()).max().unwrap_or(0).max(5);
        let w1 = self.rows.iter().map(|r| r.value.chars().count()).max().unwrap_or(0).max(5);
        let mut out = format!("{} [{}] seed={}\n", self.command, self.config.instance, self.config.seed);
        for r in &self.rows {
            let status = r.status.map(|s| s.to_string()).unwrap_or_default();
            let line = format!("{:<w0$}  {:<w1$}  {status}", r.check, r.value);
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str(&format!("overall: {}\n", self.status()));
        out
    }
}
