use std::path::Path;

use serde::Serialize;
use sweepout::builder::{Check, Method};
use sweepout::error::{Error, Result};

use crate::config::ExperimentConfig;

pub const TOOL: &str = "sweepout";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
    ResourceCap,
    ConfigError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::ResourceCap => 2,
            Status::ConfigError => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        if e.is_resource_cap() {
            Status::ResourceCap
        } else if matches!(e, Error::Inconsistent(_)) {
            Status::VerificationFailed
        } else {
            Status::ConfigError
        }
    }
}

/// Everything that shaped the run, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct Echo {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub precision_bits: u32,
    pub explicit_cap: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub parameters: Option<Echo>,
    pub checks: Vec<Check>,
    pub result: serde_json::Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A CSV table written next to the report.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Inconsistent(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Inconsistent(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Result of one command before it is wrapped into a [`Report`].
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub result: serde_json::Value,
    pub tables: Vec<Table>,
    /// Extra artifacts: file name and contents.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn check(
        &mut self,
        name: impl Into<String>,
        claim: impl Into<String>,
        computed: impl Into<String>,
        pass: bool,
    ) {
        self.checks.push(Check {
            name: name.into(),
            claim: claim.into(),
            computed: computed.into(),
            pass,
            method: Method::Exact,
            witness: None,
        });
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| {
            Error::InvalidParameter(format!("cannot create {}: {e}", dir.display()))
        })?;
    }
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

pub fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable result")
}
