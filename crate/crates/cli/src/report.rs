use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use torsionlab::verify::Status;

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub kind: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub status: Status,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equations: Option<Vec<String>>,
    pub metrics: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            case: None,
            status: Status::Pass,
            findings: Vec::new(),
            equations: None,
            metrics: BTreeMap::new(),
            seed: None,
            tol: None,
            degree_bound: None,
        }
    }

    pub fn finding(&mut self, kind: &'static str, detail: impl Into<String>, expression: Option<String>) {
        self.findings.push(Finding {
            kind,
            detail: detail.into(),
            expression,
        });
    }

    /// Records a failed check and marks the run as failed.
    pub fn violation(&mut self, detail: impl Into<String>, expression: Option<String>) {
        self.finding("violation", detail, expression);
        self.status = Status::Fail;
    }

    pub fn check(&mut self, ok: bool, detail: impl Into<String>) {
        if !ok {
            self.violation(detail, None);
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }

    /// Downgrades a passing run to `finding`.
    pub fn mark_finding(&mut self) {
        if self.status == Status::Pass {
            self.status = Status::Finding;
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Pass | Status::Finding => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        std::fs::write(path, text + "\n")
    }
}
