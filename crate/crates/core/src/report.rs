//! Machine-readable outcome of one named verification.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check ran to completion but observed something the reference
    /// tables do not predict (e.g. an orbit refinement over a small field).
    /// Findings are reported, not silently dropped, and do not fail a run.
    Finding,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    /// Canonicalized parameters (sorted keys).
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// Residual summary: symbolic checks report a term count, numeric checks
    /// a max relative error.
    pub residual: String,
    pub elapsed_ms: u64,
    /// Citation anchor for the identity this check verifies.
    pub paper_ref: String,
    /// Extra human-readable lines (orbit tables, factor lists, ...).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Paths of serialized artifacts written by this check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
    /// Checksums of transcribed data files the check consumed.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data_checksums: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Builder tracking elapsed time from construction.
pub struct ReportBuilder {
    check: String,
    params: BTreeMap<String, String>,
    paper_ref: String,
    notes: Vec<String>,
    artifacts: Vec<String>,
    data_checksums: BTreeMap<String, String>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(check: &str, paper_ref: &str) -> Self {
        ReportBuilder {
            check: check.to_string(),
            params: BTreeMap::new(),
            paper_ref: paper_ref.to_string(),
            notes: Vec::new(),
            artifacts: Vec::new(),
            data_checksums: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(&mut self, line: impl ToString) {
        self.notes.push(line.to_string());
    }

    pub fn artifact(&mut self, path: impl ToString) {
        self.artifacts.push(path.to_string());
    }

    pub fn data_checksum(&mut self, file: &str, sha: &str) {
        self.data_checksums.insert(file.to_string(), sha.to_string());
    }

    pub fn finish(self, status: Status, residual: impl ToString) -> CheckReport {
        CheckReport {
            check: self.check,
            params: self.params,
            status,
            residual: residual.to_string(),
            elapsed_ms: self.started.elapsed().as_millis() as u64,
            paper_ref: self.paper_ref,
            notes: self.notes,
            artifacts: self.artifacts,
            data_checksums: self.data_checksums,
        }
    }

    /// Pass when the residual term count is zero.
    pub fn symbolic(self, residual_terms: usize) -> CheckReport {
        let status = if residual_terms == 0 {
            Status::Pass
        } else {
            Status::Fail
        };
        self.finish(status, format!("residual terms: {residual_terms}"))
    }
}
