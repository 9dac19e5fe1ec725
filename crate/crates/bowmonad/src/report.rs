//! Per-condition validation reports.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<Entry>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, pass: bool, residual: Option<f64>, certificate: Option<serde_json::Value>) {
        self.entries.push(Entry {
            name: name.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual,
            certificate,
        });
    }

    /// Record a residual against a threshold.
    pub fn residual(&mut self, name: &str, residual: f64, threshold: f64) {
        self.push(name, residual <= threshold, Some(residual), None);
    }

    pub fn extend(&mut self, prefix: &str, other: ValidationReport) {
        for mut e in other.entries {
            e.name = format!("{prefix}{}", e.name);
            self.entries.push(e);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            write!(f, "{tag}  {}", e.name)?;
            if let Some(r) = e.residual {
                write!(f, "  residual={r:.3e}")?;
            }
            if let Some(c) = &e.certificate {
                write!(f, "  certificate={c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
