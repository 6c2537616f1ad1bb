use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tolerance::TolBreakdown;
use super::CertificateConfig;
use crate::error::Result;

/// One `(test trajectory, time)` evaluation. All quantities are multiplied by
/// `e^{-I(t)}`, `I(t) = int_0^t K`, which keeps them finite for large weights
/// without changing any sign; `log_gronwall` holds `I(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub test_id: String,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub tol_parts: TolBreakdown,
    pub log_gronwall: f64,
}

impl Entry {
    pub fn passes(&self) -> bool {
        self.margin >= -self.tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryError {
    pub test_id: String,
    pub t: Option<f64>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestSummary {
    pub test_id: String,
    pub min_margin: f64,
    /// Largest `K h` over the sample grid.
    pub gronwall_resolution: f64,
    pub solenoidal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub entries: Vec<Entry>,
    pub errors: Vec<EntryError>,
    pub tests: Vec<TestSummary>,
    pub verdict: bool,
    pub sample_dt: f64,
    pub solver_dt: f64,
    pub config: CertificateConfig,
}

impl CertificateReport {
    pub(crate) fn finish(mut self) -> Self {
        self.verdict = self.errors.is_empty() && !self.entries.is_empty() && self.entries.iter().all(Entry::passes);
        self
    }

    pub fn min_margin(&self) -> f64 {
        self.entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min)
    }

    /// Smallest `margin + tol`; nonnegative iff every entry passes.
    pub fn min_slack(&self) -> f64 {
        self.entries.iter().map(|e| e.margin + e.tol).fold(f64::INFINITY, f64::min)
    }

    pub fn entries_for<'a>(&'a self, test_id: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.test_id == test_id)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("# test_id t lhs rhs margin tol log_gronwall\n");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{} {:.10e} {:.16e} {:.16e} {:.16e} {:.6e} {:.10e}",
                e.test_id, e.t, e.lhs, e.rhs, e.margin, e.tol, e.log_gronwall
            );
        }
        s
    }

    pub fn save(&self, json: &Path) -> Result<()> {
        fs::write(json, serde_json::to_string_pretty(self)?)?;
        fs::write(json.with_extension("csv"), self.to_csv())?;
        Ok(())
    }

    pub fn load(json: &Path) -> Result<Self> {
        if !json.exists() {
            return Err(crate::Error::MissingArtifact(json.to_path_buf()));
        }
        Ok(serde_json::from_slice(&fs::read(json)?)?)
    }
}
