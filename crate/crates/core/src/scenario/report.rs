use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::certificate::CertificateReport;
use crate::error::{Error, Result};
use crate::flow::Trajectory;
use crate::selector::Selection;

use super::run::{
    certificate_path, Manifest, MvSummary, MEMBERS_DIR, MEMBER_INDEX, MV_DIR, REPORTS_DIR, SELECTION_FILE,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberSummary {
    pub id: String,
    pub certified: Option<bool>,
    pub min_margin: Option<f64>,
    pub final_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionSummary {
    pub certified: Option<bool>,
    pub members: Vec<MemberSummary>,
    pub selection: Option<Selection>,
    pub mv: Option<MvSummary>,
}

fn read_opt<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
    if path.exists() {
        Ok(Some(serde_json::from_slice(&fs::read(path)?)?))
    } else {
        Ok(None)
    }
}

/// Energy ledger columns: `t energy dissipation power`.
fn energy_csv(times: &[f64], ledger: &crate::flow::EnergyLedger) -> String {
    let mut s = String::from("# t energy dissipation power\n");
    for k in 0..times.len() {
        let _ = writeln!(
            s,
            "{:.17e} {:.17e} {:.17e} {:.17e}",
            times[k], ledger.energy[k], ledger.dissipation[k], ledger.power[k]
        );
    }
    s
}

/// One row per sample time, a margin and a tolerance column per test trajectory.
fn margins_csv(rep: &CertificateReport) -> String {
    let ids: Vec<&str> = rep.tests.iter().map(|t| t.test_id.as_str()).collect();
    let mut s = String::from("# t");
    for id in &ids {
        let _ = write!(s, " margin_{id} tol_{id}");
    }
    s.push('\n');
    let mut times: Vec<f64> = rep.entries.iter().map(|e| e.t).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    for t in times {
        let _ = write!(s, "{t:.17e}");
        for id in &ids {
            match rep.entries.iter().find(|e| e.test_id == *id && e.t == t) {
                Some(e) => {
                    let _ = write!(s, " {:.17e} {:.17e}", e.margin, e.tol);
                }
                None => s.push_str(" nan nan"),
            }
        }
        s.push('\n');
    }
    s
}

/// Writes `reports/energy_<id>.csv`, `reports/margins_<id>.csv` and
/// `reports/selection_summary.json` from the stored artifacts of a run.
pub fn report(tree: &Path) -> Result<Vec<PathBuf>> {
    let manifest = Manifest::load(tree)?;
    let index = tree.join(MEMBER_INDEX);
    if !index.exists() {
        return Err(Error::MissingArtifact(index));
    }
    let ids: Vec<String> = serde_json::from_slice(&fs::read(&index)?)?;
    let dir = tree.join(REPORTS_DIR);
    fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    let mut members = Vec::new();
    for id in &ids {
        let (times, ledger) = Trajectory::load_ledger(&tree.join(MEMBERS_DIR).join(id))?;
        let path = dir.join(format!("energy_{id}.csv"));
        fs::write(&path, energy_csv(&times, &ledger))?;
        written.push(path);
        let cert: Option<CertificateReport> = read_opt(&certificate_path(tree, id))?;
        if let Some(rep) = &cert {
            let path = dir.join(format!("margins_{id}.csv"));
            fs::write(&path, margins_csv(rep))?;
            written.push(path);
        }
        members.push(MemberSummary {
            id: id.clone(),
            certified: cert.as_ref().map(|r| r.verdict),
            min_margin: cert.as_ref().map(CertificateReport::min_margin),
            final_energy: *ledger.energy.last().ok_or(Error::EmptyTrajectory)?,
        });
    }
    let summary = SelectionSummary {
        certified: manifest.certified,
        members,
        selection: read_opt(&tree.join(SELECTION_FILE))?,
        mv: read_opt(&tree.join(MV_DIR).join("summary.json"))?,
    };
    let path = dir.join("selection_summary.json");
    fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")?;
    written.push(path);
    Ok(written)
}
