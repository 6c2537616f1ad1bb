//! Reproducible experiments: configuration, the simulate / certify / select / mv
//! pipeline, hashed artifact trees and plain-text reports.

mod config;
mod report;
mod run;

pub use config::{InitialSpec, MvSettings, ScenarioConfig, ScenarioKind, TestSpec};
pub use report::{report, MemberSummary, SelectionSummary};
pub use run::{
    certify_members, load_members, load_tree_config, mv_stage, run_scenario, select_members, simulate,
    write_manifest, Manifest, MvSummary, RunSummary, CERT_DIR, CONFIG_FILE, INITIAL_FILE, MANIFEST_FILE,
    MEMBERS_DIR, MEMBER_INDEX, MV_DIR, REPORTS_DIR, SELECTED_DIR, SELECTION_FILE,
};
