use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certificate::{certify, CertificateReport};
use crate::error::{Error, Result};
use crate::field::io;
use crate::flow::Trajectory;
use crate::mv::{defect_from_pair, mv_energy_margins, mv_select, vanishing_viscosity_ladder, ClipReport};
use crate::selector::{assemble_family, assemble_hull, build_candidates, select, Selection};

use super::config::{ScenarioConfig, ScenarioKind};

pub const CONFIG_FILE: &str = "config.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const INITIAL_FILE: &str = "initial.fld";
pub const MEMBERS_DIR: &str = "members";
pub const MEMBER_INDEX: &str = "members/index.json";
pub const CERT_DIR: &str = "certificates";
pub const SELECTION_FILE: &str = "selection.json";
pub const SELECTED_DIR: &str = "selected";
pub const MV_DIR: &str = "mv";
pub const REPORTS_DIR: &str = "reports";

/// Content hashes of every artifact in a tree, plus the run's verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: ScenarioKind,
    pub seed: u64,
    pub certified: Option<bool>,
    /// Relative path to lowercase hex sha256.
    pub files: BTreeMap<String, String>,
}

impl Manifest {
    pub fn load(tree: &Path) -> Result<Manifest> {
        let path = tree.join(MANIFEST_FILE);
        if !path.exists() {
            return Err(Error::MissingArtifact(path));
        }
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MvSummary {
    pub members: Vec<String>,
    pub clip: Vec<ClipReport>,
    /// Smallest measure-valued energy margin of each member.
    pub min_energy_margin: Vec<f64>,
    pub selection: Selection,
    /// Most negative eigenvalue of the selected defect.
    pub selected_min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub certified: bool,
    pub members: Vec<String>,
    pub min_margins: Vec<f64>,
    pub selection: Selection,
    pub mv: Option<MvSummary>,
    pub manifest: Manifest,
}

impl RunSummary {
    /// 0 when every member certifies, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.certified {
            0
        } else {
            2
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    if !path.exists() {
        return Err(Error::MissingArtifact(path.to_path_buf()));
    }
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

fn out(cfg: &ScenarioConfig) -> &Path {
    &cfg.output
}

/// Solves the candidate family (or the viscosity ladder) and stores every member.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Vec<String>> {
    let root = out(cfg);
    fs::create_dir_all(root)?;
    // the stored copy points at its own tree so hashes do not depend on where it lives
    let stored = ScenarioConfig { output: PathBuf::from("."), ..cfg.clone() };
    fs::write(root.join(CONFIG_FILE), stored.to_json()? + "\n")?;
    let u0 = cfg.initial_field();
    io::write_field(&root.join(INITIAL_FILE), &u0)?;
    let recipe = cfg.recipe()?;
    let members = match (cfg.scenario, &cfg.mv) {
        (ScenarioKind::MvLadder, Some(mv)) => {
            let stride = (recipe.sample_dt / cfg.system.dt).round().max(1.0) as usize;
            vanishing_viscosity_ladder(&cfg.system, &u0, &mv.nus, stride)?
        }
        _ => build_candidates(&cfg.system, &u0, &recipe)?,
    };
    let ids: Vec<String> = members.iter().map(|(id, _)| id.clone()).collect();
    for (id, traj) in &members {
        traj.save(&root.join(MEMBERS_DIR).join(id))?;
    }
    write_json(&root.join(MEMBER_INDEX), &ids)?;
    Ok(ids)
}

pub fn load_members(tree: &Path) -> Result<Vec<(String, Trajectory)>> {
    let ids: Vec<String> = read_json(&tree.join(MEMBER_INDEX))?;
    ids.into_iter()
        .map(|id| {
            let t = Trajectory::load(&tree.join(MEMBERS_DIR).join(&id))?;
            Ok((id, t))
        })
        .collect()
}

/// Certifies every stored member against the test family; true when all pass.
pub fn certify_members(cfg: &ScenarioConfig) -> Result<Vec<CertificateReport>> {
    let root = out(cfg);
    let cert = cfg.certificate_config();
    let mut reports = Vec::new();
    for (id, traj) in load_members(root)? {
        let rep = certify(&traj, &cfg.test_cases(traj.spec.nu), &cert)?;
        let dir = root.join(CERT_DIR);
        write_json(&dir.join(format!("{id}.json")), &rep)?;
        fs::write(dir.join(format!("{id}.csv")), rep.to_csv())?;
        reports.push(rep);
    }
    Ok(reports)
}

/// Selects the least-energy mixture of the stored members.
pub fn select_members(cfg: &ScenarioConfig) -> Result<Selection> {
    let root = out(cfg);
    let members = load_members(root)?;
    // ladder members differ in viscosity, so only the hull is meaningful there
    let family = match cfg.scenario {
        ScenarioKind::MvLadder => assemble_hull(members, None, None)?,
        _ => assemble_family(members, None, None)?,
    };
    let mut sel = select(&family, &cfg.selector)?;
    if root.join(CERT_DIR).exists() {
        sel.selection.certificate_ref = Some(CERT_DIR.into());
    }
    write_json(&root.join(SELECTION_FILE), &sel.selection)?;
    sel.trajectory.save(&root.join(SELECTED_DIR))?;
    Ok(sel.selection)
}

/// Builds the defect of each ladder member against the next finer viscosity and
/// selects among the resulting measure-valued pairs.
pub fn mv_stage(cfg: &ScenarioConfig) -> Result<Option<MvSummary>> {
    let Some(settings) = cfg.mv.as_ref().filter(|_| cfg.scenario == ScenarioKind::MvLadder) else {
        return Ok(None);
    };
    let root = out(cfg);
    let members = load_members(root)?;
    let mut family = Vec::new();
    let mut clip = Vec::new();
    let mut min_energy_margin = Vec::new();
    for pair in members.windows(2) {
        let ((id, coarse), (_, fine)) = (&pair[0], &pair[1]);
        let m = defect_from_pair(fine, coarse, &settings.defect)?;
        m.save(&root.join(MV_DIR).join(format!("defect_{id}")))?;
        clip.push(m.clip);
        let margins = mv_energy_margins(coarse, &m, &coarse.spec.forcing)?;
        min_energy_margin.push(margins.iter().copied().fold(f64::INFINITY, f64::min));
        family.push((id.clone(), coarse.clone(), m));
    }
    let sel = mv_select(&family, &cfg.selector)?;
    sel.velocity.save(&root.join(MV_DIR).join("velocity"))?;
    sel.defect.save(&root.join(MV_DIR).join("defect_selected"))?;
    let summary = MvSummary {
        members: family.iter().map(|f| f.0.clone()).collect(),
        clip,
        min_energy_margin,
        selected_min_eigenvalue: sel.defect.min_eigenvalue(),
        selection: sel.selection,
    };
    write_json(&root.join(MV_DIR).join("summary.json"), &summary)?;
    Ok(Some(summary))
}

fn collect_files(root: &Path, dir: &Path, acc: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_files(root, &path, acc)?;
        } else {
            acc.push(path.strip_prefix(root).expect("inside root").to_path_buf());
        }
    }
    Ok(())
}

/// Hashes every artifact except the manifest itself and derived reports.
pub fn write_manifest(cfg: &ScenarioConfig, certified: Option<bool>) -> Result<Manifest> {
    let root = out(cfg);
    let mut paths = Vec::new();
    collect_files(root, root, &mut paths)?;
    let mut files = BTreeMap::new();
    for rel in paths {
        let key = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        if key == MANIFEST_FILE || key.starts_with(&format!("{REPORTS_DIR}/")) {
            continue;
        }
        files.insert(key, hex::encode(Sha256::digest(fs::read(root.join(&rel))?)));
    }
    let m = Manifest { scenario: cfg.scenario, seed: cfg.seed, certified, files };
    write_json(&root.join(MANIFEST_FILE), &m)?;
    Ok(m)
}

/// simulate, certify, select and (for the ladder) the measure-valued stage, then the manifest.
/// Errors are tagged with the stage that raised them.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunSummary> {
    cfg.validate().map_err(|e| e.in_stage("config"))?;
    let members = simulate(cfg).map_err(|e| e.in_stage("simulate"))?;
    let reports = certify_members(cfg).map_err(|e| e.in_stage("certify"))?;
    let certified = reports.iter().all(|r| r.verdict);
    let selection = select_members(cfg).map_err(|e| e.in_stage("select"))?;
    let mv = mv_stage(cfg).map_err(|e| e.in_stage("mv"))?;
    let manifest = write_manifest(cfg, Some(certified)).map_err(|e| e.in_stage("manifest"))?;
    Ok(RunSummary {
        certified,
        members,
        min_margins: reports.iter().map(CertificateReport::min_margin).collect(),
        selection,
        mv,
        manifest,
    })
}

/// The configuration stored in an artifact tree, with its output pointing at that tree.
pub fn load_tree_config(tree: &Path) -> Result<ScenarioConfig> {
    let path = tree.join(CONFIG_FILE);
    if !path.exists() {
        return Err(Error::MissingArtifact(path));
    }
    let mut cfg = ScenarioConfig::from_json(&fs::read_to_string(&path)?)?;
    cfg.output = tree.to_path_buf();
    Ok(cfg)
}

pub(crate) fn certificate_path(tree: &Path, id: &str) -> PathBuf {
    tree.join(CERT_DIR).join(format!("{id}.json"))
}
