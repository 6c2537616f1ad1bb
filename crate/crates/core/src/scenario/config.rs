use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::certificate::{CertificateConfig, TestCase};
use crate::error::{Error, Result};
use crate::field::{Grid, SpectralField};
use crate::flow::{random_solenoidal, tg_shape, two_vortex, ForcingTerm, SystemSpec, TestTrajectory};
use crate::mv::DefectOptions;
use crate::selector::{CandidateRecipe, SelectOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Taylor-Green data under Navier-Stokes.
    TaylorGreen,
    /// Taylor-Green plus seeded band-limited noise.
    PerturbedTg,
    /// A counter-rotating Gaussian vortex pair.
    TwoVortex,
    /// Steady Taylor-Green under Euler.
    EulerTg,
    /// A vanishing-viscosity ladder with measure-valued defects.
    MvLadder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Noise L2 norm relative to the Taylor-Green norm (perturbed_tg only).
    #[serde(default = "d_perturbation")]
    pub perturbation: f64,
    #[serde(default = "d_kmax")]
    pub noise_kmax: i64,
    /// Vortex core radius (two_vortex only).
    #[serde(default = "d_radius")]
    pub vortex_radius: f64,
}

fn one() -> f64 {
    1.0
}
fn d_perturbation() -> f64 {
    0.05
}
fn d_kmax() -> i64 {
    4
}
fn d_radius() -> f64 {
    0.4
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec { amplitude: 1.0, perturbation: d_perturbation(), noise_kmax: d_kmax(), vortex_radius: d_radius() }
    }
}

/// One comparison trajectory of the certificate family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestSpec {
    /// Exact unforced Taylor-Green at the system viscosity.
    TaylorGreen {
        #[serde(default = "one")]
        amplitude: f64,
    },
    Zero,
}

impl TestSpec {
    pub fn id(&self) -> String {
        match self {
            TestSpec::TaylorGreen { amplitude } if *amplitude == 1.0 => "exact_tg".into(),
            TestSpec::TaylorGreen { amplitude } => format!("tg_amp_{amplitude}"),
            TestSpec::Zero => "zero".into(),
        }
    }

    pub fn case(&self, nu: f64, grid: Grid) -> TestCase {
        let traj = match self {
            TestSpec::TaylorGreen { amplitude } => TestTrajectory::taylor_green(nu, *amplitude, grid),
            TestSpec::Zero => TestTrajectory::Zero,
        };
        TestCase::new(self.id(), traj)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MvSettings {
    /// Viscosities of the ladder, strictly decreasing.
    pub nus: Vec<f64>,
    #[serde(default)]
    pub defect: DefectOptions,
}

/// A complete, reproducible experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub system: SystemSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    /// Candidate generation; a single run on the system grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<CandidateRecipe>,
    /// Defaults to the Serrin weight with `p = 4`, or the Euler weight when `nu = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateConfig>,
    /// Defaults to exact Taylor-Green, zero, and Taylor-Green with amplitude 1.1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tests: Option<Vec<TestSpec>>,
    #[serde(default)]
    pub selector: SelectOptions,
    /// Required for mv_ladder, ignored otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mv: Option<MvSettings>,
    #[serde(default = "d_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

fn d_output() -> PathBuf {
    PathBuf::from("out")
}

fn config_err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Config { pointer: pointer.into(), message: message.into() }
}

/// Renders a serde path as a JSON pointer such as `/system/grid/n`.
fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

impl ScenarioConfig {
    /// A default configuration of the given scenario on an `n x n` grid.
    pub fn preset(scenario: ScenarioKind, n: usize) -> Result<Self> {
        let system = match scenario {
            ScenarioKind::EulerTg => SystemSpec::new(0.0, 1.0, 1e-3, n)?,
            ScenarioKind::MvLadder => SystemSpec::new(2e-2, 0.5, 1e-3, n)?,
            _ => SystemSpec::new(0.1, 1.0, 1e-3, n)?,
        };
        let mv = (scenario == ScenarioKind::MvLadder)
            .then(|| MvSettings { nus: vec![2e-2, 1e-2, 5e-3], defect: DefectOptions::default() });
        Ok(ScenarioConfig {
            scenario,
            system,
            initial: InitialSpec::default(),
            family: None,
            certificate: None,
            tests: None,
            selector: SelectOptions::default(),
            mv,
            output: d_output(),
            seed: 0,
        })
    }

    /// Parses and validates; errors carry the JSON pointer of the offending value.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| config_err(&json_pointer(e.path()), e.inner().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are taken relative to its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| config_err("/", format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        if self.output.is_relative() {
            self.output = base.join(&self.output);
        }
        for term in &mut self.system.forcing.terms {
            if let ForcingTerm::File { path, .. } = term {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate().map_err(|e| config_err("/system", e.to_string()))?;
        let nu = self.system.nu;
        match self.scenario {
            ScenarioKind::EulerTg if nu != 0.0 => return Err(config_err("/system/nu", "euler_tg needs nu = 0")),
            ScenarioKind::MvLadder => {
                let mv = self.mv.as_ref().ok_or_else(|| config_err("/mv", "mv_ladder needs an mv section"))?;
                if mv.nus.len() < 2 {
                    return Err(config_err("/mv/nus", "need at least two viscosities"));
                }
                if mv.nus.iter().any(|&v| !(v > 0.0 && v.is_finite())) || mv.nus.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(config_err("/mv/nus", "viscosities must be positive and strictly decreasing"));
                }
            }
            _ if nu == 0.0 && self.scenario != ScenarioKind::EulerTg => {
                return Err(config_err("/system/nu", "this scenario needs nu > 0"));
            }
            _ => {}
        }
        if !(self.initial.amplitude.is_finite()) {
            return Err(config_err("/initial/amplitude", "must be finite"));
        }
        if !(self.initial.perturbation >= 0.0) {
            return Err(config_err("/initial/perturbation", "must be >= 0"));
        }
        if self.initial.noise_kmax < 1 {
            return Err(config_err("/initial/noise_kmax", "must be >= 1"));
        }
        if !(self.initial.vortex_radius > 0.0) {
            return Err(config_err("/initial/vortex_radius", "must be positive"));
        }
        if let Some(r) = &self.family {
            if r.resolutions.is_empty() || r.dealias.is_empty() {
                return Err(config_err("/family", "empty recipe"));
            }
            if let Some(i) = r.resolutions.iter().position(|&n| Grid::new(n).is_err()) {
                return Err(config_err(&format!("/family/resolutions/{i}"), "need an even n >= 4"));
            }
        }
        if let Some(t) = &self.tests {
            if t.is_empty() {
                return Err(config_err("/tests", "empty test family"));
            }
        }
        if let Some(c) = &self.certificate {
            c.weight.validate(nu).map_err(|e| config_err("/certificate/weight", e.to_string()))?;
        }
        self.recipe().map(|_| ())
    }

    /// The candidate recipe, defaulting to one run sampled about 100 times.
    pub fn recipe(&self) -> Result<CandidateRecipe> {
        match &self.family {
            Some(r) => Ok(r.clone()),
            None => {
                let every = (self.system.steps() / 100).max(1);
                Ok(CandidateRecipe {
                    resolutions: vec![self.system.grid.n()],
                    dealias: vec![self.system.dealias],
                    dts: Vec::new(),
                    sample_dt: self.system.dt * every as f64,
                })
            }
        }
    }

    pub fn initial_field(&self) -> SpectralField {
        let g = self.system.grid;
        let i = &self.initial;
        match self.scenario {
            ScenarioKind::TwoVortex => two_vortex(g, i.amplitude, i.vortex_radius),
            ScenarioKind::PerturbedTg => {
                let tg = tg_shape(g).scale(i.amplitude);
                let noise = random_solenoidal(g, i.noise_kmax, self.seed);
                tg.axpy(i.perturbation * tg.l2_norm(), &noise).expect("same grid")
            }
            _ => tg_shape(g).scale(i.amplitude),
        }
    }

    pub fn certificate_config(&self) -> CertificateConfig {
        match &self.certificate {
            Some(c) => c.clone(),
            None if self.system.is_euler() => CertificateConfig::euler(),
            None => CertificateConfig::navier_stokes(),
        }
    }

    pub fn test_specs(&self) -> Vec<TestSpec> {
        self.tests.clone().unwrap_or_else(|| {
            vec![TestSpec::TaylorGreen { amplitude: 1.0 }, TestSpec::Zero, TestSpec::TaylorGreen { amplitude: 1.1 }]
        })
    }

    /// Test cases at viscosity `nu` (the member's own for a viscosity ladder).
    pub fn test_cases(&self, nu: f64) -> Vec<TestCase> {
        self.test_specs().iter().map(|t| t.case(nu, self.system.grid)).collect()
    }
}
