//! The Gronwall-weighted relative energy inequality, evaluated for a trajectory
//! against a finite family of test trajectories.
//!
//! For a test trajectory `v` with weight `K(v)` and `I(t) = int_0^t K`, every
//! reported quantity is the inequality multiplied through by `e^{-I(t)}`:
//!
//! ```text
//! lhs(t) = R(u(t) | v(t)) e^{-I(t)} + int_0^t (W(u | v) + <A(v), u - v>) e^{-I(s)} ds
//! rhs(t) = R(u(0) | v(0))
//! ```
//!
//! so `margin = rhs - lhs` has the sign of the undiscounted margin and stays
//! finite when `int K` is large.

mod gap;
mod margin;
mod phi;
mod recovery;
mod report;
mod tolerance;

use serde::{Deserialize, Serialize};

use crate::energy::{ResidualOptions, WeightSpec};
use crate::flow::Forcing;

pub use gap::{weak_strong_gap, GapEntry, GapReport, GapVariant};
pub use margin::{certify, margin, TestCase};
pub use phi::{phi_form_check, PhiReport, PhiResult, PhiWeight};
pub use recovery::{recover_weak_residual, ResidualRecovery};
pub use report::{CertificateReport, Entry, EntryError, TestSummary};
pub use tolerance::{TolBreakdown, TolModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateConfig {
    pub weight: WeightSpec,
    #[serde(default)]
    pub residual: ResidualOptions,
    #[serde(default)]
    pub tolerance: TolModel,
    /// Forcing of the equations the test trajectories are measured in; the run's own by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<Forcing>,
}

impl CertificateConfig {
    pub fn new(weight: WeightSpec) -> Self {
        CertificateConfig { weight, residual: ResidualOptions::default(), tolerance: TolModel::default(), forcing: None }
    }

    /// Serrin weight with `p = 4` and the calibrated constant.
    pub fn navier_stokes() -> Self {
        Self::new(WeightSpec::serrin_auto(4.0))
    }

    pub fn euler() -> Self {
        Self::new(WeightSpec::euler())
    }

    pub fn with_forcing(mut self, f: Forcing) -> Self {
        self.forcing = Some(f);
        self
    }
}
