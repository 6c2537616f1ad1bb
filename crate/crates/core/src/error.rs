use std::path::PathBuf;

use thiserror::Error;

use crate::selector::Selection;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid exponent p = {0} (need p >= 1 or infinity)")]
    InvalidExponent(f64),

    #[error("field has nonzero mean (|mean| = {0:.3e}); H^-1 norm needs a mean-free field")]
    NonzeroMean(f64),

    #[error("cannot pad from n = {from} to m = {to}")]
    PadTooSmall { from: usize, to: usize },

    #[error("solver blow-up at t = {t:.6}: non-finite state")]
    BlowUp { t: f64 },

    #[error("invalid system spec: {0}")]
    InvalidSpec(String),

    #[error("time {t} outside sample range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("trajectory has no samples")]
    EmptyTrajectory,

    #[error("empty test family")]
    EmptyFamily,

    #[error("incompatible candidate family: {0}")]
    IncompatibleFamily(String),

    #[error("inadmissible phi weight: {0}")]
    InadmissiblePhi(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("test function is not solenoidal (max |k.u| = {0:.3e})")]
    NotSolenoidal(f64),

    #[error("lambda = {0} outside [0, 1]")]
    InvalidLambda(f64),

    #[error("defect construction clipped too much mass: {0}")]
    ExcessiveClip(String),

    #[error("selection did not converge (kkt residual {:.3e})", .0.kkt_residual)]
    SelectionNotConverged(Box<Selection>),

    #[error("bad field file {path}: {reason}")]
    FieldFormat { path: PathBuf, reason: String },

    #[error("config error at {pointer}: {message}")]
    Config { pointer: String, message: String },

    #[error("missing artifact: {0}")]
    MissingArtifact(PathBuf),

    #[error("stage {stage}: {source}")]
    Stage { stage: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Tags an error with the pipeline stage that raised it.
    pub fn in_stage(self, stage: &str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage: stage.into(), source: Box::new(e) },
        }
    }

    /// The innermost error, past any stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// Process exit status: 3 for a solver blow-up, 4 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::BlowUp { .. } => 3,
            Error::Config { .. } | Error::InvalidSpec(_) | Error::InvalidGrid(_) | Error::InvalidWeight(_) => 4,
            _ => 1,
        }
    }
}
