pub mod certificate;
pub mod energy;
pub mod error;
pub mod field;
pub mod flow;
pub mod mv;
mod linalg;
pub mod scenario;
pub mod selector;

pub use error::{Error, Result};
pub use field::{Grid, NormReport, SpectralField};
