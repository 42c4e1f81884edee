//! Finite-dimensional Livšic L-systems: transfer and impedance functions,
//! c-entropy, dissipation/accumulation coefficients and couplings.

pub mod cli;
pub mod cmatrix;
pub mod coupling;
pub mod entropy;
pub mod error;
pub mod io;
pub mod lsystem;
pub mod models;
pub mod verify;

pub use cmatrix::{CMatrix, LinalgError, C64};
pub use coupling::{couple, CouplingResult};
pub use entropy::{c_entropy, classify, EntropyReport, ExtendedReal, Regime};
pub use error::{Error, Result};
pub use lsystem::LSystem;
pub use models::{ModelKind, ModelSpec};
