use thiserror::Error;

use crate::cmatrix::{LinalgError, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("incompatible dimensions: {0}")]
    DimMismatch(String),
    #[error("directing operator is not a signature (J = J*, J^2 = I): residual {residual:.3e}")]
    NotSignature { residual: f64 },
    #[error("Im T != K J K*: residual {residual:.3e} exceeds {tolerance:.3e}")]
    Imbalance { residual: f64, tolerance: f64 },
    #[error("ran(Im T) is not contained in ran(K): rank [K | Im T] = {augmented} > rank K = {channel}")]
    Range { channel: usize, augmented: usize },
    #[error("z = {z} lies in the spectrum (resolvent solve failed)")]
    SpectrumHit { z: C64 },
    #[error("z = {z} hits the pole {pole} of the closed form")]
    PoleHit { z: C64, pole: C64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("directing operators of the factors differ: ||J1 - J2||_F = {residual:.3e}")]
    JMismatch { residual: f64 },
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
