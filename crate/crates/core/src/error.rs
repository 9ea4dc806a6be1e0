use thiserror::Error;

use crate::dynamics::Trajectory;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be positive (n = 0)")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not in u(n,n): |Y*C + CY|_max = {residual:e}")]
    NotInAlgebra { residual: f64 },

    #[error("matrix is not in U(n,n): |y*Cy - C|_max = {residual:e}")]
    NotInGroup { residual: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("invalid couplings: {0}")]
    InvalidCouplings(String),

    #[error("point outside the open Weyl chamber: {0}")]
    ChamberViolation(String),

    #[error("singular arguments: {0}")]
    Singular(String),

    #[error("gradient unavailable and finite differences disabled")]
    GradientUnavailable,

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("integration step failed at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("trajectory approached a chamber wall at t = {t}")]
    WallApproach { t: f64, partial: Box<Trajectory> },

    #[error("eigenvalue collision at t = {t}: {detail}")]
    EigenvalueCollision { t: f64, detail: String },

    #[error("eigenvalue computation did not converge")]
    EigenFailure,

    #[error("trajectory has {0} samples, at least 3 required")]
    TooFewSamples(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
