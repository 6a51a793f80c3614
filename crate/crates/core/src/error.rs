use thiserror::Error;

use crate::measurements::SettingReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("state has zero trace; the corresponding outcome has probability 0")]
    ZeroTrace,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("measurement setting `{label}` is invalid: {report}")]
    InvalidSetting {
        label: String,
        report: SettingReport,
    },

    #[error("settings `{first}` and `{second}` have coincident projector sets")]
    CoincidentSettings { first: String, second: String },

    #[error("at least {required} settings are required, got {got}")]
    TooFewSettings { required: usize, got: usize },

    #[error("state is entangled; {0}")]
    Entangled(String),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
}
