use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("temperature {kelvin:.2} K is outside the density model's valid range [{min_k:.2} K, {max_k:.2} K]")]
    TemperatureOutOfRange { kelvin: f64, min_k: f64, max_k: f64 },

    #[error("|chi| = {magnitude:.3e} breaks the dilute-medium approximation n = 1 + chi/2 (limit {limit:.0e})")]
    ModelValidity { magnitude: f64, limit: f64 },

    #[error("no sign change of {quantity} in bracket [{lo:.6e}, {hi:.6e}] rad/s")]
    RootNotFound { quantity: &'static str, lo: f64, hi: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("density calibration factor {factor:.4} lies outside [{min}, {max}]; density model rejected")]
    CalibrationRejected { factor: f64, min: f64, max: f64 },

    #[error("grid does not satisfy sizing rule: {0}; enlarge the time window or refine the time step")]
    GridConstraint(String),

    #[error("pulse and transfer function do not share a grid and carrier")]
    GridMismatch,

    #[error(
        "envelope magnitude at the window edge is {ratio:.3e} of peak (limit {limit:.0e}); enlarge the time window"
    )]
    Wraparound { ratio: f64, limit: f64 },

    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    #[error("regime ratio is singular at (omega21/gamma)^2 = 1/3 (got omega21/gamma = {ratio:.6})")]
    RegimeSingular { ratio: f64 },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures raised by a numerical guard rather than by bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::ModelValidity { .. }
                | Error::RootNotFound { .. }
                | Error::GridConstraint(_)
                | Error::Wraparound { .. }
                | Error::MetricUndefined(_)
                | Error::RegimeSingular { .. }
                | Error::CalibrationRejected { .. }
        )
    }
}
