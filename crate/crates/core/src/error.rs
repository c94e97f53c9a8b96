//! Crate-wide error type.

use thiserror::Error;

use crate::tomography::DensityMatrix2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("states share path(s) {0:?}; tensor product requires disjoint paths")]
    OverlappingPaths(Vec<String>),

    #[error("photon number {0} is not supported (at most 2)")]
    TooManyPhotons(usize),

    #[error("basis terms carry different photon numbers ({0} and {1})")]
    MixedPhotonNumber(usize, usize),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("OAM value {ell} on path {path} lies outside the qubit subspace {{+{ell0}, -{ell0}}}")]
    OamOutsideQubit { path: String, ell: i32, ell0: i32 },

    #[error("expected {expected} photon(s) but found {found}")]
    PhotonCount { expected: usize, found: usize },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("target {target} is not achievable: {reason}")]
    Unattainable { target: f64, reason: String },

    #[error("maximum-likelihood reconstruction did not converge after {iterations} iterations (last log-likelihood gain {last_gain:e})")]
    NotConverged {
        iterations: usize,
        last_gain: f64,
        last: Box<DensityMatrix2>,
    },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}
