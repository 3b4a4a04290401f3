use std::path::PathBuf;

use thiserror::Error;

use crate::verifier::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("density {rho} outside the evaluable range [{low}, {high}] of the pressure law")]
    Domain { rho: f64, low: f64, high: f64 },

    #[error("invalid pressure law: {0}")]
    InvalidLaw(String),

    #[error("adaptive Simpson quadrature did not converge on [{low}, {high}]")]
    Quadrature { low: f64, high: f64 },

    #[error("invalid Riemann datum: {0}")]
    InvalidDatum(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("density in {region} is not positive: {rho}")]
    DensityPositivity { region: &'static str, rho: f64 },

    #[error("{what} search exhausted after {halvings} halvings")]
    SelectionExhausted { what: &'static str, halvings: usize },

    #[error("constructed subsolution failed verification ({} failing conditions)", .report.failing().count())]
    InternalConsistency { report: Box<VerificationReport> },

    #[error("malformed candidate: {0}")]
    Structural(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
