use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice size {0} is below the minimum of 5 sites")]
    LatticeTooSmall(usize),
    #[error("lattice size {size} exceeds the limit of {max} sites")]
    LatticeTooLarge { size: usize, max: usize },
    #[error("invalid bitstring {0:?}: expected only '0' and '1'")]
    InvalidBitstring(String),
    #[error("bitstring has length {found}, expected {expected}")]
    BitstringLength { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),
    #[error("site {site} is outside the allowed range {min}..={max}")]
    SiteOutOfRange { site: usize, min: usize, max: usize },
    #[error("site {0} appears more than once")]
    DuplicateSite(usize),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("norm drift {drift:.3e} at t = {time} exceeds {limit:.0e}; reduce the time step")]
    NormDrift { drift: f64, time: f64, limit: f64 },
    #[error("averaging window [{0}, {1}] contains no samples")]
    EmptyWindow(f64, f64),
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot write to {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LatticeTooSmall(_) => "lattice_too_small",
            Error::LatticeTooLarge { .. } => "lattice_too_large",
            Error::InvalidBitstring(_) => "invalid_bitstring",
            Error::BitstringLength { .. } => "bitstring_length",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotNormalized(_) => "not_normalized",
            Error::SiteOutOfRange { .. } => "site_out_of_range",
            Error::DuplicateSite(_) => "duplicate_site",
            Error::InvalidDensityMatrix(_) => "invalid_density_matrix",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NormDrift { .. } => "norm_drift",
            Error::EmptyWindow(..) => "empty_window",
            Error::Config(_) => "config",
            Error::Output { .. } => "output",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
