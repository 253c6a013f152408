//! Error type shared by every module of the crate.

use std::io;
use thiserror::Error;

/// Coarse failure class. Callers that talk to the outside world (the CLI)
/// map these onto process exit codes: I/O = 1, validation = 2, numeric = 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Io,
    Validation,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate contour")]
    DegenerateContour,

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("harmonics exceed samples: need {required} samples for {harmonics} harmonics, got {samples}")]
    HarmonicsExceedSamples {
        harmonics: usize,
        required: usize,
        samples: usize,
    },

    #[error("resolution too low: {m_pts} points cannot carry {required} coefficients")]
    ResolutionTooLow { m_pts: usize, required: usize },

    #[error("cutoff {n_keep} exceeds max harmonic {max_harmonic}")]
    CutoffExceedsHarmonics { n_keep: usize, max_harmonic: usize },

    #[error("center outside contour")]
    CenterOutsideContour,

    #[error("center ({x}, {y}) must lie strictly inside the bounding box")]
    CenterOutsideBounds { x: f64, y: f64 },

    #[error("out of domain: {0}")]
    Domain(String),

    #[error("divergence at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("rank-deficient least-squares system")]
    RankDeficient,

    #[error("empty annotation set")]
    EmptyAnnotationSet,

    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("JSON parse error at byte {offset} (line {line}, column {column}): {message}")]
    JsonSyntax {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Io(_) => ErrorCategory::Io,
            Error::Divergence { .. } | Error::RankDeficient => ErrorCategory::Numeric,
            _ => ErrorCategory::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
