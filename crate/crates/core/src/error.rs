//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("speed {speed} is not strictly below the light speed {limit}")]
    SuperluminalSpeed { speed: f64, limit: f64 },

    #[error("parameter {name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("model violation: {message} (inputs: {inputs:?})")]
    ModelViolation { message: String, inputs: Vec<f64> },

    #[error("geometry violation: {message}")]
    GeometryViolation { message: String },

    #[error("history spans [{t_first}, {t_last}] and cannot serve time {t}")]
    HistoryTooShort { t_first: f64, t_last: f64, t: f64 },

    #[error("no bracket for the retarded time below t = {t}: {detail}")]
    BracketFailure { t: f64, detail: String },

    #[error("no convergence after {iterations} iterations (last residual {residual})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("arrival times lose strict monotonicity at emission time {s} (margin {margin})")]
    MonotonicityViolation { s: f64, margin: f64 },

    #[error(
        "equation-of-motion residual {residual} exceeds tolerance {tolerance} at t = {t} \
         after {refinements} grid refinements"
    )]
    ResidualExceeded {
        residual: f64,
        tolerance: f64,
        t: f64,
        refinements: usize,
    },

    #[error("root census mismatch: Newton search holds {newton} roots, contour count is {winding}")]
    CertificationMismatch { newton: i64, winding: i64 },

    #[error("contour passes too close to a root near {re} + {im}i (|f| = {magnitude:.3e})")]
    ContourNearRoot { re: f64, im: f64, magnitude: f64 },

    #[error("winding number {value} did not settle to an integer")]
    NonIntegerWinding { value: f64 },

    #[error("invalid search box [{re_min}, {re_max}] x [{im_min}, {im_max}]i: {reason}")]
    InvalidBox {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        reason: &'static str,
    },

    #[error("invalid image request {width}x{height}: {reason}")]
    InvalidImage {
        width: usize,
        height: usize,
        reason: &'static str,
    },

    #[error("record {row} has {got} fields but the schema lists {expected}")]
    SchemaMismatch {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable tag for each variant, used by the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SuperluminalSpeed { .. } => "superluminal_speed",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::ModelViolation { .. } => "model_violation",
            Error::GeometryViolation { .. } => "geometry_violation",
            Error::HistoryTooShort { .. } => "history_too_short",
            Error::BracketFailure { .. } => "bracket_failure",
            Error::NonConvergence { .. } => "non_convergence",
            Error::MonotonicityViolation { .. } => "monotonicity_violation",
            Error::ResidualExceeded { .. } => "residual_exceeded",
            Error::CertificationMismatch { .. } => "certification_mismatch",
            Error::ContourNearRoot { .. } => "contour_near_root",
            Error::NonIntegerWinding { .. } => "non_integer_winding",
            Error::InvalidBox { .. } => "invalid_box",
            Error::InvalidImage { .. } => "invalid_image",
            Error::SchemaMismatch { .. } => "schema_mismatch",
            Error::Io { .. } => "io",
        }
    }
}
