use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("integration step {step} at t = {t}: {compartment} = {value} left [-1e-12, 1+1e-12]")]
    Integration {
        step: usize,
        t: f64,
        compartment: &'static str,
        value: f64,
    },

    #[error("value iteration did not converge after {iters} sweeps (column S index {column}, residual {residual:e})")]
    NonConvergence {
        iters: usize,
        column: usize,
        residual: f64,
    },

    #[error("non-finite value at grid node (S index {s_index}, I index {i_index})")]
    NonFinite { s_index: usize, i_index: usize },

    #[error("allocation must contain at least one level")]
    EmptyAllocation,

    #[error("unknown axiom `{0}` (expected A1..A8)")]
    UnknownAxiom(String),

    #[error("invalid criterion spec `{spec}`: {reason}")]
    Criterion { spec: String, reason: String },

    #[error("config line {line}: key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason: reason.into(),
        }
    }

    /// True for errors raised while validating inputs, before any numerical work.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::OutOfDomain { .. }
                | Error::EmptyAllocation
                | Error::UnknownAxiom(_)
                | Error::Criterion { .. }
                | Error::Config { .. }
        )
    }
}
