use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("magnetization became non-finite at t = {t:e} s (time step too large?)")]
    NonFiniteState { t: f64 },

    #[error("integrator failed at I_q = {current_ua:.3} uA: {source}")]
    AtCurrent {
        current_ua: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("backend failed while updating spin {index}: {source}")]
    AtSpin {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("current {current_ua:.3} uA outside calibrated range [{lo_ua:.3}, {hi_ua:.3}] uA")]
    OutOfRange {
        current_ua: f64,
        lo_ua: f64,
        hi_ua: f64,
    },

    #[error("resistance {0} ohm is neither R_P nor R_AP")]
    UnknownResistance(f64),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("instance has {n} spins, limit is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{0}")]
    Precondition(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl std::fmt::Display, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
