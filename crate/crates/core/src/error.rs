use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pressure positivity guard violated at t = {t}: min(xi + p_bar) = {min_pressure}, required >= {required}")]
    PressureGuard {
        t: f64,
        min_pressure: f64,
        required: f64,
    },

    #[error("density guard violated at t = {t}: min(zeta + rho_bar) = {min_density}, required >= {required}")]
    DensityGuard {
        t: f64,
        min_density: f64,
        required: f64,
    },

    #[error("{kind} CFL violated: dt = {dt} exceeds limit {limit}")]
    Cfl {
        kind: &'static str,
        dt: f64,
        limit: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("step failed at t = {t}: {inner}")]
    AtTime { t: f64, inner: Box<Error> },

    #[error("config: {0}")]
    Config(String),

    #[error("checkpoint: bad magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("checkpoint: unsupported version {0}")]
    BadVersion(u32),

    #[error("checkpoint: truncated while reading block `{block}` (needed {needed} bytes, {available} available)")]
    Truncated {
        block: String,
        needed: usize,
        available: usize,
    },

    #[error("checkpoint: {0} trailing bytes after last block")]
    TrailingBytes(usize),

    #[error("csv: {0}")]
    Csv(String),

    #[error("io error on {path:?}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn at_time(self, t: f64) -> Self {
        match self {
            e @ Error::AtTime { .. } => e,
            e => Error::AtTime { t, inner: Box::new(e) },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
