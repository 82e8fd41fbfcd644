use thiserror::Error;

/// Problems found while reading or validating a configuration document.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config document: {0}")]
    Malformed(String),
    #[error("invalid value for `{path}`: {reason}")]
    Invalid { path: String, reason: String },
}

impl ConfigError {
    pub(crate) fn invalid(path: &str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            path: path.to_string(),
            reason: reason.into(),
        }
    }

    /// Field path for invariant violations, `None` for syntax errors.
    pub fn path(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { path, .. } => Some(path),
            ConfigError::Malformed(_) => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("integrator failed at t = {time:e} s: {reason}")]
    Integrator { time: f64, reason: String },
    #[error("atom speed {speed:e} m/s is not below c")]
    Superluminal { speed: f64 },
    #[error("fidelity mode `{0}` is not supported by this operation")]
    WrongFidelity(&'static str),
    #[error("record does not cover a complete pulse passage")]
    IncompletePassage,
    #[error("ledgers come from different runs ({0} vs {1})")]
    MismatchedRuns(u64, u64),
    #[error("photon count {0:e} is below one; the mode volume is unphysical")]
    TooFewPhotons(f64),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
