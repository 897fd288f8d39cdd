use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("no seed: pass --seed or set `seed` in the config")]
    MissingSeed,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] deutsch_slit::Error),
    #[error("usage: {0}")]
    Usage(String),
}

/// Body written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        use deutsch_slit::Error as E;
        match self {
            Self::Config(_) => "config",
            Self::MissingSeed => "missing_seed",
            Self::Io { .. } => "io",
            Self::Usage(_) => "usage",
            Self::Model(e) => match e {
                E::InvalidParameter { .. } => "invalid_parameter",
                E::StateAnnihilated => "state_annihilated",
                E::NoHeralds => "no_heralds",
                E::NoDetectionsPossible => "no_detections_possible",
                E::TargetExceedsModel { .. } => "target_exceeds_model",
                E::InconsistentCounts { .. } => "inconsistent_counts",
                E::QuadratureCap(_) => "quadrature_cap",
                E::EmptyGrid => "empty_grid",
                E::NoFringes => "no_fringes",
                E::FitFailed(_) => "fit_failed",
            },
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            error: self.kind(),
            message: self.to_string(),
        }
    }

    /// Process exit status: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::MissingSeed | Self::Usage(_) => 2,
            _ => 1,
        }
    }
}
