use thiserror::Error;

/// Failures surfaced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("state annihilated by map (zero survival probability)")]
    StateAnnihilated,
    #[error("no heralds: idler window collects zero intensity")]
    NoHeralds,
    #[error("no detections possible: p_c + p_b = 0")]
    NoDetectionsPossible,
    #[error("target success probability {target} exceeds the ideal model ({max})")]
    TargetExceedsModel { target: f64, max: f64 },
    #[error("counts inconsistent with geometry: ratio {ratio} outside [{min}, 1]")]
    InconsistentCounts { ratio: f64, min: f64 },
    #[error("quadrature did not converge within {0} subdivisions")]
    QuadratureCap(usize),
    #[error("empty sample grid")]
    EmptyGrid,
    #[error("no fringes: degenerate data")]
    NoFringes,
    #[error("fit failed: {0}")]
    FitFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
