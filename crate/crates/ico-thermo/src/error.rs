use thiserror::Error;

/// Errors shared by all simulator modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Hamiltonian gap must be a positive finite number.
    #[error("energy gap must be positive and finite, got {0}")]
    InvalidEnergyGap(f64),
    /// Inverse temperature must be positive; +inf encodes zero temperature.
    #[error("inverse temperature must be positive (beta = +inf allowed), got {0}")]
    InvalidInverseTemperature(f64),
    /// Excited population of a two-level thermal state lies in [0, 0.5).
    #[error("excited population must lie in [0, 0.5), got {0}")]
    InvalidExcitedPopulation(f64),
    #[error("matrix entries must be finite")]
    NonFiniteEntries,
    #[error("matrix is not Hermitian: max residual {0:.3e}")]
    NotHermitian(f64),
    #[error("matrix trace deviates from one by {0:.3e}")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite: eigenvalue {0:.3e}")]
    NotPositiveSemidefinite(f64),
    #[error("control ket is not normalized: |norm - 1| = {0:.3e}")]
    UnnormalizedKet(f64),
    #[error("kraus weight must lie in [0, 1], got {0}")]
    InvalidKrausWeight(f64),
    /// The weighted Kraus family fails the trace-preservation sum rule.
    #[error("kraus family is not trace preserving: max residual {0:.3e}")]
    IncompleteKraus(f64),
    /// A post-selection branch occurred with probability below threshold;
    /// no conditional state can be normalized.
    #[error("branch has vanishing probability {0:.3e}")]
    VanishingBranch(f64),
    #[error("visibility must lie in [0, 1], got {0}")]
    InvalidVisibility(f64),
    #[error("step count must be at least 1")]
    ZeroSteps,
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("resetting inverse temperature must be positive and finite, got {0}")]
    InvalidResetTemperature(f64),
    /// Cycle accounting is undefined at the zero/infinite temperature limits.
    #[error("reservoir temperature is degenerate for cycle accounting: E_C = {0}")]
    BoundaryTemperature(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
