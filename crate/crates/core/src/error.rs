use thiserror::Error;

/// Errors raised by the walk simulator and the analytic solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice half-width must be at least 1, got {0}")]
    InvalidLattice(usize),

    #[error("amplitude would leave the open lattice at site {site}")]
    BoundaryOverflow { site: i64 },

    #[error("norm drifted by {drift:e} after {step} steps")]
    NormDrift { step: usize, drift: f64 },

    #[error("coin angle {theta} makes the transfer matrix singular")]
    SingularCoin { theta: f64 },

    #[error("coin angle {theta} is outside (0, pi/2)")]
    UnsupportedCoinAngle { theta: f64 },

    #[error("quasi-energy {energy} lies inside a band, no decaying transfer eigenvalue")]
    ExtendedState { energy: f64 },

    #[error("transfer eigenvalue {lambda} does not describe a bound state")]
    NotBound { lambda: f64 },

    #[error("truncation n_max = {n_max} too small, need at least {required}")]
    TruncationTooSmall { n_max: usize, required: usize },

    #[error("sin E(k) vanishes at k = {k}; coin Bloch vector undefined")]
    DegenerateEnergy { k: f64 },

    #[error("initial coin pair is not orthogonal (|<a|b>| = {overlap:e})")]
    NonOrthogonalPair { overlap: f64 },

    #[error("ring size must be at least 3, got {0}")]
    RingTooSmall(usize),

    #[error("diagonalization failed: {0}")]
    Diagonalization(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
