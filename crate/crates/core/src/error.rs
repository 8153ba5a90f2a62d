use thiserror::Error;

/// Errors raised by the potential, semiclassical, lattice and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the model domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("invalid well: {0}")]
    InvalidWell(String),

    #[error("level E = {energy} is not below the barrier maximum {barrier}")]
    LevelAboveBarrier { energy: f64, barrier: f64 },

    #[error("no sign change on the bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimate {estimate}, achieved error {achieved_error}")]
    QuadratureNonConvergence { estimate: f64, achieved_error: f64 },

    #[error("Mathieu truncation did not converge: last change {delta} at basis size {basis_size}")]
    TruncationNonConvergence { delta: f64, basis_size: usize },

    #[error("k = {k} lies outside the first Brillouin zone [-{half_width}, {half_width})")]
    OutsideBrillouinZone { k: f64, half_width: f64 },

    #[error("outside the semiclassical regime: {0}")]
    Regime(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a
    /// numerical procedure failing on valid input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::OutOfDomain { .. }
                | Error::InvalidWell(_)
                | Error::OutsideBrillouinZone { .. }
                | Error::InvalidParameter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
