//! Error type shared by all modules.

/// Errors reported by the stability library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The potential denominator `15s^2 - 3 + μ` vanishes on `(-1, 1)`,
    /// i.e. `μ` lies in the forbidden resonance band `(-12, 3)`.
    #[error("resonance: mu = {mu} makes 15s^2 - 3 + mu vanish on (-1, 1)")]
    Resonance { mu: f64 },

    /// Invalid discretization configuration.
    #[error("config error: {0}")]
    Config(String),

    /// The energy-form integrand is singular and the eigenfunction does not
    /// cancel the singularity.
    #[error("singular integrand: {0}")]
    SingularIntegrand(String),

    /// Sign-bracketing for a root failed near an interval boundary.
    #[error("bracketing failure near mu = {mu}: {detail}")]
    Bracketing { mu: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
