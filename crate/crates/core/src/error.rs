use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cocycle matrix a + zc is near singular (condition number {condition:.3e})")]
    NearSingularCocycle { condition: f64 },

    #[error("1 + P is near singular (|det| = {det:.3e}); resample")]
    SingularUpsilon { det: f64 },

    #[error("g + 1 is singular (|det| = {det:.3e})")]
    SingularCayley { det: f64 },

    #[error("real realization has negative determinant {0:.3e}")]
    NegativeRealDeterminant(f64),

    #[error("real and complex realizations disagree: {real} vs {complex}")]
    RealizationMismatch { real: f64, complex: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("quadrature did not converge (estimate {estimate}, error {error:.3e})")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("det(1 - z u^t) = {0:.3e} is not positive")]
    NonPositiveDeterminant(f64),

    #[error("Gamma pole on the integration contour at {0}")]
    PoleOnContour(String),

    #[error("uncancelled pole of order {0}")]
    UncancelledPole(i32),

    #[error("oracle stderr {stderr:.3e} exceeds budget {budget:.3e}")]
    OracleVarianceTooHigh { stderr: f64, budget: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("matrix has spectral norm {norm} outside the ball")]
    OutsideBall { norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
