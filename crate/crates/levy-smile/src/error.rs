use thiserror::Error;

/// Errors surfaced by the pricing, asymptotics, and calibration routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LevyError {
    #[error("argument outside the analyticity strip: {0}")]
    StripViolation(String),
    #[error("operation not defined for this model variant: {0}")]
    UnsupportedVariant(String),
    #[error("defining integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("quadrature failed to reach tolerance: {0}")]
    QuadratureFailure(String),
    #[error("input outside admissible bounds: {0}")]
    OutOfBounds(String),
    #[error("quote algebra produced a non-positive volatility: {0}")]
    NegativeVol(String),
    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),
    #[error("argument outside the operation's domain: {0}")]
    DomainError(String),
    #[error("expansion order unavailable for this model: {0}")]
    OrderUnavailable(String),
    #[error("alpha outside the supported range: {0}")]
    AlphaOutOfRange(String),
    #[error("singular pivot encountered in Hessenberg solve at row {0}")]
    SingularPivot(usize),
    #[error("time stepping became unstable: {0}")]
    InstabilityDetected(String),
    #[error("closed form unavailable for this alpha: {0}")]
    UnsupportedAlpha(f64),
    #[error("series converges too slowly: {0}")]
    SlowConvergence(String),
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("quantity unavailable in this regime: {0}")]
    Unavailable(String),
    #[error("Dirac atom at zero drift; constant is degenerate")]
    DegenerateDirac,
    #[error("parse error at row {row}, column {col}: {msg}")]
    ParseError { row: usize, col: usize, msg: String },
    #[error("asymptotic regime guard: {0}")]
    RegimeWarning(String),
}

pub type Result<T> = std::result::Result<T, LevyError>;
