use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid norm parameter p = {0} (need 1 <= p <= inf)")]
    InvalidNorm(f64),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("distinctness violation: components {i} and {j} are {distance:e} apart")]
    DistinctnessViolation { i: usize, j: usize, distance: f64 },

    #[error("step produced coincident components {i} and {j}")]
    PostStepCollision { i: usize, j: usize },

    #[error("shifted difference z[{i}] - z[{j}] - W[{i}] vanishes")]
    ShiftedCollision { i: usize, j: usize },

    #[error("singular denominator in the update of component {0}")]
    SingularDenominator(usize),

    #[error("{what}: argument {x} outside domain [0, {bound})")]
    Domain {
        what: &'static str,
        x: f64,
        bound: f64,
    },

    #[error("{what}: denominator factor is not positive at x = {x}")]
    NegativeDenominator { what: &'static str, x: f64 },

    #[error("certificate is not satisfied (E = {e}, lambda = {lambda:?})")]
    CertificateNotSatisfied { e: f64, lambda: Option<f64> },

    #[error("certificate is degenerate: theta * lambda^2 = {0} >= 1")]
    CertificateDegenerate(f64),

    #[error("bound is degenerate: theta * lambda = {0} >= 1")]
    DegenerateBound(f64),

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("bisection bracket does not straddle a root on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("oracle failed: {0}")]
    OracleFailure(String),

    #[error("root matching is ambiguous: best cost {best:e}, runner-up {second:e}")]
    MatchingAmbiguous { best: f64, second: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by the numbers rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PostStepCollision { .. }
                | Error::ShiftedCollision { .. }
                | Error::SingularDenominator(_)
                | Error::Domain { .. }
                | Error::NegativeDenominator { .. }
                | Error::DegenerateBound(_)
                | Error::CertificateDegenerate(_)
        )
    }
}
