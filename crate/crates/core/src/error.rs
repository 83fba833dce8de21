use thiserror::Error;

use crate::algebra::FactorizationDiagnosis;

/// Failures raised by the library. Variants split into input-validation
/// problems and numerical breakdowns, see [`Error::is_numerical`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular point a = {0} coincides with 0 or 1")]
    DegenerateSingularity(f64),

    #[error(
        "Fuchsian condition violated: gamma + delta + epsilon - alpha - beta - 1 = {residual:e}"
    )]
    FuchsianViolation { residual: f64 },

    #[error("exponents at infinity are complex (discriminant {discriminant})")]
    ComplexExponents { discriminant: f64 },

    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),

    #[error("operator is not a quadratic in su(1,1) generators: {0}")]
    NotFactorizable(FactorizationDiagnosis),

    #[error("a6 cross-check failed: a6 = {found}, expected (a0/2) mu (1 + 2 mu) = {expected}")]
    InconsistentCoefficients { expected: f64, found: f64 },

    #[error("representation class {0} has no solution constructor")]
    UnsupportedClass(String),

    #[error("grid of size {size} exceeds the cap of {cap}")]
    GridTooLarge { size: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations")]
    EigensolverNoConvergence { iterations: usize },

    #[error("characteristic polynomial has {real_roots} real roots for dimension {dimension}")]
    ComplexRootsDetected { real_roots: usize, dimension: usize },

    #[error("three-term recurrence broke down at step {step}: leading divisor vanishes")]
    RecurrenceBreakdown { step: usize },

    #[error("z = {z} lies outside the domain ({lo}, {hi})")]
    OutOfDomain { z: f64, lo: f64, hi: f64 },

    #[error("sample point z = {z} is at or too close to a singular point")]
    SamplePointAtSingularity { z: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to rejected input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigensolverNoConvergence { .. }
                | Error::ComplexRootsDetected { .. }
                | Error::RecurrenceBreakdown { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
