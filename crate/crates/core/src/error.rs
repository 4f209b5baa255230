use thiserror::Error;

/// Failures reported by the analysis routines.
///
/// Escapes to infinity and missing equator returns are *not* errors; they are
/// ordinary outcomes carried by the result types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigidError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("outside the domain of definition: {0}")]
    DomainError(String),
    #[error("degenerate family a1 = a2 = a3 = 0 (Riccati case)")]
    DegenerateFamily,
    #[error("the origin is a center; the sphere carries an annulus of periodic orbits")]
    CenterFamily,
    #[error("equator point at angle {alpha} is a critical direction")]
    CriticalStart { alpha: f64 },
    #[error("no event before t = {t}")]
    Timeout { t: f64 },
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("step budget of {steps} exhausted at t = {t}")]
    TooManySteps { steps: usize, t: f64 },
}

pub type Result<T> = std::result::Result<T, RigidError>;
