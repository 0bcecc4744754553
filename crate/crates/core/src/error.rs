use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by model construction, state building and the numerical
/// evaluation paths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count must be even and at least 2, got {0}")]
    OddModeCount(usize),

    #[error("lattice spacing must be positive, got {0}")]
    NonPositiveSpacing(f64),

    #[error("the single-mode convention fixes spacing = 1, got {0}")]
    SingleModeSpacing(f64),

    #[error("mass must be non-negative, got {0}")]
    NegativeMass(f64),

    #[error("mass is zero; construct the lattice with the explicit massless constructor")]
    ZeroMassWithoutFlag,

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("frequency must be positive, got {0}")]
    NonPositiveOmega(f64),

    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),

    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),

    #[error("variance ratio must be positive, got {0}")]
    NonPositiveRatio(f64),

    #[error("squared mean offset must be non-negative, got {0}")]
    NegativeMeanOffset(f64),

    #[error("mode {0} is outside the lattice mode range")]
    ModeOutOfRange(i64),

    #[error("expected {expected} per-mode entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("the zero-momentum mode of a massless lattice has no invertible vacuum covariance")]
    MasslessZeroMode,

    #[error("occupation number on mode {mode} must be positive")]
    ZeroOccupation { mode: i64 },

    #[error("occupation numbers are capped at {max}, got {got} on mode {mode}")]
    OccupationTooLarge { mode: i64, got: u32, max: u32 },

    #[error("explicit Hermite sum is limited to n <= {max}, got {got}")]
    HermiteOrderTooLarge { got: u32, max: u32 },

    #[error("functional entropy of an excited state has no closed form here; use the relative-entropy path")]
    NonGaussianEntropy,

    #[error("relative-entropy reference must be Gaussian")]
    NonGaussianReference,

    #[error(
        "quadrature did not converge: error estimate {error:.3e} after {subdivisions} subdivisions"
    )]
    QuadratureNonConvergence { error: f64, subdivisions: usize },

    #[error(
        "rejection envelope violated at x = {x}: density {density:.6e} > envelope {envelope:.6e}"
    )]
    EnvelopeViolation { x: f64, density: f64, envelope: f64 },

    #[error("sample count must be at least 1")]
    EmptySampleRequest,

    #[error("sample batch is empty")]
    EmptyBatch,

    #[error("wave packet width must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),

    #[error("REUR violated: lhs {lhs:.12e} exceeds rhs {rhs:.12e} beyond budget {budget:.3e}; this signals an implementation bug")]
    ReurViolation { lhs: f64, rhs: f64, budget: f64 },
}
