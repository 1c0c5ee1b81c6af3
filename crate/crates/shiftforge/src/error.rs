//! Crate-wide error type.
//!
//! One enum covers every failure mode so that errors compose across module
//! boundaries without conversion boilerplate; the command-line tool maps
//! variants onto its exit codes in one place.

use crate::optimize::DualSolution;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A frequency set constructor was handed points that are not closed
    /// under negation (and symmetrization was not requested).
    #[error("frequency set is not symmetric: missing mirror point of {point}")]
    AsymmetricInput { point: String },

    /// Vectors of incompatible lengths (points, multi-indices, matrices).
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Certified global extrema are only implemented for d ≤ 3.
    #[error("unsupported dimension {dim}: global extrema require dim <= 3")]
    UnsupportedDimension { dim: usize },

    /// An operation that walks the period cell requires all frequencies to
    /// lie on the integer lattice; rescale first.
    #[error("frequency set is not integral; rescale to the integer lattice first")]
    NonIntegralFrequencies,

    /// The simplex solver lost too much precision to continue (tiny pivots,
    /// singular basis on refactorization).
    #[error("numerical breakdown in LP solve: {0}")]
    NumericalBreakdown(String),

    /// The cutting-plane loop hit its iteration cap before the separation
    /// oracle was satisfied.  Carries the best dual solution found so far.
    #[error("iteration limit of {limit} reached (best value so far {value:.6})", value = best.value)]
    IterationLimit { limit: usize, best: Box<DualSolution> },

    /// The final LP basis did not determine a feasible rule.
    #[error("degenerate basis: active rows do not determine a feasible rule")]
    DegenerateBasis,

    /// Closed-form dual witnesses exist only for pointy frequency sets.
    #[error("frequency set is not pointy: no corner of the bounding box lies in the set")]
    NotPointy,

    /// The equality system restricted to the detected active sets has no
    /// solution.
    #[error("active-set system is infeasible; no rule is supported on the detected extrema")]
    ActiveSetInfeasible,

    /// Hamiltonian eigenvalue differences did not snap to small rationals,
    /// so the expectation value has no finite rational spectrum.
    #[error("eigenvalue spacing {value} does not snap to a rational with denominator <= {max_den}")]
    IrrationalSpectrum { value: f64, max_den: i64 },

    /// The dense simulator is deliberately capped at 16×16 operators.
    #[error("operator dimension {dim} exceeds simulator limit {limit}")]
    DimTooLarge { dim: usize, limit: usize },

    /// Shot-noise simulation requires ‖f‖_∞ ≤ 1 so that samples are ±1.
    #[error("sup-norm {norm:.6} exceeds 1; shot sampling needs |f| <= 1")]
    NormExceeded { norm: f64 },

    /// Malformed text input (instance, support, rule, or circuit file).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A precondition on operation inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand used by the text parsers.
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
