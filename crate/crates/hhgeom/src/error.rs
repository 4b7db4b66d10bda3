use thiserror::Error;

/// Crate-wide error type.
///
/// Constructors validate their inputs eagerly and return one of these
/// variants instead of panicking; numerical routines reserve panics for
/// internal invariant violations only.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation received an empty point or constraint list.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Mismatched vector or polytope dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Ambient dimension outside the supported range `1..=8`.
    #[error("ambient dimension {0} outside supported range 1..=8")]
    DimensionOutOfRange(usize),

    /// A body that must be full-dimensional is not.
    #[error("degenerate body: {0}")]
    Degenerate(String),

    /// Support function queried with the zero direction.
    #[error("support direction must be nonzero")]
    ZeroDirection,

    /// A check's precondition failed; the message names the condition.
    #[error("precondition violated for {check}: {condition}")]
    Precondition { check: &'static str, condition: String },

    /// A function that must be nonnegative on its domain dips below
    /// the certification tolerance.
    #[error("nonnegativity certification failed: min vertex value {min} < -{tol}")]
    NotNonnegative { min: f64, tol: f64 },

    /// Gauge evaluated at a negative argument.
    #[error("gauge argument {0} is negative")]
    GaugeDomain(f64),

    /// Invalid gauge parameters (exponent below one, negative or all-zero
    /// slopes).
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    /// Point lies outside the domain of a piecewise function.
    #[error("point outside function domain by {0}")]
    OutsideDomain(f64),

    /// Target volume for the cylinder bisection is out of range.
    #[error("bisection target {target} outside reachable range [{lo}, {hi}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    /// Monte Carlo paths require an explicit seed and a positive sample
    /// budget.
    #[error("invalid sampling configuration: {0}")]
    Sampling(String),

    /// Malformed JSON instance data.
    #[error("invalid instance data: {0}")]
    Instance(String),

    /// Linear program did not converge (numerical breakdown).
    #[error("linear program failed to converge")]
    LpStalled,
}

pub type Result<T> = std::result::Result<T, Error>;
