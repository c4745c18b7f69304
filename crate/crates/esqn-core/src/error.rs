//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sampling range with `lo >= hi`.
    InvalidRange { lo: f64, hi: f64 },
    /// A probability outside `[0, 1]`.
    InvalidProbability(f64),
    /// An operation requiring a square matrix got a rectangular one.
    NonSquareMatrix { rows: usize, cols: usize },
    /// Spectral-radius estimation exhausted its iteration budget; `best` is
    /// the last estimate.
    NoConvergence { best: f64, iterations: usize },
    /// Vector/matrix length does not match what the operation expects.
    DimensionMismatch { expected: usize, got: usize },
    /// A constructor received a non-finite entry.
    NonFiniteValue { context: &'static str },
    /// A gradient buffer contained NaN or infinity.
    NonFiniteGradient,
    /// Readout dimensions must all be at least one.
    InvalidDimension { what: &'static str, got: usize },
    /// Source and destination readouts differ in kind or shape.
    ArchitectureMismatch,
    /// A training batch was empty.
    EmptyBatch,
    /// Optimizer buffers and parameter tensors disagree in shape.
    ShapeMismatch { expected: usize, got: usize },
    /// A transition violated a replay invariant (reward outside the clip
    /// set, or mismatched vector lengths).
    InvalidTransition(&'static str),
    /// The replay memory holds fewer items than the requested sample size.
    InsufficientData { have: usize, need: usize },
    /// The sparsified recurrent matrix had a near-zero spectral radius even
    /// after the bounded number of redraws.
    DegenerateMatrix { retries: usize },
    /// An action index outside the environment's action set.
    InvalidAction { action: usize, n_actions: usize },
    /// `step` was called on an episode that already terminated.
    StepAfterTerminal,
    /// A task name that is not one of the four supported tasks.
    UnknownTask(String),
    /// A configuration value failed validation.
    InvalidConfig(String),
    /// Checkpoint or CSV parsing failed.
    Parse(String),
    /// Wrapped I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRange { lo, hi } => write!(f, "invalid range: lo={lo} >= hi={hi}"),
            Error::InvalidProbability(p) => write!(f, "probability {p} outside [0, 1]"),
            Error::NonSquareMatrix { rows, cols } => {
                write!(f, "expected square matrix, got {rows}x{cols}")
            }
            Error::NoConvergence { best, iterations } => write!(
                f,
                "spectral radius did not converge after {iterations} iterations (best estimate {best})"
            ),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NonFiniteValue { context } => write!(f, "non-finite value in {context}"),
            Error::NonFiniteGradient => write!(f, "gradient contains NaN or infinity"),
            Error::InvalidDimension { what, got } => {
                write!(f, "invalid dimension: {what} = {got}, must be >= 1")
            }
            Error::ArchitectureMismatch => write!(f, "readout architectures do not match"),
            Error::EmptyBatch => write!(f, "training batch is empty"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {expected} values, got {got}")
            }
            Error::InvalidTransition(why) => write!(f, "invalid transition: {why}"),
            Error::InsufficientData { have, need } => {
                write!(f, "replay memory holds {have} transitions, need {need}")
            }
            Error::DegenerateMatrix { retries } => write!(
                f,
                "sparsified recurrent matrix stayed degenerate after {retries} redraws"
            ),
            Error::InvalidAction { action, n_actions } => {
                write!(f, "action {action} out of range (|A| = {n_actions})")
            }
            Error::StepAfterTerminal => write!(f, "step called after episode terminated"),
            Error::UnknownTask(name) => write!(
                f,
                "unknown task '{name}' (expected cartpole, mountaincar, acrobot or pendulum)"
            ),
            Error::InvalidConfig(why) => write!(f, "invalid config: {why}"),
            Error::Parse(why) => write!(f, "parse error: {why}"),
            Error::Io(why) => write!(f, "io error: {why}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
