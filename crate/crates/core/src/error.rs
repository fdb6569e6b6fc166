use thiserror::Error;

/// Errors raised by the toric Nash-blowup computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NashError {
    /// Malformed or out-of-contract input (bad dimensions, non-full lattice
    /// span, non-essential generator set, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Two objects that must agree in length or shape do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The coefficient matrix has fewer rows than columns, so it has no
    /// maximal minors of full size.
    #[error("degenerate generator set: {rows} rows < {cols} columns")]
    TooFewRows { rows: usize, cols: usize },

    /// An exact search ran past its configured node or time limit.
    #[error("budget exceeded after {nodes} nodes: {limit}")]
    BudgetExceeded { nodes: u64, limit: String },

    /// A semigroup operation required a pointed (essential) generator set.
    #[error("generator set is not essential: the origin lies in its convex hull")]
    NotEssential,

    /// An exact quantity did not fit the machine integer used for lattice
    /// points.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, NashError>;
