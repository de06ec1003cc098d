//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by parsing, validation and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MevalError {
    /// Malformed input line in a segment file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A word token violated its invariants (empty or contains whitespace).
    #[error("invalid word {0:?}: words must be non-empty and free of whitespace")]
    InvalidWord(String),

    /// A segment or utterance field violated its invariants.
    #[error("invalid segment: {0}")]
    InvalidSegment(String),

    /// A cost configuration violated `c_correct <= c_sub`.
    #[error("invalid cost configuration: {0}")]
    InvalidCosts(String),

    /// Error-count aggregation overflowed.
    #[error("count overflow while combining error counts")]
    CountOverflow,

    /// The unconstrained multi-dimensional tensor would exceed its state budget.
    #[error("budget exceeded: distance tensor needs {states} states, limit is {limit}")]
    BudgetExceeded { states: u128, limit: u64 },

    /// The MIMO/ORC lattice would exceed the configured memory budget.
    #[error("instance too large: lattice needs {bytes} bytes, memory limit is {limit} bytes")]
    InstanceTooLarge { bytes: u128, limit: u64 },

    /// A brute-force oracle would exceed its enumeration limit.
    #[error("enumeration limit exceeded: {count} candidates, limit is {limit}")]
    EnumerationLimit { count: u128, limit: u64 },

    /// ORC reference merging requires begin times on every utterance when K > 1.
    #[error(
        "missing begin time for speaker {speaker:?} utterance {utterance} \
         (source index {source_index})"
    )]
    MissingBeginTime {
        speaker: String,
        utterance: usize,
        source_index: usize,
    },
}

pub type Result<T> = std::result::Result<T, MevalError>;
