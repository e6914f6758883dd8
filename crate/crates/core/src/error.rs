use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distance {0}: the square-octagon torus needs a positive multiple of 4")]
    InvalidDistance(usize),

    #[error("lattice invariant violated: {0}")]
    Lattice(String),

    #[error("code construction failed: relation `{relation}` does not hold ({detail})")]
    Invariant { relation: String, detail: String },

    #[error("schedule validation failed for {check} at position {position}: {reason}")]
    Schedule {
        check: String,
        position: usize,
        reason: String,
    },

    #[error("column index {index} out of range for matrix with {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },

    #[error("erasure probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("checks passed to the erasure decoder mix X-type and Z-type operators")]
    MixedCheckTypes,

    #[error("erasure decoder got a syndrome no error on the erased qubits can produce")]
    InconsistentSyndrome,

    #[error("oracle cap exceeded: zero-syndrome space on the erasure has dimension {dim} (cap {cap})")]
    OracleCap { dim: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
