use thiserror::Error;

/// Errors raised by the frame toolkit.
///
/// Variants split into malformed input ([`Error::is_input_error`]) and
/// violated operation preconditions; the CLI maps the two to distinct exit
/// codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: |M[{row},{col}] - M[{col},{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("family spans the zero subspace")]
    ZeroSpan,

    #[error("subset is empty")]
    EmptySubset,

    #[error("index {index} out of range for a family of {len} vectors")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("subset indices must be strictly increasing")]
    UnsortedSubset,

    #[error("family is linearly dependent; null combination {null_combination:?}")]
    Dependent { null_combination: Vec<f64> },

    #[error("reference system is not orthonormal: |<e_{i}, e_{j}> - delta| = {gap:e}")]
    NotOrthonormal { i: usize, j: usize, gap: f64 },

    #[error("pairing is not a bijection onto the reference system")]
    InvalidPairing,

    #[error("vector lies outside the subfamily span (distance {distance:e})")]
    OutsideSpan { distance: f64 },

    #[error("enumeration of {requested} items exceeds the exhaustive cap of {cap}")]
    TooLarge { requested: u128, cap: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for malformed input (bad numbers, ragged rows, wrong lengths),
    /// false for precondition violations on well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::DimensionMismatch { .. } | Error::Parse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
