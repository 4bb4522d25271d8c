//! Crate-wide error type.

/// Errors shared across all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Operand shapes do not agree.
    #[error("{op}: dimension mismatch ({detail})")]
    Dimension {
        /// Operation that rejected its operands.
        op: &'static str,
        /// Human-readable shape description.
        detail: String,
    },

    /// Square matrix with rank below its dimension.
    #[error("matrix is singular")]
    SingularMatrix,

    /// A k x n matrix with rank below k; no right inverse exists.
    #[error("matrix does not have full row rank")]
    NotFullRowRank,

    /// Invalid parameter combination.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Syndrome absent from the decoding table; the error exceeded radius t.
    #[error("syndrome not in decoding table (error weight exceeded t)")]
    UnknownSyndrome,

    /// A supported basis state lies outside the row space of the map;
    /// the inverse reindexing has no preimage there.
    #[error("state support lies outside the image of the linear map")]
    SupportOutsideImage,

    /// Constant-weight decode rejected its input.
    #[error("constant-weight decode failed: {0}")]
    Decode(String),

    /// Exhaustive work bound exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Requested register width above the simulator cap.
    #[error("qubit count {requested} exceeds cap {cap}")]
    QubitCap {
        /// Qubits the operation would need.
        requested: usize,
        /// Configured cap.
        cap: usize,
    },

    /// Register expected to hold a single classical value holds a superposition.
    #[error("register is not in a classical basis state")]
    RegisterNotClassical,

    /// Rejection sampling did not terminate within its retry bound.
    #[error("sampling failed after {0} attempts")]
    SamplingExhausted(usize),

    /// Malformed serialized artifact.
    #[error("malformed file: {0}")]
    Format(String),

    /// Artifact with a format version this build does not understand.
    #[error("unsupported format version {0}")]
    FormatVersion(u32),

    /// Loaded state vector is not normalized.
    #[error("state norm deviates from 1 by {0:.3e}")]
    NormDeviation(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }
}
