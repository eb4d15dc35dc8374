use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by the exit-code family they map to (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    // usage / configuration
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    // i/o and file format
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("bad magic tag: expected \"TRJL0001\"")]
    BadMagic,
    #[error("unsupported tensor header: {0}")]
    UnsupportedHeader(String),
    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    ChecksumMismatch { stored: u64, computed: u64 },
    #[error("truncated file: expected {expected} bytes, found {found}")]
    TruncatedFile { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),

    // data / shape
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dataset dimensions disagree: {0}")]
    DimMismatch(String),
    #[error("duplicate identifiers in {0}")]
    DuplicateIds(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("too few trajectory steps: need at least {needed}, got {got}")]
    TooFewSteps { needed: usize, got: usize },
    #[error("window of {window} exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },

    // numeric degeneracy
    #[error("zero variance")]
    ZeroVariance,
    #[error("all entries tied")]
    AllTied,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("singular linear system")]
    SingularSystem,
    #[error("every column has zero variance")]
    AllColumnsDegenerate,
    #[error("degenerate RDM: all distances equal")]
    DegenerateRdm,
    #[error("matrix is zero after centering")]
    ZeroMatrix,
    #[error("zero trace")]
    ZeroTrace,
    #[error("zero state vector at step {0}")]
    ZeroState(usize),
    #[error("projection has zero variance")]
    DegenerateProjection,
    #[error("states have zero variance")]
    DegenerateVariance,
    #[error("series is constant")]
    DegenerateSeries,
    #[error("no valid nearest-neighbour pairs")]
    NoValidPairs,
}

impl Error {
    /// Process exit code: 2 usage, 3 I/O, 4 data/shape, 5 numeric.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            InvalidParameter { .. } | InvalidConfig(_) => 2,
            Io { .. }
            | MissingFile(_)
            | BadMagic
            | UnsupportedHeader(_)
            | ChecksumMismatch { .. }
            | TruncatedFile { .. }
            | Parse(_) => 3,
            LengthMismatch { .. }
            | ShapeMismatch { .. }
            | DimensionMismatch { .. }
            | DimMismatch(_)
            | DuplicateIds(_)
            | NonFinite(_)
            | TooShort { .. }
            | InsufficientSamples { .. }
            | TooFewSteps { .. }
            | WindowTooLarge { .. } => 4,
            _ => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
