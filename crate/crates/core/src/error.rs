use std::path::PathBuf;

use crate::imgcore::Colorspace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed image: {0}")]
    MalformedImage(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("expected a {expected:?} image, got {found:?}")]
    WrongColorspace {
        expected: Colorspace,
        found: Colorspace,
    },

    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,

    #[error("sample buffer has {got} values, expected {expected}")]
    BadBufferLength { expected: usize, got: usize },

    #[error("gaussian sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("invalid filter bank parameters: {0}")]
    InvalidBankParams(String),

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("image {width}x{height} is smaller than the required {min}x{min}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("feature dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    #[error("invalid feature set: {0}")]
    InvalidFeatureSet(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite input")]
    NonFiniteInput,

    #[error("mask selects no pixels")]
    EmptyMask,

    #[error("codepoint {c:?} (U+{u:04X}) is not covered by the glyph template", c = .0, u = *.0 as u32)]
    UncoveredCodepoint(char),

    #[error("text is empty")]
    EmptyText,

    #[error("missing external style file: {}", .0.display())]
    MissingExternalFile(PathBuf),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("input is constant; correlation undefined")]
    ConstantInput,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("between-item variance is zero")]
    DegenerateVariance,

    #[error("batch is empty")]
    EmptyBatch,

    #[error("ground-truth image required for WITH_GT evaluation")]
    MissingGroundTruth,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate pair id {0:?}")]
    DuplicatePairId(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("item mismatch: {0}")]
    ItemMismatch(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(left: impl ToString, right: impl ToString) -> Self {
        Error::ShapeMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
