use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("index ({row}, {col}) out of range for a {rows}x{cols} grid")]
    Index {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{pilots} pilot slots cannot identify {transmitters} transmitters")]
    Identifiability { pilots: usize, transmitters: usize },

    #[error("reference gain is zero; growth rate undefined")]
    ZeroGain,

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    /// Flat gain along a direction: the coherence length is unbounded.
    #[error("gain is flat to second order; coherence length is unbounded")]
    InfiniteCoherence,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("pilot Gram matrix is singular")]
    SingularSystem,

    #[error("block {0} has no estimate")]
    IncompleteEstimation(usize),

    #[error("reference tensor is identically zero")]
    ZeroReference,

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
