use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid qubit index {index} for a {n_qubits}-qubit register")]
    InvalidQubit { index: usize, n_qubits: usize },

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("probability tables were measured under different unitary settings")]
    SettingsMismatch,

    #[error("mitigation requires positive purities, found {0}")]
    Mitigation(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("planning error: {0}")]
    Planning(String),

    #[error("score normalization needs at least two test points, got {0}")]
    Normalization(usize),

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error("ingestion error: {0}")]
    Ingestion(String),

    #[error("insufficient rows: {0}")]
    InsufficientRows(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cell {cell}: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end: 2 for
    /// configuration problems, 3 for data problems, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) | Error::Planning(_) | Error::Json(_) => 2,
            Error::Ingestion(_)
            | Error::InsufficientRows(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Format(_)
            | Error::DegenerateData(_) => 3,
            Error::Component { source, .. } | Error::Cell { source, .. } => source.exit_code(),
            _ => 4,
        }
    }

    pub(crate) fn component(index: usize, source: Error) -> Self {
        Error::Component {
            index,
            source: Box::new(source),
        }
    }
}
