use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("energy levels {0} and {1} are degenerate")]
    DegenerateLevels(usize, usize),

    #[error("coupling g must be positive, got {0}")]
    ZeroCoupling(f64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{n} qubits exceeds the dense limit of {limit}")]
    DimensionOverflow { n: usize, limit: usize },

    #[error("unsupported Trotter order {0}")]
    UnsupportedOrder(u32),

    #[error("gate on qubits {0:?} is invalid: {1}")]
    InvalidGate(Vec<usize>, String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state mode mismatch: {0}")]
    ModeMismatch(&'static str),

    #[error("nonphysical noise model: {0}")]
    NonphysicalNoise(String),

    #[error("ground state is degenerate (gap {0:e})")]
    DegenerateGroundState(f64),

    #[error("circuit parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error("I/O error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
