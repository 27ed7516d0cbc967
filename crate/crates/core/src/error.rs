use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("block index {index} out of range for {blocks} blocks")]
    BlockIndex { index: usize, blocks: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A stepsize schedule violates its admissibility condition.
    #[error("stepsize inadmissible at step {step}: {condition}")]
    Admissibility { step: usize, condition: String },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite objective value {value} at iterate {iterate:?}")]
    Numerical { value: f64, iterate: Vec<f64> },

    #[error("iterate norm {norm:e} exceeded the divergence guard at step {step}")]
    Divergence { step: usize, norm: f64 },

    #[error("conditional gradient procedure did not terminate after {iterations} inner steps (last gap {last_gap:e})")]
    NonTermination { iterations: usize, last_gap: f64 },

    #[error("bound evaluation requires constant `{0}`")]
    MissingConstant(&'static str),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("at step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },
}

impl Error {
    /// Attach the outer solver step to an inner procedure failure.
    pub(crate) fn at_step(self, step: usize) -> Error {
        match self {
            e @ (Error::AtStep { .. } | Error::Divergence { .. }) => e,
            e => Error::AtStep { step, source: Box::new(e) },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
