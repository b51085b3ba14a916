use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("observation is inconsistent with every scenario")]
    ModelMismatch,

    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    #[error("invalid environment spec: {0}")]
    InvalidSpec(String),

    #[error("graph generation failed after {attempts} attempts")]
    GraphGeneration { attempts: usize },

    #[error("action {action} is not available in state {state}")]
    InvalidAction { state: usize, action: usize },

    #[error("no action available: {0}")]
    NoAction(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("strategy `{strategy}` does not support {belief} beliefs")]
    Unsupported {
        strategy: &'static str,
        belief: &'static str,
    },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
