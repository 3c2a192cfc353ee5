use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] tseries_core::Error),
    #[error("{expr} needs {lookback} predecessors but segments overlap by {overlap}")]
    InfeasibleWindow {
        expr: String,
        lookback: usize,
        overlap: usize,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("series {0:?} is already loaded")]
    AlreadyLoaded(String),
}
