use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("bad expression: {0}")]
    Expression(tseries_core::Error),
    #[error("{path}:{line}: <{element}>: {message}")]
    Parse {
        path: String,
        line: usize,
        element: String,
        message: String,
    },
    #[error("{path}:{line}: date {date} does not follow the previous one")]
    CalendarOrder { path: String, line: usize, date: String },
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Cost(#[from] tseries_cost::CostError),
    #[error(transparent)]
    Core(#[from] tseries_core::Error),
    #[error(transparent)]
    Sim(#[from] tseries_p2p::SimError),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 0 success, 1 usage, 2 data, 3 engine.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Expression(_) => 1,
            CliError::Parse { .. }
            | CliError::CalendarOrder { .. }
            | CliError::Data(_)
            | CliError::Io { .. }
            | CliError::Cost(_) => 2,
            CliError::Core(_) | CliError::Sim(_) => 3,
        }
    }
}

/// Expression errors are the caller's fault; everything else from the core is
/// an engine failure.
pub(crate) fn expression(err: tseries_core::Error) -> CliError {
    use tseries_core::Error as E;
    match err {
        E::Syntax { .. } | E::UnknownOperator { .. } | E::Arity { .. } => CliError::Expression(err),
        other => CliError::Core(other),
    }
}
