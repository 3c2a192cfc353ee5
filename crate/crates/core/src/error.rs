use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("calendar mismatch: {0}")]
    CalendarMismatch(String),
    #[error("calendar timestamps must be strictly increasing (index {index}: {timestamp})")]
    CalendarOrder { index: usize, timestamp: String },
    #[error("invalid timestamp {0:?}")]
    InvalidTimestamp(String),
    #[error("interval [{start},{end}] is outside [{lo},{hi}]")]
    IntervalOutOfRange {
        start: usize,
        end: usize,
        lo: usize,
        hi: usize,
    },
    #[error("series is empty")]
    EmptySeries,
    #[error("function {function} takes {expected} arguments, got {got}")]
    ArityMismatch {
        function: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown operator {name:?} at {pos}")]
    UnknownOperator { name: String, pos: usize },
    #[error("{op}: {message}")]
    Arity { op: String, message: String },
    #[error("unknown base series {0:?}")]
    UnknownBaseSeries(String),
    #[error("series needs at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("no real samples")]
    NoData,
    #[error("segments do not cover {0:?}")]
    CoverageGap(Vec<(usize, usize)>),
}
