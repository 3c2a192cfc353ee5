//! Main-memory time-series algebra.
//!
//! Series hold three kinds of values: reals, `!` (no value) and `?`
//! (unknown). The core is generic over the element type; the aliases below
//! fix it to the usual choices.

pub mod algebra;
pub mod calendar;
pub mod error;
pub mod expr;
pub mod indicators;
pub mod scalar;
pub mod segment;
pub mod series;
pub mod transport;
pub mod value;
pub mod vector;

pub use calendar::{Calendar, TimeUnit, Timestamp};
pub use error::{Error, Result};
pub use expr::{canonical_name, parse, ExprNode, QueryInterval};
pub use scalar::{format_number, Real, Scalar};
pub use segment::{Segment, SegmentSpec};
pub use series::{Interval, TimeSeries};
pub use value::{Kind, Value};

/// Double-precision series, the default for indicators and queries.
pub type Series = TimeSeries<f64>;
/// Single-precision series.
pub type Series32 = TimeSeries<f32>;
/// Exact rational series for the vector-space operations.
pub type ExactSeries = TimeSeries<num_rational::Rational64>;
/// A double-precision cell.
pub type Cell = Value<f64>;
