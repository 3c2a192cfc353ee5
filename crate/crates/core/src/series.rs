//! Materialized time series over an interval of a shared calendar.

use std::sync::Arc;

use crate::calendar::Calendar;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::value::Value;

/// Inclusive range of calendar indices, `start <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidParameter(format!(
                "interval start {start} > end {end}"
            )));
        }
        Ok(Interval { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: usize) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn covers(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(Interval { start, end })
    }
}

/// An immutable series: a name (its functional expression), a calendar and
/// the values for calendar indices `start..=end`.
#[derive(Debug, Clone)]
pub struct TimeSeries<T> {
    name: String,
    calendar: Arc<Calendar>,
    start: usize,
    values: Vec<Value<T>>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(
        name: impl Into<String>,
        calendar: Arc<Calendar>,
        start: usize,
        values: Vec<Value<T>>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        let end = start + values.len() - 1;
        if end >= calendar.len() {
            return Err(Error::IntervalOutOfRange {
                start,
                end,
                lo: 0,
                hi: calendar.len() - 1,
            });
        }
        Ok(TimeSeries {
            name: name.into(),
            calendar,
            start,
            values,
        })
    }

    /// Series of plain numbers starting at calendar index 0.
    pub fn from_reals(
        name: impl Into<String>,
        calendar: Arc<Calendar>,
        reals: impl IntoIterator<Item = T>,
    ) -> Result<Self> {
        let values = reals.into_iter().map(Value::real).collect();
        TimeSeries::new(name, calendar, 0, values)
    }

    /// Same value everywhere on `interval`.
    pub fn constant(
        name: impl Into<String>,
        calendar: Arc<Calendar>,
        interval: Interval,
        value: Value<T>,
    ) -> Result<Self> {
        TimeSeries::new(name, calendar, interval.start, vec![value; interval.len()])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn calendar(&self) -> &Arc<Calendar> {
        &self.calendar
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.start + self.values.len() - 1
    }

    pub fn interval(&self) -> Interval {
        Interval {
            start: self.start,
            end: self.end(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Value<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Value<T>> {
        self.values
    }

    /// Value at calendar index `t`.
    pub fn at(&self, t: usize) -> Option<Value<T>> {
        t.checked_sub(self.start)
            .and_then(|i| self.values.get(i))
            .copied()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Restriction to `interval`, which must lie inside this series.
    pub fn slice(&self, interval: Interval) -> Result<Self> {
        if !self.interval().covers(&interval) {
            return Err(Error::IntervalOutOfRange {
                start: interval.start,
                end: interval.end,
                lo: self.start,
                hi: self.end(),
            });
        }
        let from = interval.start - self.start;
        Ok(TimeSeries {
            name: self.name.clone(),
            calendar: self.calendar.clone(),
            start: interval.start,
            values: self.values[from..from + interval.len()].to_vec(),
        })
    }

    /// Same calendar object (or equal content) and same interval.
    pub fn check_aligned(&self, other: &TimeSeries<T>) -> Result<()> {
        let same_calendar =
            Arc::ptr_eq(&self.calendar, &other.calendar) || *self.calendar == *other.calendar;
        if !same_calendar {
            return Err(Error::CalendarMismatch(format!(
                "{} and {} use different calendars",
                self.name, other.name
            )));
        }
        if self.interval() != other.interval() {
            return Err(Error::CalendarMismatch(format!(
                "{} covers [{},{}] but {} covers [{},{}]",
                self.name,
                self.start,
                self.end(),
                other.name,
                other.start,
                other.end()
            )));
        }
        Ok(())
    }

    /// New series on the same domain with values `f(v)`.
    pub fn map_values(&self, name: impl Into<String>, f: impl Fn(Value<T>) -> Value<T>) -> Self {
        TimeSeries {
            name: name.into(),
            calendar: self.calendar.clone(),
            start: self.start,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two aligned series.
    pub fn zip_values(
        &self,
        other: &TimeSeries<T>,
        name: impl Into<String>,
        f: impl Fn(Value<T>, Value<T>) -> Value<T>,
    ) -> Result<Self> {
        self.check_aligned(other)?;
        Ok(TimeSeries {
            name: name.into(),
            calendar: self.calendar.clone(),
            start: self.start,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Same domain, new values (same length required).
    pub fn with_values(&self, name: impl Into<String>, values: Vec<Value<T>>) -> Self {
        assert_eq!(values.len(), self.values.len(), "length must be preserved");
        TimeSeries {
            name: name.into(),
            calendar: self.calendar.clone(),
            start: self.start,
            values,
        }
    }
}

impl<T: Scalar> PartialEq for TimeSeries<T> {
    /// Value equality on the same domain; names are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start && self.values == other.values
    }
}
