//! The shared ordered list of instants every series of an application indexes
//! into. Index arithmetic is positional; the unit is descriptive only.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Duration, NaiveDate, NaiveDateTime};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeUnit {
    Second,
    Minute,
    Hour,
    #[default]
    Day,
    Week,
}

impl TimeUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Second => "second",
            TimeUnit::Minute => "minute",
            TimeUnit::Hour => "hour",
            TimeUnit::Day => "day",
            TimeUnit::Week => "week",
        }
    }

    fn step(self) -> Duration {
        match self {
            TimeUnit::Second => Duration::seconds(1),
            TimeUnit::Minute => Duration::minutes(1),
            TimeUnit::Hour => Duration::hours(1),
            TimeUnit::Day => Duration::days(1),
            TimeUnit::Week => Duration::weeks(1),
        }
    }
}

impl FromStr for TimeUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "second" | "s" => TimeUnit::Second,
            "minute" | "min" => TimeUnit::Minute,
            "hour" | "h" => TimeUnit::Hour,
            "day" | "d" => TimeUnit::Day,
            "week" | "w" => TimeUnit::Week,
            other => return Err(Error::InvalidParameter(format!("time unit {other:?}"))),
        })
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A calendar entry: the text as ingested plus the parsed instant (UTC).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timestamp {
    raw: String,
    instant: NaiveDateTime,
}

impl Timestamp {
    /// Accepts `YYYY-MM-DD`, RFC 3339 and offset-less ISO 8601 date-times
    /// with optional fractional seconds.
    pub fn parse(raw: &str) -> Result<Self> {
        let text = raw.trim();
        let instant = if let Ok(dt) = DateTime::parse_from_rfc3339(text) {
            dt.naive_utc()
        } else if let Ok(dt) = NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S%.f") {
            dt
        } else if let Ok(dt) = NaiveDateTime::parse_from_str(text, "%Y-%m-%d %H:%M:%S%.f") {
            dt
        } else if let Ok(dt) = NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M") {
            dt
        } else if let Ok(d) = NaiveDate::parse_from_str(text, "%Y-%m-%d") {
            d.and_hms_opt(0, 0, 0).expect("midnight exists")
        } else {
            return Err(Error::InvalidTimestamp(raw.to_string()));
        };
        Ok(Timestamp {
            raw: text.to_string(),
            instant,
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn instant(&self) -> NaiveDateTime {
        self.instant
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calendar {
    timestamps: Vec<Timestamp>,
    unit: TimeUnit,
}

impl Calendar {
    pub fn new(timestamps: Vec<Timestamp>, unit: TimeUnit) -> Result<Self> {
        if timestamps.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (i, pair) in timestamps.windows(2).enumerate() {
            if pair[1].instant <= pair[0].instant {
                return Err(Error::CalendarOrder {
                    index: i + 1,
                    timestamp: pair[1].raw.clone(),
                });
            }
        }
        Ok(Calendar { timestamps, unit })
    }

    pub fn parse<S: AsRef<str>>(raw: &[S], unit: TimeUnit) -> Result<Self> {
        let ts = raw
            .iter()
            .map(|s| Timestamp::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Calendar::new(ts, unit)
    }

    /// `len` consecutive steps of `unit` starting at `start`.
    pub fn regular(start: NaiveDateTime, len: usize, unit: TimeUnit) -> Self {
        let step = unit.step();
        let timestamps = (0..len)
            .map(|i| {
                let instant = start + step * i as i32;
                let raw = if unit == TimeUnit::Day || unit == TimeUnit::Week {
                    instant.format("%Y-%m-%d").to_string()
                } else {
                    instant.format("%Y-%m-%dT%H:%M:%S").to_string()
                };
                Timestamp { raw, instant }
            })
            .collect();
        Calendar { timestamps, unit }
    }

    /// Daily calendar starting 2000-01-01; handy for synthetic data.
    pub fn synthetic(len: usize) -> Self {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1)
            .and_then(|d| d.and_hms_opt(0, 0, 0))
            .expect("valid date");
        Calendar::regular(start, len.max(1), TimeUnit::Day)
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn unit(&self) -> TimeUnit {
        self.unit
    }

    pub fn get(&self, index: usize) -> Option<&Timestamp> {
        self.timestamps.get(index)
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    /// Position of an instant, if it is a calendar entry.
    pub fn index_of(&self, instant: NaiveDateTime) -> Option<usize> {
        self.timestamps
            .binary_search_by(|t| t.instant.cmp(&instant))
            .ok()
    }
}
