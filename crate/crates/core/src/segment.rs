//! Fixed-length segments with overlap margins.
//!
//! Segment `k` has the nominal core `[k*seg_len, (k+1)*seg_len)` and carries
//! values from `overlap` entries before the core (clipped at the series
//! start) to `overlap` entries after it. Positions past the end of the
//! series hold `?`.

use std::ops::Range;
use std::sync::Arc;

use crate::calendar::Calendar;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{Interval, TimeSeries};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentSpec {
    pub seg_len: usize,
    pub overlap: usize,
}

impl Default for SegmentSpec {
    fn default() -> Self {
        SegmentSpec {
            seg_len: 1024,
            overlap: 128,
        }
    }
}

impl SegmentSpec {
    pub fn new(seg_len: usize, overlap: usize) -> Result<Self> {
        if seg_len == 0 {
            return Err(Error::InvalidParameter("segment length must be >= 1".into()));
        }
        if overlap >= seg_len {
            return Err(Error::InvalidParameter(format!(
                "overlap {overlap} must be smaller than segment length {seg_len}"
            )));
        }
        Ok(SegmentSpec { seg_len, overlap })
    }

    pub fn core(&self, ordinal: usize) -> Range<usize> {
        ordinal * self.seg_len..(ordinal + 1) * self.seg_len
    }

    pub fn ordinal_of(&self, t: usize) -> usize {
        t / self.seg_len
    }
}

/// Ordinals whose core intersects `interval`.
pub fn locate(interval: Interval, spec: SegmentSpec) -> Vec<usize> {
    (spec.ordinal_of(interval.start)..=spec.ordinal_of(interval.end)).collect()
}

/// A window of `w` entries needs `w - 1` predecessors inside the margin.
pub fn window_feasible(w: usize, spec: SegmentSpec) -> bool {
    w.saturating_sub(1) <= spec.overlap
}

#[derive(Debug, Clone)]
pub struct Segment<T> {
    series_name: String,
    index: usize,
    core: Range<usize>,
    offset: usize,
    values: Vec<Value<T>>,
    calendar: Arc<Calendar>,
    extent: Interval,
    valid: Interval,
}

impl<T: Scalar> Segment<T> {
    pub fn series_name(&self) -> &str {
        &self.series_name
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn core(&self) -> Range<usize> {
        self.core.clone()
    }

    /// Calendar index of `values()[0]`.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn values(&self) -> &[Value<T>] {
        &self.values
    }

    pub fn calendar(&self) -> &Arc<Calendar> {
        &self.calendar
    }

    /// Index range of the whole series this segment belongs to.
    pub fn extent(&self) -> Interval {
        self.extent
    }

    /// Entries whose values are authoritative. Left margins of derived
    /// segments lose validity to window lookback.
    pub fn valid(&self) -> Interval {
        self.valid
    }

    /// Core restricted to the series extent.
    pub fn core_interval(&self) -> Option<Interval> {
        let core = Interval {
            start: self.core.start,
            end: self.core.end - 1,
        };
        core.intersect(&self.extent)
    }

    /// `?` pads inside the core, past the end of the series.
    pub fn core_pads(&self) -> usize {
        self.core.end.saturating_sub(self.extent.end + 1).min(self.core.len())
    }

    pub fn value_at(&self, t: usize) -> Option<Value<T>> {
        t.checked_sub(self.offset)
            .and_then(|i| self.values.get(i))
            .copied()
    }

    /// Bytes shipped when this segment moves between peers: value cells
    /// only.
    pub fn byte_size(&self) -> usize {
        self.values.len() * std::mem::size_of::<f64>()
    }

    /// The stored values up to the series end, as a series on the calendar.
    pub fn local_series(&self) -> TimeSeries<T> {
        let last = (self.offset + self.values.len() - 1).min(self.extent.end);
        let values = self.values[..=last - self.offset].to_vec();
        TimeSeries::new(self.series_name.clone(), self.calendar.clone(), self.offset, values)
            .expect("segment lies inside its calendar")
    }

    /// Apply an operator locally. `lookback` is the number of predecessors
    /// the operator reads; the validity start moves right by that much
    /// unless the segment begins at the series start.
    pub fn map(
        &self,
        name: impl Into<String>,
        lookback: usize,
        f: impl FnOnce(&TimeSeries<T>) -> Result<TimeSeries<T>>,
    ) -> Result<Segment<T>> {
        let out = f(&self.local_series())?;
        let mut values = out.into_values();
        values.resize(self.values.len(), Value::Unknown);
        let valid_start = if self.valid.start == self.extent.start {
            self.valid.start
        } else {
            self.valid.start + lookback
        };
        Ok(Segment {
            series_name: name.into(),
            index: self.index,
            core: self.core.clone(),
            offset: self.offset,
            values,
            calendar: self.calendar.clone(),
            extent: self.extent,
            valid: Interval {
                start: valid_start.min(self.valid.end),
                end: self.valid.end,
            },
        })
    }
}

/// Split a whole series: extent and validity are the series' own interval.
pub fn split<T: Scalar>(s: &TimeSeries<T>, spec: SegmentSpec) -> Vec<Segment<T>> {
    split_partial(s, spec, s.interval(), s.interval())
}

/// Split `s`, a computed piece of a longer series with index range
/// `extent`. Only entries inside `valid` are authoritative.
pub fn split_partial<T: Scalar>(
    s: &TimeSeries<T>,
    spec: SegmentSpec,
    extent: Interval,
    valid: Interval,
) -> Vec<Segment<T>> {
    locate(s.interval(), spec)
        .into_iter()
        .map(|k| {
            let core = spec.core(k);
            let offset = core.start.saturating_sub(spec.overlap).max(s.start());
            let stop = core.end + spec.overlap;
            let values = (offset..stop)
                .map(|t| s.at(t).unwrap_or(Value::Unknown))
                .collect();
            let last_real = (stop - 1).min(s.end()).min(valid.end);
            Segment {
                series_name: s.name().to_string(),
                index: k,
                core,
                offset,
                values,
                calendar: s.calendar().clone(),
                extent,
                valid: Interval {
                    start: offset.max(valid.start).min(last_real),
                    end: last_real,
                },
            }
        })
        .collect()
}

/// Concatenate core values over `interval`. Margins and pads are dropped.
pub fn assemble<T: Scalar>(parts: &[Segment<T>], interval: Interval) -> Result<TimeSeries<T>> {
    let mut gaps: Vec<(usize, usize)> = Vec::new();
    let mut values = Vec::with_capacity(interval.len());
    for t in interval.start..=interval.end {
        match parts.iter().find(|p| p.core.contains(&t)) {
            Some(p) => values.push(p.value_at(t).unwrap_or(Value::Unknown)),
            None => match gaps.last_mut() {
                Some((_, end)) if *end + 1 == t => *end = t,
                _ => gaps.push((t, t)),
            },
        }
    }
    if !gaps.is_empty() {
        return Err(Error::CoverageGap(gaps));
    }
    let first = &parts[0];
    TimeSeries::new(
        first.series_name.clone(),
        first.calendar.clone(),
        interval.start,
        values,
    )
}
