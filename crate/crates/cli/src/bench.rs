//! Timing of the four benchmark queries over a series sliced to each length.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use tseries_core::expr::{evaluate, parse};
use tseries_core::transport::q4_pke_text;
use tseries_core::{Interval, Series};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Query {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Query {
    pub const ALL: [Query; 4] = [Query::Q1, Query::Q2, Query::Q3, Query::Q4];

    /// Expression over `series` with window `w`; Q4 has no window.
    pub fn text(self, series: &str, w: usize) -> String {
        match self {
            Query::Q1 => format!("MAVG({series},{w})"),
            Query::Q2 => format!("RSI({series},{w})"),
            Query::Q3 => format!("MINUS(XAVG({series},3),XAVG({series},{w}))"),
            Query::Q4 => q4_pke_text(series),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Query {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Query> {
        match s.trim().to_ascii_uppercase().as_str() {
            "Q1" => Ok(Query::Q1),
            "Q2" => Ok(Query::Q2),
            "Q3" => Ok(Query::Q3),
            "Q4" => Ok(Query::Q4),
            other => Err(CliError::Usage(format!("unknown query {other:?}, expected Q1..Q4"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub query: Query,
    pub n: usize,
    pub w: usize,
    pub repeat: usize,
    pub t_ms: f64,
    pub t_min_ms: f64,
    pub t_max_ms: f64,
}

/// Times each query on the first `n` entries of `data`. Slicing happens
/// before the clock starts.
pub fn run(data: &Series, queries: &[Query], ns: &[usize], ws: &[usize], repeat: usize) -> Result<Vec<BenchRow>> {
    if repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &q in queries {
        for &n in ns {
            if n == 0 || n > data.len() {
                return Err(CliError::Usage(format!("n={n} outside 1..={}", data.len())));
            }
            let interval = Interval::new(data.start(), data.start() + n - 1)?;
            let env = HashMap::from([(data.name().to_string(), data.slice(interval)?)]);
            for &w in ws {
                let expr = parse(&q.text(data.name(), w)).map_err(crate::error::expression)?;
                let mut times = Vec::with_capacity(repeat);
                for _ in 0..repeat {
                    let clock = Instant::now();
                    let out = evaluate(&expr, &env, interval)?;
                    times.push(clock.elapsed().as_secs_f64() * 1e3);
                    std::hint::black_box(out);
                }
                rows.push(BenchRow {
                    query: q,
                    n,
                    w,
                    repeat,
                    t_ms: times.iter().sum::<f64>() / repeat as f64,
                    t_min_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
                    t_max_ms: times.iter().copied().fold(0.0, f64::max),
                });
            }
        }
    }
    Ok(rows)
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
