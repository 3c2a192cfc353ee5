//! Cost model of a segmented query over `p` peers and `n` entries.
//!
//! With compute time `A·n`, lookup time `B·p·ln p` and transfer time `C·n`,
//! the ratio of peer-to-peer to client/server time is
//! `K1·(p/n)·ln p + K2/p + K3` where `K1 = B/(A+C)`, `K2 = A/(A+C)` and
//! `K3 = C/(A+C)`. Its inverse is the gain.

use std::io::{Read, Write};

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CostError {
    #[error("need rows for at least two distinct peer counts, got {0}")]
    Underdetermined(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CostError>;

/// Bytes of `stocks` series over `years`, sampled `values_per_minute`
/// times during `hours_per_day` trading hours.
pub fn capacity_bytes(
    stocks: u64,
    years: u64,
    days_per_year: u64,
    hours_per_day: f64,
    values_per_minute: u64,
    bytes_per_value: u64,
) -> u64 {
    let minutes_per_day = (60.0 * hours_per_day).round() as u64;
    stocks * years * days_per_year * minutes_per_day * values_per_minute * bytes_per_value
}

/// `bytes` in binary gigabytes, e.g. `≈34.2 GB`.
pub fn format_gb(bytes: u64) -> String {
    format!("≈{:.1} GB", bytes as f64 / f64::powi(2.0, 30))
}

/// Per-entry compute cost `a`, lookup coefficient `b` and per-entry
/// transfer cost `c`, all in ms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainConstants<T> {
    pub k1: T,
    pub k2: T,
    pub k3: T,
}

impl<T: Float> CostParams<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if !(a > T::zero() && b > T::zero() && c > T::zero()) {
            return Err(CostError::InvalidParameter(
                "A, B and C must be positive".into(),
            ));
        }
        Ok(CostParams { a, b, c })
    }

    pub fn gain_constants(&self) -> GainConstants<T> {
        let total = self.a + self.c;
        GainConstants {
            k1: self.b / total,
            k2: self.a / total,
            k3: self.c / total,
        }
    }
}

fn cast<T: Float>(x: usize) -> T {
    T::from(x).expect("usize fits a float")
}

/// `K1·(p/n)·ln p + K2/p + K3`.
pub fn inverse_gain<T: Float>(p: usize, n: usize, k: &GainConstants<T>) -> T {
    assert!(p >= 1 && n >= 1, "p and n must be positive");
    let (p, n) = (cast::<T>(p), cast::<T>(n));
    k.k1 * (p / n) * p.ln() + k.k2 / p + k.k3
}

pub fn gain<T: Float>(p: usize, n: usize, k: &GainConstants<T>) -> T {
    inverse_gain(p, n, k).recip()
}

/// Peer count in `1..=p_max` minimizing the inverse gain; ties go to the
/// smaller count.
pub fn optimal_peers<T: Float>(n: usize, k: &GainConstants<T>, p_max: usize) -> usize {
    (1..=p_max.max(1))
        .map(|p| (p, inverse_gain(p, n, k)))
        .fold((1, T::infinity()), |best, (p, v)| if v < best.1 { (p, v) } else { best })
        .0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedTiming<T> {
    pub p: usize,
    pub t_r: T,
    pub t_p: T,
    pub t_q: T,
    pub t_net: T,
    pub t_p2p: T,
}

/// Model times for `p` peers: `t_r = B·p·ln p`, `t_p = A·n/p`. Query
/// shipping and result transfer are the given constants.
pub fn predict_tp2p<T: Float>(p: usize, n: usize, params: &CostParams<T>, t_q: T, t_net: T) -> PredictedTiming<T> {
    let (pf, nf) = (cast::<T>(p), cast::<T>(n));
    let t_r = params.b * pf * pf.ln();
    let t_p = params.a * nf / pf;
    PredictedTiming {
        p,
        t_r,
        t_p,
        t_q,
        t_net,
        t_p2p: t_r + t_p + t_q + t_net,
    }
}

/// One measured row: peers, per-segment index time, total lookup time and
/// per-peer processing time (ms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredRow {
    pub p: usize,
    pub t_index: f64,
    pub t_r: f64,
    pub t_p: f64,
}

/// Measurements of a 100-entry-window MACD over 500000 entries, with a
/// constant 400 ms result transfer.
pub const MEASURED_CSV: &str = include_str!("../data/measured.csv");
pub const MEASURED_N: usize = 500_000;
pub const MEASURED_T_NET: f64 = 400.0;

pub fn measured_rows() -> Vec<MeasuredRow> {
    read_rows(MEASURED_CSV.as_bytes()).expect("bundled fixture parses")
}

/// Rows from CSV with header `p,t_index,t_r,t_p`.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<MeasuredRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<MeasuredRow>, _>>()
        .map_err(CostError::from)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub p: usize,
    pub t_r: f64,
    pub t_r_model: f64,
    pub t_p: f64,
    pub t_p_model: f64,
}

impl Residual {
    pub fn t_r_relative(&self) -> f64 {
        (self.t_r_model - self.t_r).abs() / self.t_r
    }

    pub fn t_p_relative(&self) -> f64 {
        (self.t_p_model - self.t_p).abs() / self.t_p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub params: CostParams<f64>,
    pub residuals: Vec<Residual>,
}

/// Fit `A` to `t_p·p/n` and `B` to `t_r/(p·ln p)` by least squares on the
/// per-row ratios (rows with `p = 1` carry no lookup information). `C` is
/// the constant transfer time spread over `n` entries.
pub fn fit(rows: &[MeasuredRow], n: usize, t_net: f64) -> Result<Fit> {
    let mut distinct: Vec<usize> = rows.iter().map(|r| r.p).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 || !distinct.iter().any(|&p| p >= 2) {
        return Err(CostError::Underdetermined(distinct.len()));
    }
    if n == 0 || !(t_net > 0.0) {
        return Err(CostError::InvalidParameter("n and t_net must be positive".into()));
    }
    let nf = n as f64;
    let mean = |xs: Vec<f64>| xs.iter().sum::<f64>() / xs.len() as f64;
    let a = mean(rows.iter().map(|r| r.t_p * r.p as f64 / nf).collect());
    let b = mean(
        rows.iter()
            .filter(|r| r.p >= 2)
            .map(|r| r.t_r / (r.p as f64 * (r.p as f64).ln()))
            .collect(),
    );
    let params = CostParams::new(a, b, t_net / nf)?;
    let residuals = rows
        .iter()
        .map(|r| {
            let model = predict_tp2p(r.p, n, &params, 0.0, t_net);
            Residual {
                p: r.p,
                t_r: r.t_r,
                t_r_model: model.t_r,
                t_p: r.t_p,
                t_p_model: model.t_p,
            }
        })
        .collect();
    Ok(Fit { params, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub p: usize,
    pub n: usize,
    pub gain: f64,
}

/// Gain over every `(p, n)` pair, `p` varying fastest within each `n`.
pub fn gain_grid(k: &GainConstants<f64>, ps: &[usize], ns: &[usize]) -> Vec<GridPoint> {
    ns.iter()
        .flat_map(|&n| ps.iter().map(move |&p| GridPoint { p, n, gain: gain(p, n, k) }))
        .collect()
}

/// CSV with header `p,n,gain`.
pub fn write_grid<W: Write>(out: W, grid: &[GridPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for point in grid {
        w.serialize(point)?;
    }
    w.flush().map_err(|e| CostError::Csv(e.into()))?;
    Ok(())
}
