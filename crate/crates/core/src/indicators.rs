//! Technical-analysis indicators built on the window semantics of
//! [`crate::algebra::win`]: windows end at the current entry and read
//! positions before the first entry as the first entry.

use crate::algebra::{join, padded, sel, CombineFn, CompareOp, Predicate};
use crate::error::{Error, Result};
use crate::scalar::{format_number, lit, Real};
use crate::series::TimeSeries;
use crate::value::Value;
use crate::vector::minus;

/// Exponentially weighted window: weight `(1 - alpha)^lag` for lags
/// `0..w`, normalized by the weight sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XavgParams {
    pub w: usize,
    pub alpha: f64,
}

impl XavgParams {
    /// `alpha = 2 / (w + 1)`.
    pub fn new(w: usize) -> Result<Self> {
        XavgParams::with_alpha(w, 2.0 / (w as f64 + 1.0))
    }

    pub fn with_alpha(w: usize, alpha: f64) -> Result<Self> {
        if w == 0 {
            return Err(Error::InvalidParameter("XAVG window must be >= 1".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "XAVG alpha {alpha} not in (0,1]"
            )));
        }
        Ok(XavgParams { w, alpha })
    }

    pub fn default_alpha(&self) -> bool {
        self.alpha == 2.0 / (self.w as f64 + 1.0)
    }
}

/// Gains and losses over a window of first differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainLoss<T> {
    pub gains: T,
    pub losses: T,
}

fn check_window(w: usize, op: &str) -> Result<()> {
    if w == 0 {
        return Err(Error::InvalidParameter(format!("{op} window must be >= 1")));
    }
    Ok(())
}

/// Null counts of a sliding window.
#[derive(Default, Clone, Copy)]
struct NullCounts {
    empty: usize,
    unknown: usize,
}

impl NullCounts {
    fn update<T>(&mut self, v: &Value<T>, delta: isize) {
        let slot = match v {
            Value::Real(_) => return,
            Value::Empty => &mut self.empty,
            Value::Unknown => &mut self.unknown,
        };
        *slot = slot.wrapping_add_signed(delta);
    }

    fn null<T: Real>(&self) -> Option<Value<T>> {
        if self.unknown > 0 {
            Some(Value::Unknown)
        } else if self.empty > 0 {
            Some(Value::Empty)
        } else {
            None
        }
    }
}

/// Neumaier-compensated running sum supporting removal.
#[derive(Clone, Copy)]
struct RunningSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> RunningSum<T> {
    fn new() -> Self {
        RunningSum {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.comp
    }
}

fn slide<T: Real>(x: &Value<T>, entering: bool, sum: &mut RunningSum<T>, nulls: &mut NullCounts) {
    match x {
        Value::Real(r) => sum.add(if entering { *r } else { -*r }),
        n => nulls.update(n, if entering { 1 } else { -1 }),
    }
}

/// Simple moving average in O(1) per entry.
pub fn mavg<T: Real>(s: &TimeSeries<T>, w: usize) -> Result<TimeSeries<T>> {
    check_window(w, "MAVG")?;
    let v = s.values();
    let wt: T = lit(w as f64);
    let mut sum = RunningSum::new();
    let mut nulls = NullCounts::default();
    // the window at t = 0 holds w copies of the first entry
    for _ in 0..w {
        slide(&v[0], true, &mut sum, &mut nulls);
    }
    let mut values = Vec::with_capacity(v.len());
    for t in 0..v.len() {
        if t > 0 {
            slide(&v[t], true, &mut sum, &mut nulls);
            slide(&padded(v, t, w), false, &mut sum, &mut nulls);
        }
        values.push(
            nulls
                .null()
                .unwrap_or_else(|| Value::real(sum.value() / wt)),
        );
    }
    Ok(s.with_values(format!("MAVG({},{})", s.name(), w), values))
}

/// Finite-window exponentially weighted average.
pub fn xavg<T: Real>(s: &TimeSeries<T>, p: XavgParams) -> Result<TimeSeries<T>> {
    let p = XavgParams::with_alpha(p.w, p.alpha)?;
    let beta: T = lit(1.0 - p.alpha);
    let mut weights = Vec::with_capacity(p.w);
    let mut wgt = T::one();
    for _ in 0..p.w {
        weights.push(wgt);
        wgt = wgt * beta;
    }
    let norm = weights.iter().fold(T::zero(), |a, &b| a + b);
    let v = s.values();
    let values = (0..v.len())
        .map(|t| {
            let window = (0..p.w).map(|lag| padded(v, t, lag));
            if let Some(null) = Value::merge_kinds(window.clone().map(|x| x.kind())) {
                return null;
            }
            let num = window
                .zip(&weights)
                .fold(T::zero(), |acc, (x, &wt)| acc + wt * x.as_real().unwrap_or_else(T::zero));
            Value::real(num / norm)
        })
        .collect();
    let name = if p.default_alpha() {
        format!("XAVG({},{})", s.name(), p.w)
    } else {
        format!("XAVG({},{},{})", s.name(), p.w, format_number(p.alpha))
    };
    Ok(s.with_values(name, values))
}

/// Gains and losses over the `w` first differences ending at `t`, or the
/// null the window propagates.
pub fn gain_loss<T: Real>(v: &[Value<T>], t: usize, w: usize) -> std::result::Result<GainLoss<T>, Value<T>> {
    if let Some(null) = Value::merge_kinds((0..=w).map(|lag| padded(v, t, lag).kind())) {
        return Err(null);
    }
    let mut gl = GainLoss {
        gains: T::zero(),
        losses: T::zero(),
    };
    for lag in (0..w).rev() {
        let cur = padded(v, t, lag).as_real().unwrap_or_else(T::zero);
        let prev = padded(v, t, lag + 1).as_real().unwrap_or_else(T::zero);
        let d = cur - prev;
        if d > T::zero() {
            gl.gains = gl.gains + d;
        } else {
            gl.losses = gl.losses - d;
        }
    }
    Ok(gl)
}

/// Relative strength index `100 * G / (G + L)`; `?` when `G + L = 0`.
pub fn rsi<T: Real>(s: &TimeSeries<T>, w: usize) -> Result<TimeSeries<T>> {
    check_window(w, "RSI")?;
    let v = s.values();
    let hundred: T = lit(100.0);
    let values = (0..v.len())
        .map(|t| match gain_loss(v, t, w) {
            Err(null) => null,
            Ok(gl) => {
                let total = gl.gains + gl.losses;
                if total == T::zero() {
                    Value::Unknown
                } else {
                    Value::real(hundred * gl.gains / total)
                }
            }
        })
        .collect();
    Ok(s.with_values(format!("RSI({},{})", s.name(), w), values))
}

/// Momentum `s[t] - s[t-w]`.
pub fn mom<T: Real>(s: &TimeSeries<T>, w: usize) -> Result<TimeSeries<T>> {
    check_window(w, "MOM")?;
    let v = s.values();
    let values = (0..v.len())
        .map(|t| v[t] - padded(v, t, w))
        .collect();
    Ok(s.with_values(format!("MOM({},{})", s.name(), w), values))
}

/// One-step lag; the first entry is repeated.
pub fn shift<T: Real>(s: &TimeSeries<T>) -> TimeSeries<T> {
    let v = s.values();
    let values = (0..v.len()).map(|t| padded(v, t, 1)).collect();
    s.with_values(format!("SHIFT({})", s.name()), values)
}

/// `MAVG(s, short) - MAVG(s, long)`.
pub fn macd<T: Real>(s: &TimeSeries<T>, short: usize, long: usize) -> Result<TimeSeries<T>> {
    if short >= long {
        return Err(Error::InvalidParameter(format!(
            "MACD needs short < long, got {short} and {long}"
        )));
    }
    minus(&mavg(s, short)?, &mavg(s, long)?)
}

/// `SEL>0(MAVG9(MAVG12(s) - MAVG26(s)))`: non-`!` entries are buy events.
pub fn buy_signal<T: Real>(s: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    let signal = mavg(&macd(s, 12, 26)?, 9)?;
    Ok(sel(&Predicate::new(CompareOp::Gt, 0.0)?, &signal))
}

/// `SEL>1.1(MAVG26(s) / MAVG12(s))`: non-`!` entries are sell events.
pub fn sell_signal<T: Real>(s: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    let ratio = join(CombineFn::Divide, &[&mavg(s, 26)?, &mavg(s, 12)?])?;
    let ratio = ratio.with_name(format!("DIVIDE(MAVG({0},26),MAVG({0},12))", s.name()));
    Ok(sel(&Predicate::new(CompareOp::Gt, 1.1)?, &ratio))
}
