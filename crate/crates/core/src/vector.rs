//! Vector-space operations on aligned series.

use crate::error::Result;
use crate::scalar::{format_number, Scalar};
use crate::series::TimeSeries;

pub fn add<T: Scalar>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.zip_values(b, format!("PLUS({},{})", a.name(), b.name()), |x, y| x + y)
}

pub fn minus<T: Scalar>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.zip_values(b, format!("MINUS({},{})", a.name(), b.name()), |x, y| {
        x + y.scale(-T::one())
    })
}

pub fn mult<T: Scalar>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.zip_values(b, format!("MULT({},{})", a.name(), b.name()), |x, y| x * y)
}

pub fn scale<T: Scalar>(s: T, ts: &TimeSeries<T>) -> TimeSeries<T> {
    let factor = s.to_f64().map(format_number).unwrap_or_else(|| s.to_string());
    ts.map_values(format!("SCALE({},{})", ts.name(), factor), |v| v.scale(s))
}
