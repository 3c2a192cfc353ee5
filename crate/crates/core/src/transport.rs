//! Eco-driving trip indicators: relative positive acceleration (RPA),
//! positive kinetic energy (PKE) and proportion of standstill time (PST).
//!
//! Speeds are stored in km/h and converted to m/s for RPA and PKE. The
//! standstill threshold stays in km/h. Acceleration comes from the supplied
//! accel series (m/s²) when present, otherwise from backward differences of
//! speed.

use crate::error::{Error, Result};
use crate::expr::{parse, ExprNode};
use crate::scalar::{lit, Real};
use crate::series::TimeSeries;

const KMH_PER_MS: f64 = 3.6;
const STANDSTILL_KMH: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct Trip<T> {
    pub speed: TimeSeries<T>,
    pub accel: Option<TimeSeries<T>>,
    pub fuel: Option<TimeSeries<T>>,
    pub legal_speed: Option<TimeSeries<T>>,
    pub position: Option<(TimeSeries<T>, TimeSeries<T>)>,
    dt: T,
    duration: T,
}

impl<T: Real> Trip<T> {
    /// `speed` in km/h sampled every `dt` seconds. The trip duration
    /// defaults to `(n - 1) * dt`.
    pub fn new(speed: TimeSeries<T>, dt: T) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::InvalidParameter("sampling period must be > 0".into()));
        }
        if speed.values().iter().any(|v| v.as_real().is_some_and(|x| x < T::zero())) {
            return Err(Error::InvalidParameter("negative speed".into()));
        }
        let duration = dt * lit((speed.len() - 1) as f64);
        Ok(Trip {
            speed,
            accel: None,
            fuel: None,
            legal_speed: None,
            position: None,
            dt,
            duration,
        })
    }

    pub fn with_accel(mut self, accel: TimeSeries<T>) -> Result<Self> {
        self.speed.check_aligned(&accel)?;
        self.accel = Some(accel);
        Ok(self)
    }

    pub fn with_fuel(mut self, fuel: TimeSeries<T>) -> Result<Self> {
        self.speed.check_aligned(&fuel)?;
        self.fuel = Some(fuel);
        Ok(self)
    }

    pub fn with_legal_speed(mut self, legal: TimeSeries<T>) -> Result<Self> {
        self.speed.check_aligned(&legal)?;
        self.legal_speed = Some(legal);
        Ok(self)
    }

    pub fn with_position(mut self, lat: TimeSeries<T>, lon: TimeSeries<T>) -> Result<Self> {
        self.speed.check_aligned(&lat)?;
        self.speed.check_aligned(&lon)?;
        self.position = Some((lat, lon));
        Ok(self)
    }

    /// Override the total duration used as the normalizer.
    pub fn with_duration(mut self, seconds: T) -> Result<Self> {
        if !(seconds > T::zero()) {
            return Err(Error::InvalidParameter("trip duration must be > 0".into()));
        }
        self.duration = seconds;
        Ok(self)
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    /// Speed in m/s at sample `i`.
    fn speed_ms(&self, i: usize) -> Option<T> {
        self.speed.values()[i].as_real().map(|v| v / lit(KMH_PER_MS))
    }

    /// Acceleration at sample `i >= 1`, or `None` across a null.
    fn accel_at(&self, i: usize) -> Option<T> {
        match &self.accel {
            Some(a) => a.values()[i].as_real(),
            None => {
                let v = self.speed_ms(i)?;
                let prev = self.speed_ms(i - 1)?;
                Some((v - prev) / self.dt)
            }
        }
    }

    fn check_len(&self) -> Result<()> {
        if self.speed.len() < 2 {
            return Err(Error::TooShort(self.speed.len()));
        }
        Ok(())
    }
}

/// `(1/x) * sum over a > 0 of v * a * dt`.
pub fn rpa<T: Real>(trip: &Trip<T>) -> Result<T> {
    trip.check_len()?;
    let mut total = T::zero();
    for i in 1..trip.speed.len() {
        if let (Some(v), Some(a)) = (trip.speed_ms(i), trip.accel_at(i)) {
            if a > T::zero() {
                total = total + v * a * trip.dt;
            }
        }
    }
    Ok(total / trip.duration)
}

/// Maximal runs of positive acceleration as `(first, last)` sample indices.
/// A null speed or acceleration ends a run.
pub fn positive_runs<T: Real>(trip: &Trip<T>) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut open: Option<usize> = None;
    for i in 1..trip.speed.len() {
        let accelerating = trip.speed_ms(i).is_some()
            && trip.speed_ms(i - 1).is_some()
            && trip.accel_at(i).is_some_and(|a| a > T::zero());
        match (accelerating, open) {
            (true, None) => open = Some(i),
            (false, Some(first)) => {
                runs.push((first, i - 1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(first) = open {
        runs.push((first, trip.speed.len() - 1));
    }
    runs
}

/// `(sum over positive-acceleration runs of vf² - vs²) / x`, where `vs` is
/// the speed just before the run and `vf` the speed at its end.
pub fn pke<T: Real>(trip: &Trip<T>) -> Result<T> {
    trip.check_len()?;
    let mut total = T::zero();
    for (first, last) in positive_runs(trip) {
        let vs = trip.speed_ms(first - 1).unwrap_or_else(T::zero);
        let vf = trip.speed_ms(last).unwrap_or_else(T::zero);
        total = total + (vf * vf - vs * vs);
    }
    Ok(total / trip.duration)
}

/// Fraction of real speed samples below 2 km/h.
pub fn pst<T: Real>(trip: &Trip<T>) -> Result<T> {
    let threshold: T = lit(STANDSTILL_KMH);
    let (mut still, mut real) = (0usize, 0usize);
    for v in trip.speed.values().iter().filter_map(|v| v.as_real()) {
        real += 1;
        if v < threshold {
            still += 1;
        }
    }
    if real == 0 {
        return Err(Error::NoData);
    }
    Ok(lit::<T>(still as f64) / lit(real as f64))
}

const Q4_TEMPLATE: &str = "MINUS(MULT(MULT(PX1, SEL(MOM(PX1,2), >0)), MULT(PX1, SEL(MOM(PX1,2), >0))), MULT(MULT(SHIFT(PX1), SEL(MOM(PX1,2), >0)), MULT(SHIFT(PX1), SEL(MOM(PX1,2), >0))))";

/// The benchmark's positive-kinetic-energy expression over series `name`.
pub fn q4_pke_expr(name: &str) -> Result<ExprNode> {
    parse(&q4_pke_text(name))
}

/// Text of the same expression, with `PX1` replaced by `name`.
pub fn q4_pke_text(name: &str) -> String {
    Q4_TEMPLATE.replace("PX1", name)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::calendar::Calendar;
    use crate::value::Value;

    fn trip_ms(speeds_ms: &[f64], dt: f64) -> Trip<f64> {
        let cal = Arc::new(Calendar::synthetic(speeds_ms.len()));
        let kmh = speeds_ms.iter().map(|v| v * 3.6);
        Trip::new(TimeSeries::from_reals("v", cal, kmh).unwrap(), dt).unwrap()
    }

    #[test]
    fn constant_speed_has_no_positive_work() {
        let t = trip_ms(&[10.0; 6], 1.0);
        assert_eq!(rpa(&t).unwrap(), 0.0);
        assert_eq!(pke(&t).unwrap(), 0.0);
    }

    #[test]
    fn single_acceleration() {
        let t = trip_ms(&[0.0, 10.0, 10.0, 0.0], 1.0)
            .with_duration(4.0)
            .unwrap();
        assert!((rpa(&t).unwrap() - 25.0).abs() < 1e-9);
        assert!((pke(&t).unwrap() - 25.0).abs() < 1e-9);
    }

    #[test]
    fn oscillation_raises_pke() {
        let t = trip_ms(&[0.0, 5.0, 0.0, 5.0, 0.0], 1.0);
        assert_eq!(t.duration(), 4.0);
        assert!((pke(&t).unwrap() - 12.5).abs() < 1e-9);
        assert_eq!(positive_runs(&t), vec![(1, 1), (3, 3)]);
    }

    #[test]
    fn deceleration_only() {
        let t = trip_ms(&[20.0, 15.0, 10.0, 0.0], 1.0);
        assert_eq!(rpa(&t).unwrap(), 0.0);
        assert_eq!(pke(&t).unwrap(), 0.0);
    }

    #[test]
    fn null_speed_breaks_runs() {
        let cal = Arc::new(Calendar::synthetic(5));
        let v = vec![
            Value::Real(0.0),
            Value::Real(36.0),
            Value::Empty,
            Value::Real(36.0),
            Value::Real(72.0),
        ];
        let t: Trip<f64> = Trip::new(TimeSeries::new("v", cal, 0, v).unwrap(), 1.0).unwrap();
        assert_eq!(positive_runs(&t), vec![(1, 1), (4, 4)]);
        // (10² - 0²) + (20² - 10²) over x = 4
        assert!((pke(&t).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn supplied_acceleration_takes_precedence() {
        let cal = Arc::new(Calendar::synthetic(3));
        let speed = TimeSeries::<f64>::from_reals("v", cal.clone(), [36.0, 36.0, 36.0]).unwrap();
        let accel = TimeSeries::from_reals("a", cal, [0.0, 1.0, 0.0]).unwrap();
        let t = Trip::new(speed, 1.0).unwrap().with_accel(accel).unwrap();
        // v = 10 m/s, a = 1 m/s² for one second, x = 2
        assert!((rpa(&t).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn standstill_fraction() {
        let cal = Arc::new(Calendar::synthetic(4));
        let mk = |v: [f64; 4]| {
            Trip::new(TimeSeries::from_reals("v", cal.clone(), v).unwrap(), 1.0).unwrap()
        };
        assert_eq!(pst(&mk([1.0, 3.0, 1.0, 3.0])).unwrap(), 0.5);
        assert_eq!(pst(&mk([2.0, 3.0, 50.0, 3.0])).unwrap(), 0.0);
        assert_eq!(pst(&mk([0.0; 4])).unwrap(), 1.0);
        let none = TimeSeries::<f64>::new("v", cal.clone(), 0, vec![Value::Empty; 4]).unwrap();
        assert_eq!(pst(&Trip::new(none, 1.0).unwrap()), Err(Error::NoData));
    }

    #[test]
    fn too_short() {
        let t = trip_ms(&[3.0], 1.0);
        assert_eq!(rpa(&t), Err(Error::TooShort(1)));
        assert_eq!(pke(&t), Err(Error::TooShort(1)));
    }

    #[test]
    fn q4_expression_serializes_back() {
        let e = q4_pke_expr("PX1").unwrap();
        assert_eq!(e.to_string(), q4_pke_text("PX1").replace(' ', ""));
    }
}
