//! Trip CSV: `road_id,lat,lon,legal_speed,speed,accel,fuel`, one row per
//! sample. Blank cells are empty, `NaN` is unknown.

use std::path::Path;
use std::sync::Arc;

use chrono::NaiveDate;
use tseries_core::transport::Trip;
use tseries_core::{Calendar, Series, TimeUnit, Value};

use crate::error::{CliError, Result};
use crate::xml::parse_value;

pub const NUMERIC_COLUMNS: [&str; 6] = ["lat", "lon", "legal_speed", "speed", "accel", "fuel"];

#[derive(Debug, Clone)]
pub struct TripTable {
    pub road_id: Vec<String>,
    /// Columns in `NUMERIC_COLUMNS` order.
    pub columns: Vec<Vec<Value<f64>>>,
}

pub fn read_trip_csv(text: &str, path: &Path) -> Result<TripTable> {
    let parse_err = |line: u64, element: &str, message: String| CliError::Parse {
        path: path.display().to_string(),
        line: line as usize,
        element: element.to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| parse_err(1, "header", e.to_string()))?.clone();
    let find = |col: &str| {
        headers
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| parse_err(1, "header", format!("missing column {col:?}")))
    };
    let road = find("road_id")?;
    let idx = NUMERIC_COLUMNS.iter().map(|c| find(c)).collect::<Result<Vec<_>>>()?;
    let mut table = TripTable {
        road_id: Vec::new(),
        columns: vec![Vec::new(); NUMERIC_COLUMNS.len()],
    };
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, "row", e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        table.road_id.push(row.get(road).unwrap_or("").to_string());
        for (k, &i) in idx.iter().enumerate() {
            let cell = row.get(i).unwrap_or("");
            let v = if cell.is_empty() {
                Value::Empty
            } else {
                parse_value(cell).ok_or_else(|| parse_err(line, NUMERIC_COLUMNS[k], format!("not a number: {cell:?}")))?
            };
            table.columns[k].push(v);
        }
    }
    if table.road_id.len() < 2 {
        return Err(CliError::Data(format!("{}: a trip needs at least 2 rows", path.display())));
    }
    Ok(table)
}

impl TripTable {
    pub fn len(&self) -> usize {
        self.road_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.road_id.is_empty()
    }

    /// One sample per second from 2000-01-01T00:00:00.
    pub fn calendar(&self) -> Calendar {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1)
            .and_then(|d| d.and_hms_opt(0, 0, 0))
            .expect("valid start");
        Calendar::regular(start, self.len(), TimeUnit::Second)
    }

    fn column(&self, name: &str) -> &[Value<f64>] {
        let k = NUMERIC_COLUMNS.iter().position(|c| *c == name).expect("known column");
        &self.columns[k]
    }

    /// Series named `<prefix>.<column>`.
    pub fn series(&self, prefix: &str, calendar: Arc<Calendar>) -> Result<Vec<Series>> {
        NUMERIC_COLUMNS
            .iter()
            .map(|c| Ok(Series::new(format!("{prefix}.{c}"), calendar.clone(), 0, self.column(c).to_vec())?))
            .collect()
    }

    /// Speed in km/h every `dt` seconds; the accel column is used when it has
    /// any real sample.
    pub fn trip(&self, dt: f64) -> Result<Trip<f64>> {
        let cal = Arc::new(self.calendar());
        let speed = Series::new("speed", cal.clone(), 0, self.column("speed").to_vec())?;
        let data = |e: tseries_core::Error| CliError::Data(e.to_string());
        let mut trip = Trip::new(speed, dt).map_err(data)?;
        let accel = self.column("accel");
        if accel.iter().any(Value::is_real) {
            trip = trip.with_accel(Series::new("accel", cal, 0, accel.to_vec())?).map_err(data)?;
        }
        Ok(trip)
    }
}
