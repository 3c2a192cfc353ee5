//! Flat-file store: one shared calendar plus one XML document per series.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use tseries_core::{Calendar, Series, TimeUnit, Timestamp, Value};

use crate::error::{CliError, Result};
use crate::xml::{self, Record};

pub const STORE_ENV: &str = "TSERIES_STORE";
const DEFAULT_DIR: &str = "tseries-store";
const CALENDAR_FILE: &str = "calendar.txt";

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Letters, digits, `_` and `.`, starting with a letter or `_`.
pub fn check_name(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!("invalid series name {name:?}")))
    }
}

/// Calendar text: an optional `# unit: <unit>` line, then one timestamp per
/// line.
pub fn parse_calendar(text: &str, path: &Path) -> Result<Calendar> {
    let mut unit = TimeUnit::Day;
    let mut stamps: Vec<(usize, Timestamp)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(u) = line.strip_prefix("# unit:") {
            unit = u.trim().parse()?;
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ts = Timestamp::parse(line).map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: i + 1,
            element: "date".into(),
            message: e.to_string(),
        })?;
        if let Some((_, prev)) = stamps.last() {
            if ts.instant() <= prev.instant() {
                return Err(CliError::CalendarOrder {
                    path: path.display().to_string(),
                    line: i + 1,
                    date: line.to_string(),
                });
            }
        }
        stamps.push((i + 1, ts));
    }
    if stamps.is_empty() {
        return Err(CliError::Data(format!("{}: calendar has no dates", path.display())));
    }
    Ok(Calendar::new(stamps.into_iter().map(|(_, t)| t).collect(), unit)?)
}

fn calendar_text(cal: &Calendar) -> String {
    let mut out = format!("# unit: {}\n", cal.unit());
    for t in cal.timestamps() {
        out.push_str(t.raw());
        out.push('\n');
    }
    out
}

fn same_instants(a: &Calendar, b: &Calendar) -> bool {
    a.len() == b.len() && a.timestamps().iter().zip(b.timestamps()).all(|(x, y)| x.instant() == y.instant())
}

/// Calendar made of the record dates, which must strictly increase.
pub fn calendar_from_records(records: &[Record], path: &Path) -> Result<Calendar> {
    let stamps = parse_dates(records, path)?;
    if stamps.is_empty() {
        return Err(CliError::Data(format!("{}: no records", path.display())));
    }
    Ok(Calendar::new(stamps, TimeUnit::Day)?)
}

fn parse_dates(records: &[Record], path: &Path) -> Result<Vec<Timestamp>> {
    let mut out: Vec<Timestamp> = Vec::with_capacity(records.len());
    for r in records {
        let ts = Timestamp::parse(&r.date).map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: r.line,
            element: "date".into(),
            message: e.to_string(),
        })?;
        if out.last().is_some_and(|prev| ts.instant() <= prev.instant()) {
            return Err(CliError::CalendarOrder {
                path: path.display().to_string(),
                line: r.line,
                date: r.date.clone(),
            });
        }
        out.push(ts);
    }
    Ok(out)
}

/// Places records on `calendar`; dates without a record become empty cells.
pub fn align(name: &str, records: &[Record], calendar: Arc<Calendar>, path: &Path) -> Result<Series> {
    let stamps = parse_dates(records, path)?;
    let mut values = vec![Value::Empty; calendar.len()];
    for (r, ts) in records.iter().zip(&stamps) {
        let idx = calendar.index_of(ts.instant()).ok_or_else(|| {
            CliError::Data(format!("{}:{}: date {} is not in the calendar", path.display(), r.line, r.date))
        })?;
        values[idx] = r.value;
    }
    Ok(Series::new(name, calendar, 0, values)?)
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> Store {
        Store { dir: dir.into() }
    }

    /// Directory from the environment, or `./tseries-store`.
    pub fn from_env() -> Store {
        Store::open(std::env::var_os(STORE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_DIR.into()))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn series_path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.xml"))
    }

    pub fn calendar(&self) -> Result<Option<Arc<Calendar>>> {
        let path = self.dir.join(CALENDAR_FILE);
        if !path.exists() {
            return Ok(None);
        }
        Ok(Some(Arc::new(parse_calendar(&read_file(&path)?, &path)?)))
    }

    /// Installs `cal` as the store calendar, or returns the existing one if it
    /// has the same instants.
    pub fn adopt_calendar(&self, cal: Calendar) -> Result<Arc<Calendar>> {
        if let Some(existing) = self.calendar()? {
            if !same_instants(&existing, &cal) {
                return Err(CliError::Data(format!(
                    "calendar differs from the one already in {}",
                    self.dir.display()
                )));
            }
            return Ok(existing);
        }
        write_file(&self.dir.join(CALENDAR_FILE), &calendar_text(&cal))?;
        Ok(Arc::new(cal))
    }

    pub fn save(&self, series: &Series) -> Result<()> {
        check_name(series.name())?;
        write_file(&self.series_path(series.name()), &xml::write_document(series))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.series_path(name).exists()
    }

    pub fn load(&self, name: &str) -> Result<Series> {
        check_name(name)?;
        let path = self.series_path(name);
        if !path.exists() {
            return Err(CliError::Data(format!("no series {name:?} in {}", self.dir.display())));
        }
        let calendar = self
            .calendar()?
            .ok_or_else(|| CliError::Data(format!("{} has no calendar", self.dir.display())))?;
        let records = read_records(&path)?;
        align(name, &records, calendar, &path)
    }
}

pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    xml::read_document(&read_file(path)?).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line,
        element: e.element,
        message: e.message,
    })
}
