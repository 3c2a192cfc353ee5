//! `<document>(<timeseries><date/><value/></timeseries>)*</document>`.
//! A NaN value is an unknown cell; dates missing from the document are empty.

use quick_xml::events::Event;
use quick_xml::Reader;
use tseries_core::{format_number, Series, Value};

/// One `<timeseries>` record and the line it starts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub date: String,
    pub value: Value<f64>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XmlError {
    pub line: usize,
    pub element: String,
    pub message: String,
}

fn line_at(text: &str, pos: usize) -> usize {
    let pos = pos.min(text.len());
    let skip = text[pos..].len() - text[pos..].trim_start().len();
    1 + text[..pos + skip].bytes().filter(|&b| b == b'\n').count()
}

pub fn parse_value(raw: &str) -> Option<Value<f64>> {
    if raw.eq_ignore_ascii_case("nan") {
        return Some(Value::Unknown);
    }
    raw.parse::<f64>().ok().filter(|x| x.is_finite()).map(Value::Real)
}

pub fn read_document(text: &str) -> Result<Vec<Record>, XmlError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut stack: Vec<String> = Vec::new();
    let mut records = Vec::new();
    let mut date: Option<String> = None;
    let mut value: Option<String> = None;
    let mut record_line = 0;
    loop {
        let pos = reader.buffer_position() as usize;
        let line = line_at(text, pos);
        let fail = |stack: &[String], message: String| XmlError {
            line,
            element: stack.last().cloned().unwrap_or_else(|| "document".into()),
            message,
        };
        match reader.read_event() {
            Err(e) => return Err(fail(&stack, e.to_string())),
            Ok(Event::Start(e)) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                let parent = stack.last().map(String::as_str);
                let allowed = matches!(
                    (parent, name.as_str()),
                    (None, "document") | (Some("document"), "timeseries") | (Some("timeseries"), "date" | "value")
                );
                if !allowed {
                    return Err(fail(&stack, format!("unexpected element <{name}>")));
                }
                if name == "timeseries" {
                    date = None;
                    value = None;
                    record_line = line;
                }
                stack.push(name);
            }
            Ok(Event::Empty(e)) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                if stack.is_empty() && name == "document" {
                    continue;
                }
                return Err(fail(&stack, format!("empty element <{name}/>")));
            }
            Ok(Event::Text(t)) => {
                let content = t.unescape().map_err(|e| fail(&stack, e.to_string()))?;
                store_text(&stack, content.trim(), &mut date, &mut value).map_err(|m| fail(&stack, m))?;
            }
            Ok(Event::CData(t)) => {
                let content = String::from_utf8_lossy(&t).into_owned();
                store_text(&stack, content.trim(), &mut date, &mut value).map_err(|m| fail(&stack, m))?;
            }
            Ok(Event::End(_)) => {
                let closed = stack.pop().unwrap_or_default();
                if closed == "timeseries" {
                    let (Some(d), Some(v)) = (date.take(), value.take()) else {
                        return Err(fail(&["timeseries".into()], "needs one <date> and one <value>".into()));
                    };
                    let parsed = parse_value(&v).ok_or_else(|| XmlError {
                        line: record_line,
                        element: "value".into(),
                        message: format!("not a number: {v:?}"),
                    })?;
                    records.push(Record {
                        date: d,
                        value: parsed,
                        line: record_line,
                    });
                }
            }
            Ok(Event::Eof) => {
                if !stack.is_empty() {
                    return Err(fail(&stack, "unexpected end of file".into()));
                }
                return Ok(records);
            }
            Ok(_) => {}
        }
    }
}

fn store_text(stack: &[String], content: &str, date: &mut Option<String>, value: &mut Option<String>) -> Result<(), String> {
    if content.is_empty() {
        return Ok(());
    }
    let slot = match stack.last().map(String::as_str) {
        Some("date") => date,
        Some("value") => value,
        _ => return Err(format!("unexpected text {content:?}")),
    };
    if slot.is_some() {
        return Err("duplicate element".into());
    }
    *slot = Some(content.to_string());
    Ok(())
}

/// Empty cells are left out; unknown cells are written as NaN.
pub fn write_document(series: &Series) -> String {
    let mut out = String::from("<document>\n");
    let cal = series.calendar();
    for (i, v) in series.values().iter().enumerate() {
        let text = match v {
            Value::Real(x) => format_number(*x),
            Value::Unknown => "NaN".to_string(),
            Value::Empty => continue,
        };
        let date = cal.get(series.start() + i).expect("series lies on its calendar");
        out.push_str(&format!(
            "  <timeseries><date>{}</date><value>{text}</value></timeseries>\n",
            quick_xml::escape::escape(date.raw())
        ));
    }
    out.push_str("</document>\n");
    out
}
