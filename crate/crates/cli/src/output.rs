//! JSON and CSV serialization of reports.
//!
//! Floats are written with 15 significant digits (`{:.14e}`) so identical
//! runs give byte-identical files. Non-finite values become `null` in JSON.

use std::io::{self, Write};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use pblab_core::{ParamValue, VerificationReport};

use crate::config::OutputFormat;

pub fn float(v: f64) -> String {
    format!("{v:.14e}")
}

struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_none()
        }
    }
}

struct Params<'a>(&'a [(String, ParamValue)]);

impl Serialize for Params<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            match v {
                ParamValue::Real(x) => map.serialize_entry(k, &Real(*x))?,
                ParamValue::Int(i) => map.serialize_entry(k, i)?,
                ParamValue::Text(t) => map.serialize_entry(k, t)?,
            }
        }
        map.end()
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    check: &'a str,
    params: Params<'a>,
    residual: Real,
    tolerance: Real,
    pass: bool,
    metadata: &'a [String],
}

/// Pretty printing with fixed-precision floats.
struct Fixed(PrettyFormatter<'static>);

impl Formatter for Fixed {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(float(value).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json(reports: &[VerificationReport]) -> String {
    let rows: Vec<JsonReport> = reports
        .iter()
        .map(|r| JsonReport {
            check: &r.check,
            params: Params(&r.params),
            residual: Real(r.residual),
            tolerance: Real(r.tolerance),
            pass: r.pass,
            metadata: &r.metadata,
        })
        .collect();
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed(PrettyFormatter::new()));
    rows.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn param_text(v: &ParamValue) -> String {
    match v {
        ParamValue::Real(x) => float(*x),
        other => other.to_string(),
    }
}

/// CSV with a header row; `params` is `key=value` joined by `;`, and
/// `metadata` notes are joined by ` | `.
pub fn to_csv(reports: &[VerificationReport]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "params", "residual", "tolerance", "pass", "metadata"])?;
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", param_text(v)))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.check.clone(),
            params,
            float(r.residual),
            float(r.tolerance),
            r.pass.to_string(),
            r.metadata.join(" | "),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

pub fn render(reports: &[VerificationReport], format: OutputFormat) -> csv::Result<String> {
    match format {
        OutputFormat::Json => Ok(to_json(reports)),
        OutputFormat::Csv => to_csv(reports),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<VerificationReport> {
        vec![
            VerificationReport::new("alpha_check", 1.5e-7, 1e-6)
                .with_param("alpha", 1.3)
                .with_param("n", 2usize)
                .with_param("mode", "analytic")
                .with_note("a note, with \"quotes\""),
            VerificationReport::failed("broken", 1e-6, &"went wrong"),
        ]
    }

    #[test]
    fn json_layout() {
        let text = to_json(&sample());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let first = v[0].as_object().unwrap();
        let keys: Vec<&str> = first.keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 6);
        // field order as written
        let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("check") < pos("params"));
        assert!(pos("params") < pos("residual"));
        assert!(pos("residual") < pos("tolerance"));
        assert!(pos("tolerance") < pos("pass"));
        assert!(pos("pass") < pos("metadata"));
        assert!(text.contains("1.50000000000000e-7"));
        assert!(text.contains("1.30000000000000e0"));
        assert!(v[1]["residual"].is_null());
        assert_eq!(v[0]["params"]["n"], 2);
        assert_eq!(v[1]["pass"], false);
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&sample()).unwrap();
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, ["check", "params", "residual", "tolerance", "pass", "metadata"]);
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(&rows[0][1], "alpha=1.30000000000000e0;n=2;mode=analytic");
        assert_eq!(&rows[0][5], "a note, with \"quotes\"");
        assert_eq!(&rows[1][2], "inf");
        assert!(text.contains("\"a note, with \"\"quotes\"\"\""));
    }

    #[test]
    fn deterministic() {
        assert_eq!(to_json(&sample()), to_json(&sample()));
    }
}
