//! Plot-ready tables and envelope files.
//!
//! CSV output starts with a `#`-prefixed comment block, then a header row,
//! then comma-delimited rows with `.` decimals. Nothing time-dependent is
//! written, so identical inputs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pulse::{PulseEnvelope, SampledGrid, TransferFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid("format", format!("expected csv or json, got {other:?}"))),
        }
    }
}

/// Named columns of numbers or labels. Non-finite numbers become nulls.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Free-form `key = value` lines for the comment block.
    pub comments: Vec<String>,
    /// Structured metadata: rendered as TOML in CSV comments, embedded as-is
    /// in JSON.
    pub metadata: Option<Value>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| num(x)).collect());
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn with_metadata(mut self, metadata: Value) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for c in &self.comments {
            push_comment(&mut out, c);
        }
        if let Some(meta) = &self.metadata {
            let text = toml::to_string(meta).map_err(|e| Error::invalid("metadata", e.to_string()))?;
            for line in text.lines() {
                push_comment(&mut out, line);
            }
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(csv_field))?;
        }
        let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(std::str::from_utf8(&body).expect("utf-8 fields"));
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().cloned()).collect()))
            .collect();
        let mut doc = serde_json::Map::new();
        if let Some(meta) = &self.metadata {
            doc.insert("config".into(), meta.clone());
        }
        if !self.comments.is_empty() {
            doc.insert("notes".into(), Value::from(self.comments.clone()));
        }
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
        s.push('\n');
        Ok(s)
    }

    /// Writes to `path`, creating parent directories.
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        write_text(path, &self.render(format)?)
    }
}

fn push_comment(out: &mut String, line: &str) {
    out.push_str(if line.is_empty() { "#" } else { "# " });
    out.push_str(line);
    out.push('\n');
}

/// JSON number, or null when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), format_number),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Shortest round-trip representation; scientific notation outside
/// `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let wrap = |source| Error::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(wrap)?;
    }
    let mut f = fs::File::create(path).map_err(wrap)?;
    f.write_all(text.as_bytes()).map_err(wrap)
}

/// Envelope as `t_s, re, im` rows; the carrier goes in the comment block.
pub fn pulse_table(pulse: &PulseEnvelope) -> Table {
    let mut t = Table::new(["t_s", "re", "im"]);
    t.comment(format!("carrier_rad_per_s = {}", format_number(pulse.carrier())));
    for (time, e) in pulse.grid().times().into_iter().zip(pulse.samples()) {
        t.push_numbers(&[time, e.re, e.im]);
    }
    t
}

pub fn write_pulse(path: &Path, pulse: &PulseEnvelope) -> Result<()> {
    pulse_table(pulse).write(path, Format::Csv)
}

/// Reads an envelope written by [`write_pulse`] or any `t, re, im` file with
/// `#` comments and an optional header. Times must be uniform, centered as
/// `(k - n/2) dt`, with a power-of-two count. `carrier` overrides the value
/// recorded in the file.
pub fn read_pulse(path: &Path, carrier: Option<f64>) -> Result<PulseEnvelope> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut recorded = None;
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(c) = line.strip_prefix('#') {
            if let Some((k, v)) = c.split_once('=') {
                if k.trim() == "carrier_rad_per_s" {
                    recorded = Some(
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| parse_err(format!("carrier: {e}")))?,
                    );
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 3 => {
                times.push(v[0]);
                samples.push(Complex64::new(v[1], v[2]));
            }
            // header row
            Err(_) if times.is_empty() => continue,
            _ => return Err(parse_err(format!("line {}: expected three numbers", lineno + 1))),
        }
    }
    let carrier = carrier
        .or(recorded)
        .ok_or_else(|| parse_err("no carrier frequency recorded or supplied".into()))?;
    let n = times.len();
    if n < 4 {
        return Err(parse_err(format!("only {n} samples")));
    }
    let dt = times[1] - times[0];
    let grid = SampledGrid::new(n, dt).map_err(|e| parse_err(e.to_string()))?;
    for (k, &t) in times.iter().enumerate() {
        if (t - grid.time(k)).abs() > 1e-6 * dt {
            return Err(parse_err(format!(
                "sample {k} at t = {t:e} s; expected a uniform grid centered on sample n/2"
            )));
        }
    }
    PulseEnvelope::new(grid, carrier, samples, f64::INFINITY).map_err(|e| parse_err(e.to_string()))
}

/// `wavelength_nm, magnitude, phase_rad` in ascending frequency.
pub fn transfer_table(tf: &TransferFunction) -> Table {
    let mut t = Table::new(["wavelength_nm", "magnitude", "phase_rad"]);
    for row in tf.table() {
        t.push_numbers(&row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b", "label"]);
        t.comment("seed = 1");
        t.push(vec![num(1.5), num(f64::NAN), Value::from("x")]);
        t.push(vec![num(1e-12), num(0.0), Value::from("y")]);
        let s = t.to_csv().unwrap();
        assert_eq!(s, "# seed = 1\na,b,label\n1.5,,x\n1e-12,0,y\n");
    }

    #[test]
    fn metadata_is_commented_toml() {
        let t = Table::new(["x"]).with_metadata(serde_json::json!({"cell": {"passes": 3}}));
        let s = t.to_csv().unwrap();
        assert!(s.starts_with("# [cell]\n# passes = 3\n"));
        let j: Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(j["config"]["cell"]["passes"], 3);
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0, -2.5, 1e-4, 9.99e-5, 123456.789, 1e15, 3.3356409519815204e-9] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(1e-5), "1e-5");
        assert_eq!(format_number(788.4), "788.4");
    }

    #[test]
    fn pulse_round_trip() {
        let grid = SampledGrid::new(1024, 2e-15).unwrap();
        let p = PulseEnvelope::gaussian(100e-15, 2.4e15, grid).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        write_pulse(&path, &p).unwrap();
        let q = read_pulse(&path, None).unwrap();
        assert_eq!(q.carrier(), p.carrier());
        assert_eq!(q.samples(), p.samples());
        assert_eq!(q.grid().len(), 1024);
    }

    #[test]
    fn read_reports_path() {
        let err = read_pulse(Path::new("/nonexistent/pulse.csv"), Some(1.0)).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/pulse.csv"));
    }
}
