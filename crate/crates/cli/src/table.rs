//! Flat result tables and their CSV / JSON-lines serialization.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Significant digits used for every floating-point cell.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    UInt(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            Value::UInt(v) => Some(*v as f64),
            _ => None,
        }
    }

    fn csv_text(&self) -> String {
        match self {
            Value::Float(v) => format_float(*v),
            Value::Int(v) => v.to_string(),
            Value::UInt(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Value::Float(v) if v.is_finite() => format_float(*v),
            Value::Float(_) | Value::Null => "null".into(),
            Value::Int(v) => v.to_string(),
            Value::UInt(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("string serialization cannot fail"),
        }
    }
}

/// `%.12g`-style formatting: shortest of fixed/scientific, trailing zeros removed.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let p = SIGNIFICANT_DIGITS;
    // round first, then read the exponent of the rounded value
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= p as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header in {}", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// Numeric column as `f64`; non-numeric cells become NaN.
    pub fn floats(&self, name: &str) -> Option<Vec<f64>> {
        Some(
            self.column(name)?
                .into_iter()
                .map(|v| v.as_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

/// RFC-4180 CSV: header row, minimal quoting, CRLF line endings.
pub fn write_csv<W: Write>(table: &Table, out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Value::csv_text)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// One flat JSON object per row, keys in column order.
pub fn write_jsonl<W: Write>(table: &Table, mut out: W) -> CliResult<()> {
    let keys: Vec<String> = table
        .columns
        .iter()
        .map(|c| serde_json::to_string(c).expect("string serialization cannot fail"))
        .collect();
    for row in &table.rows {
        let fields: Vec<String> = keys
            .iter()
            .zip(row)
            .map(|(k, v)| format!("{k}:{}", v.json_text()))
            .collect();
        writeln!(out, "{{{}}}", fields.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_table<W: Write>(table: &Table, format: Format, out: W) -> CliResult<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Jsonl => write_jsonl(table, out),
    }
}

/// File for the `index`-th table: the first uses `primary` itself, later
/// ones insert their table name before the extension (`out.csv` -> `out.coefficients.csv`).
pub fn companion_path(primary: &Path, table: &Table, index: usize, format: Format) -> PathBuf {
    if index == 0 {
        return primary.to_path_buf();
    }
    let stem = primary.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    primary.with_file_name(format!("{stem}.{}.{}", table.name, format.extension()))
}

/// Writes every table next to `primary`; refuses to replace existing files unless `force`.
/// All target paths are checked before anything is written.
pub fn emit(tables: &[Table], format: Format, primary: &Path, force: bool) -> CliResult<Vec<PathBuf>> {
    let paths: Vec<PathBuf> = tables
        .iter()
        .enumerate()
        .map(|(i, t)| companion_path(primary, t, i, format))
        .collect();
    if !force {
        if let Some(existing) = paths.iter().find(|p| p.exists()) {
            return Err(CliError::Io(format!(
                "{} already exists; pass --force to overwrite",
                existing.display()
            )));
        }
    }
    for (table, path) in tables.iter().zip(&paths) {
        let mut opts = OpenOptions::new();
        opts.write(true);
        if force {
            opts.create(true).truncate(true);
        } else {
            opts.create_new(true);
        }
        let file = opts
            .open(path)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        write_table(table, format, std::io::BufWriter::new(file))?;
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["name", "x", "n", "ok", "missing"]);
        t.push(vec!["a,b".into(), 0.1.into(), 3usize.into(), true.into(), Value::Null]);
        t.push(vec!["say \"hi\"".into(), (1.0 / 3.0).into(), 0usize.into(), false.into(), f64::NAN.into()]);
        t
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_float(123456.0), "123456");
        assert_eq!(format_float(-2.5e-7), "-2.5e-7");
        assert_eq!(format_float(1e12), "1e12");
        assert_eq!(format_float(999999999999.5), "1e12");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(1e-5), "0.00001");
    }

    #[test]
    fn csv_quotes_and_crlf() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "name,x,n,ok,missing\r\n\"a,b\",0.1,3,true,\r\n\"say \"\"hi\"\"\",0.333333333333,0,false,NaN\r\n"
        );
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new("e", &["a", "b"]);
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        assert_eq!(buf, b"a,b\r\n");
        let mut buf = Vec::new();
        write_jsonl(&t, &mut buf).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn jsonl_rows_are_flat_objects() {
        let t = sample();
        let mut buf = Vec::new();
        write_jsonl(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), t.len());
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["name"], "a,b");
        assert_eq!(first["n"], 3);
        assert!(first["missing"].is_null());
        let second: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert!(second["missing"].is_null());
        assert!(lines[0].starts_with("{\"name\""));
    }

    #[test]
    fn emit_refuses_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut second = sample();
        second.name = "extra".into();
        let tables = vec![sample(), second];
        let written = emit(&tables, Format::Csv, &path, false).unwrap();
        assert_eq!(written[1], dir.path().join("out.extra.csv"));
        let before = std::fs::read(&path).unwrap();
        let err = emit(&tables, Format::Csv, &path, false).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        emit(&tables, Format::Csv, &path, true).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), before);
    }
}
