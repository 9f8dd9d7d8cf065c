//! The output document and its three renderings.
//!
//! A command fills one [`Doc`] with named JSON fields, plain-text lines and
//! CSV rows; `render` picks the format. JSON objects use sorted keys, so
//! every rendering is a pure function of the computed values.

use clap::ValueEnum;
use helixlab_core::{K0Vector, RankValue};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// Outcome recorded in the document and mapped to the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Indeterminate,
    Error(i32),
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Indeterminate => 2,
            Status::Error(c) => c,
        }
    }

    fn label(self) -> String {
        match self {
            Status::Ok => "ok".to_string(),
            Status::Indeterminate => "indeterminate".to_string(),
            Status::Error(c) => format!("error({})", c),
        }
    }
}

pub struct Doc {
    pub command: String,
    pub variety: Option<String>,
    pub status: Status,
    fields: Map<String, Value>,
    lines: Vec<String>,
    csv_header: Vec<String>,
    csv_rows: Vec<Vec<String>>,
}

impl Doc {
    pub fn new(command: String, variety: Option<String>) -> Doc {
        Doc {
            command,
            variety,
            status: Status::Ok,
            fields: Map::new(),
            lines: Vec::new(),
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, value: Value) {
        self.fields.insert(key.to_string(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn csv_header(&mut self, cols: &[&str]) {
        self.csv_header = cols.iter().map(|c| c.to_string()).collect();
    }

    pub fn csv_row(&mut self, row: Vec<String>) {
        self.csv_rows.push(row);
    }

    /// Lowers the status; an error or indeterminate verdict is never undone.
    pub fn mark(&mut self, status: Status) {
        if self.status == Status::Ok {
            self.status = status;
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => self.plain(),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }

    fn plain(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        if let Some(v) = &self.variety {
            s.push_str(&format!("variety: {}\n", v));
        }
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(&format!("status: {}\n", self.status.label()));
        s
    }

    fn json(&self) -> String {
        let mut m = self.fields.clone();
        m.insert("command".into(), json!(self.command));
        m.insert("variety".into(), json!(self.variety));
        m.insert("status".into(), json!(self.status.label()));
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values serialize");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.csv_header.is_empty() {
            w.write_record(&self.csv_header).expect("in-memory CSV");
        }
        for row in &self.csv_rows {
            w.write_record(row).expect("in-memory CSV");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV of UTF-8 fields")
    }
}

/// A JSON integer when it fits, a decimal string otherwise.
pub fn big_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn ubig_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

/// Exact ranks as integers, intervals as `{"lo": .., "hi": ..}` with a
/// `null` upper end when unbounded.
pub fn rank_json(r: &RankValue) -> Value {
    match r {
        RankValue::Exact(x) => ubig_json(x),
        RankValue::Interval { lo, hi } => json!({ "lo": ubig_json(lo), "hi": hi.as_ref().map(ubig_json) }),
    }
}

pub fn ranks_json(rs: &[RankValue]) -> Value {
    Value::Array(rs.iter().map(rank_json).collect())
}

/// `rank_lo`, `rank_hi` CSV cells; an unbounded end is left empty.
pub fn rank_cells(r: &RankValue) -> [String; 2] {
    [r.lo().to_string(), r.hi().map(|h| h.to_string()).unwrap_or_default()]
}

pub fn class_json(c: &K0Vector) -> Value {
    Value::Array(c.coords.iter().map(big_json).collect())
}
