use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Output {
    no_timestamp: bool,
}

impl Output {
    pub fn new(no_timestamp: bool) -> Self {
        Self { no_timestamp }
    }

    /// Prints `{"command": .., "generated_at": .., ...body}` as pretty JSON.
    pub fn json<T: Serialize>(&self, command: &str, body: &T) {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(command.into()));
        if !self.no_timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            map.insert("generated_at".into(), Value::from(secs));
        }
        match serde_json::to_value(body).expect("serializable output") {
            Value::Object(m) => map.extend(m),
            other => {
                map.insert("result".into(), other);
            }
        }
        let s = serde_json::to_string_pretty(&Value::Object(map)).expect("valid json");
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{s}");
    }

    pub fn csv(&self, header: &[&str], rows: &[Vec<String>]) {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        let _ = w.write_record(header);
        for r in rows {
            let _ = w.write_record(r);
        }
        let _ = w.flush();
    }

    pub fn text(&self, lines: &[String]) {
        let mut out = std::io::stdout().lock();
        for l in lines {
            if writeln!(out, "{l}").is_err() {
                return;
            }
        }
    }
}
