//! Tables written as CSV plus a JSON mirror, and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

pub const MANIFEST: &str = "manifest.json";

pub struct Column {
    pub name: &'static str,
    pub values: Vec<Value>,
}

impl Column {
    pub fn new<T: Into<Value>>(name: &'static str, values: impl IntoIterator<Item = T>) -> Self {
        Self { name, values: values.into_iter().map(Into::into).collect() }
    }
}

pub struct Table {
    pub name: &'static str,
    pub columns: Vec<Column>,
    /// Scalars that belong with the table but not in its rows.
    pub extra: Map<String, Value>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<Column>) -> Self {
        Self { name, columns, extra: Map::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }

    fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Collects outputs of one command and writes the manifest last.
pub struct Run {
    dir: PathBuf,
    command: String,
    params: Value,
    seed: Option<u64>,
    outputs: Vec<String>,
    started: SystemTime,
    clock: Instant,
}

#[derive(Debug)]
pub struct WriteError(pub String);

impl Run {
    pub fn new(dir: &Path, command: &str, params: Value, seed: Option<u64>) -> Result<Self, WriteError> {
        fs::create_dir_all(dir).map_err(|e| WriteError(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            params,
            seed,
            outputs: Vec::new(),
            started: SystemTime::now(),
            clock: Instant::now(),
        })
    }

    pub fn write(&mut self, table: &Table) -> Result<(), WriteError> {
        let rows = table.rows();
        if table.columns.iter().any(|c| c.values.len() != rows) {
            return Err(WriteError(format!("table {} has ragged columns", table.name)));
        }
        let csv_name = format!("{}.csv", table.name);
        let csv_path = self.dir.join(&csv_name);
        let fail = |e: &dyn std::fmt::Display| WriteError(format!("cannot write {}: {e}", csv_path.display()));
        let mut w = csv::Writer::from_path(&csv_path).map_err(|e| fail(&e))?;
        w.write_record(table.columns.iter().map(|c| c.name)).map_err(|e| fail(&e))?;
        for r in 0..rows {
            w.write_record(table.columns.iter().map(|c| cell(&c.values[r]))).map_err(|e| fail(&e))?;
        }
        w.flush().map_err(|e| fail(&e))?;

        let mut columns = Map::new();
        for c in &table.columns {
            columns.insert(c.name.to_string(), Value::Array(c.values.clone()));
        }
        let mut doc = Map::new();
        doc.insert("manifest".into(), MANIFEST.into());
        doc.insert("command".into(), self.command.clone().into());
        doc.insert("params".into(), self.params.clone());
        doc.extend(table.extra.clone());
        doc.insert("columns".into(), Value::Object(columns));
        let json_name = format!("{}.json", table.name);
        self.write_json(&json_name, &Value::Object(doc))?;

        self.outputs.push(csv_name);
        self.outputs.push(json_name);
        Ok(())
    }

    fn write_json(&self, name: &str, value: &Value) -> Result<(), WriteError> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).map_err(|e| WriteError(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| WriteError(format!("cannot write {}: {e}", path.display())))
    }

    /// Writes the manifest and returns the paths of everything written.
    pub fn finish(self) -> Result<Vec<PathBuf>, WriteError> {
        let started = self.started.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        let manifest = json!({
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "outputs": self.outputs,
            "wall_clock": {
                "started_unix_s": started,
                "elapsed_s": self.clock.elapsed().as_secs_f64(),
            },
        });
        self.write_json(MANIFEST, &manifest)?;
        let mut paths: Vec<PathBuf> = self.outputs.iter().map(|o| self.dir.join(o)).collect();
        paths.push(self.dir.join(MANIFEST));
        Ok(paths)
    }
}
