//! Result files. Each file is written to a temporary sibling and renamed
//! into place, so a failed run never leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use graphspectra::Error;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> graphspectra::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Collects an experiment's files in memory and writes them together.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn new(dir: impl Into<PathBuf>) -> OutputSet {
        OutputSet {
            dir: dir.into(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("result types serialize");
        text.push('\n');
        self.add(name, text.into_bytes());
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Writes every file, then `manifest.json` listing them.
    pub fn commit(self, mut manifest: Manifest) -> graphspectra::Result<()> {
        manifest.outputs = self.names();
        for (name, bytes) in &self.files {
            write_atomic(&self.dir.join(name), bytes)?;
        }
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        write_atomic(&self.dir.join("manifest.json"), text.as_bytes())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    /// Effective settings after merging the config file and flags.
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
}

/// A CSV table built row by row; floats are written in full precision.
#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn with_header(columns: &[&str]) -> Csv {
        let mut csv = Csv::default();
        csv.text.push_str(&columns.join(","));
        csv.text.push('\n');
        csv
    }

    pub fn row(&mut self, cells: &[Cell]) {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match cell {
                Cell::Text(s) => self.text.push_str(s),
                Cell::Int(v) => write!(self.text, "{v}").unwrap(),
                Cell::Float(v) if v.is_infinite() && *v > 0.0 => self.text.push_str("inf"),
                Cell::Float(v) => write!(self.text, "{v:?}").unwrap(),
                Cell::Empty => {}
            }
        }
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

pub enum Cell {
    Text(String),
    Int(u64),
    Float(f64),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Int(v as u64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells() {
        let mut csv = Csv::with_header(&["a", "b", "c", "d"]);
        csv.row(&["x".into(), 3usize.into(), 0.1.into(), None.into()]);
        csv.row(&["y".into(), 0usize.into(), f64::INFINITY.into(), Some(2.0).into()]);
        assert_eq!(String::from_utf8(csv.into_bytes()).unwrap(), "a,b,c,d\nx,3,0.1,\ny,0,inf,2.0\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("f.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
