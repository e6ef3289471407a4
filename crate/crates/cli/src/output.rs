//! Result files: a metadata record followed by the rows, as JSON or CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct Metadata<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a C,
    started_unix_ms: u128,
    wall_clock_s: f64,
}

pub struct Emitter<'a, C: Serialize> {
    config: &'a C,
    format: Format,
    path: Option<PathBuf>,
    started_unix_ms: u128,
    start: Instant,
}

impl<'a, C: Serialize> Emitter<'a, C> {
    pub fn new(config: &'a C, format: Format, path: Option<PathBuf>) -> Self {
        let started_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        Emitter {
            config,
            format,
            path,
            started_unix_ms,
            start: Instant::now(),
        }
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }

    /// Write the metadata record and `rows`.
    pub fn emit<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        let meta = Metadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: self.config,
            started_unix_ms: self.started_unix_ms,
            wall_clock_s: self.start.elapsed().as_secs_f64(),
        };
        let mut out = self.sink()?;
        match self.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Document<'m, M: Serialize, T: Serialize> {
                    metadata: &'m M,
                    rows: &'m [T],
                }
                serde_json::to_writer_pretty(&mut out, &Document { metadata: &meta, rows })?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "# {}", serde_json::to_string(&meta)?)?;
                let mut w = csv::Writer::from_writer(&mut out);
                for row in rows {
                    w.serialize(row)?;
                }
                w.flush()?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: u8,
        b: Option<f64>,
    }

    #[test]
    fn csv_starts_with_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let config = serde_json::json!({"command": "x"});
        let e = Emitter::new(&config, Format::Csv, Some(path.clone()));
        e.emit(&[Row { a: 1, b: None }, Row { a: 2, b: Some(0.5) }]).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# {\"tool\""));
        assert!(lines[0].contains("\"command\":\"x\""));
        assert_eq!(&lines[1..], ["a,b", "1,", "2,0.5"]);
    }
}
