//! Where results go: files in the output directory, or stdout.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>) -> anyhow::Result<Self> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Sink { dir: dir.map(Path::to_path_buf) })
    }

    /// Writes a file, or prints JSON documents when there is no directory.
    /// CSV tables are only written to files.
    pub fn text(&self, name: &str, body: &str) -> anyhow::Result<()> {
        match &self.dir {
            Some(d) => {
                let p = d.join(name);
                std::fs::write(&p, format!("{body}\n")).with_context(|| format!("writing {}", p.display()))
            }
            None if name.ends_with(".json") => {
                println!("{body}");
                Ok(())
            }
            None => Ok(()),
        }
    }

    pub fn json<T: Serialize>(&self, name: &str, doc: &T) -> anyhow::Result<()> {
        self.text(name, &serde_json::to_string_pretty(doc)?)
    }
}

/// Full double precision: 17 significant digits.
pub fn csv_row(vals: &[f64]) -> String {
    vals.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",")
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_delta(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0.0
    } else {
        (a - b).abs() / m
    }
}
