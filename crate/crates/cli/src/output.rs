//! CSV and metadata emission. Everything is rendered in memory first and written only once
//! the whole run has succeeded.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Schema version shared by every file this tool writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

/// A CSV table with a `# netsense <kind> v1` comment line above the header.
pub fn csv_table(kind: &str, header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut out = format!("# netsense {kind} v{SCHEMA_VERSION}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(out)
}

pub fn json_record<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Shortest round-trip decimal, with `inf`, `-inf` and `nan` spelled out.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

pub fn flag(b: bool) -> String {
    if b { "true".into() } else { "false".into() }
}

/// Write each artifact through a temporary file in `dir` and rename it into place.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for a in artifacts {
        let tmp = dir.join(format!(".{}.partial", a.name));
        std::fs::write(&tmp, &a.contents).with_context(|| format!("writing {}", tmp.display()))?;
        let dest = dir.join(&a.name);
        std::fs::rename(&tmp, &dest).with_context(|| format!("renaming to {}", dest.display()))?;
    }
    Ok(())
}
