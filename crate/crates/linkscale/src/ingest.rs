//! Reading and writing link-stream files.
//!
//! Two line formats are understood. Canonical TSV has `u v t` per line with
//! `#` (or `%`) comments; KONECT edge lists have `u v [w [t]]` with `%`
//! headers, and only the four-column form carries a timestamp.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use linkscale_core::{BuildStats, LinkStream, StreamBuilder};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Stream(#[from] linkscale_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Konect,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "konect" => Ok(Format::Konect),
            other => Err(format!("unknown format `{other}` (expected tsv or konect)")),
        }
    }
}

/// A parsed stream with what normalization removed.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub stream: LinkStream,
    pub stats: BuildStats,
}

fn parse_time(field: &str, line: usize) -> Result<i64, IngestError> {
    field.parse().map_err(|_| IngestError::Parse {
        line,
        msg: format!("timestamp `{field}` is not an integer"),
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#') && !l.starts_with('%')).then_some((i + 1, l))
    })
}

/// `source target timestamp` per line; extra fields are ignored.
pub fn parse_tsv(text: &str, directed: bool, resolution: u64) -> Result<Ingested, IngestError> {
    let mut b = StreamBuilder::new(directed);
    for (line, l) in content_lines(text) {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() < 3 {
            return Err(IngestError::Parse {
                line,
                msg: format!("expected `source target timestamp`, found {} field(s)", f.len()),
            });
        }
        b.push(f[0], f[1], parse_time(f[2], line)?);
    }
    let (stream, stats) = b.finish(resolution)?;
    Ok(Ingested { stream, stats })
}

/// KONECT `u v w t` rows; the weight column is ignored.
pub fn parse_konect(text: &str, directed: bool, resolution: u64) -> Result<Ingested, IngestError> {
    let mut b = StreamBuilder::new(directed);
    for (line, l) in content_lines(text) {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f.len() {
            0 | 1 => {
                return Err(IngestError::Parse {
                    line,
                    msg: "expected at least `u v`".into(),
                })
            }
            2 | 3 => {
                return Err(IngestError::Parse {
                    line,
                    msg: "untimestamped data".into(),
                })
            }
            _ => b.push(f[0], f[1], parse_time(f[3], line)?),
        }
    }
    let (stream, stats) = b.finish(resolution)?;
    Ok(Ingested { stream, stats })
}

pub fn parse(text: &str, format: Format, directed: bool, resolution: u64) -> Result<Ingested, IngestError> {
    match format {
        Format::Tsv => parse_tsv(text, directed, resolution),
        Format::Konect => parse_konect(text, directed, resolution),
    }
}

pub fn read_stream(path: &Path, format: Format, directed: bool, resolution: u64) -> Result<Ingested, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, format, directed, resolution)
}

/// Canonical TSV: one `label_u \t label_v \t raw_time` line per event, in
/// stream order.
pub fn write_tsv(stream: &LinkStream) -> String {
    let mut out = String::with_capacity(stream.event_count() * 16);
    for e in stream.events() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            stream.label(e.u),
            stream.label(e.v),
            stream.raw_time(e.t)
        );
    }
    out
}
