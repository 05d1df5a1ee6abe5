//! File formats.
//!
//! * Problem specs and bound parameters are JSON. [`to_canonical_json`]
//!   writes pretty-printed JSON with a trailing newline; reading a canonical
//!   file and writing it back is byte-identical.
//! * Traces are CSV with columns `k,step_kind,value,gap,dist,stepsize,model_gap`.
//!   `stepsize` is empty for the initial point and `model_gap` is empty for
//!   non-bundle methods. Floats use the shortest representation that
//!   round-trips.

use std::fs;
use std::io::Write;
use std::path::Path;

use growthlift_core::solvers::Trace;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Column header of trace CSV files.
pub const TRACE_COLUMNS: [&str; 7] = ["k", "step_kind", "value", "gap", "dist", "stepsize", "model_gap"];

/// Parses a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })
}

/// Pretty JSON followed by a newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Writes [`to_canonical_json`] output to `path`.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_canonical_json(value)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes the trace as CSV.
pub fn write_trace_csv<W: Write>(trace: &Trace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_COLUMNS)?;
    for r in &trace.records {
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            r.k.to_string(),
            r.step_kind.name().to_string(),
            r.value.to_string(),
            r.gap.to_string(),
            r.dist.to_string(),
            opt(r.stepsize),
            opt(r.bundle.as_ref().map(|b| b.model_gap)),
        ])?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<csv>".into(),
        source,
    })
}

/// Writes the trace CSV to `path`.
pub fn write_trace_file(trace: &Trace, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    write_trace_csv(trace, std::io::BufWriter::new(file))
}
