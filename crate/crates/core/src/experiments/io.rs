//! JSON-lines persistence for experiment results.
//!
//! Line 1 is a header `{format_version, config, master_seed}`; every
//! following line is one result record. Files are strict: a reader reports
//! the exact line of the first malformed record.

use super::{ExperimentResult, ExperimentsError};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub format_version: u32,
    pub config: serde_json::Value,
    pub master_seed: u64,
}

impl RunHeader {
    pub fn new(config: serde_json::Value, master_seed: u64) -> Self {
        RunHeader { format_version: FORMAT_VERSION, config, master_seed }
    }
}

pub fn persist_results(
    path: &Path,
    header: &RunHeader,
    records: &[ExperimentResult],
) -> Result<(), ExperimentsError> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut out, header).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_results(path: &Path) -> Result<(RunHeader, Vec<ExperimentResult>), ExperimentsError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header_line = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(ExperimentsError::MalformedHeader {
                detail: "file is empty".to_string(),
            })
        }
    };
    let header: RunHeader = serde_json::from_str(&header_line)
        .map_err(|e| ExperimentsError::MalformedHeader { detail: e.to_string() })?;
    if header.format_version != FORMAT_VERSION {
        return Err(ExperimentsError::VersionMismatch {
            found: header.format_version,
            expected: FORMAT_VERSION,
        });
    }
    let mut records = Vec::new();
    for (index, line) in lines.enumerate() {
        let line_number = index + 2;
        let line = line?;
        if line.trim().is_empty() {
            return Err(ExperimentsError::MalformedLine {
                line: line_number,
                detail: "blank line inside a results file".to_string(),
            });
        }
        let record: ExperimentResult = serde_json::from_str(&line)
            .map_err(|e| ExperimentsError::MalformedLine { line: line_number, detail: e.to_string() })?;
        records.push(record);
    }
    Ok((header, records))
}
