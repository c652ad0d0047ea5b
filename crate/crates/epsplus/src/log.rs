//! `trajectory.csv`: one row per executed cell move.

use std::io::{Read, Write};

use epsplus_core::{CellIndex, LogRecord, SegmentKind};
use thiserror::Error;

pub const HEADER: [&str; 6] = [
    "trajectory_index",
    "segment_kind",
    "col",
    "row",
    "remaining_energy",
    "cumulative_length",
];

#[derive(Debug, Error)]
pub enum LogError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("header must be `{}`", HEADER.join(","))]
    Header,
    #[error("record {record}: bad {field} `{value}`")]
    Field {
        record: usize,
        field: &'static str,
        value: String,
    },
}

pub fn write_log<W: Write>(out: W, records: &[LogRecord]) -> Result<(), LogError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.trajectory.to_string(),
            r.kind.as_str().to_string(),
            r.cell.col.to_string(),
            r.cell.row.to_string(),
            format!("{:.6}", r.remaining),
            format!("{:.6}", r.cumulative_length),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_log<R: Read>(input: R) -> Result<Vec<LogRecord>, LogError> {
    let mut rd = csv::Reader::from_reader(input);
    if rd.headers()?.iter().ne(HEADER) {
        return Err(LogError::Header);
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let record = i + 1;
        let field = |k: usize| rec.get(k).unwrap_or("").to_string();
        let bad = |k: usize| LogError::Field {
            record,
            field: HEADER[k],
            value: field(k),
        };
        let int = |k: usize| field(k).parse::<usize>().map_err(|_| bad(k));
        let real = |k: usize| field(k).parse::<f64>().map_err(|_| bad(k));
        out.push(LogRecord {
            trajectory: int(0)?,
            kind: field(1).parse::<SegmentKind>().map_err(|_| bad(1))?,
            cell: CellIndex::new(int(2)?, int(3)?),
            remaining: real(4)?,
            cumulative_length: real(5)?,
        });
    }
    Ok(out)
}
