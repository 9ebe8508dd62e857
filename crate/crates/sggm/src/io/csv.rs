//! The sweep's tabular output. Column set and order are frozen; consumers
//! parse by header name at their peril, by position safely.

use std::fmt::Write;
use thiserror::Error;

pub const SWEEP_HEADER: &str = "channel,n,shrink,alpha,beta,gamma,d_n,snr_db,wall_time_ms";

#[derive(Debug, Error, PartialEq)]
pub enum CsvError {
    #[error("line {line}: {what}")]
    Malformed { line: usize, what: String },
}

/// One fitted point of the window sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub channel: String,
    pub n: usize,
    /// Realized fraction `1 - n/N`, recomputed from the rounded `n`.
    pub shrink: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub d_n: f64,
    pub snr_db: f64,
    pub wall_time_ms: f64,
}

pub fn write_sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        // Default float formatting is shortest-round-trip, so reading the
        // file back reproduces the exact values.
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.channel, r.n, r.shrink, r.alpha, r.beta, r.gamma, r.d_n, r.snr_db, r.wall_time_ms
        );
    }
    out
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == SWEEP_HEADER => {}
        Some((_, other)) => {
            return Err(CsvError::Malformed {
                line: 1,
                what: format!("header {other:?}, expected {SWEEP_HEADER:?}"),
            })
        }
        None => return Err(CsvError::Malformed { line: 1, what: "empty file".to_string() }),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(CsvError::Malformed {
                line: idx + 1,
                what: format!("{} fields, expected 9", fields.len()),
            });
        }
        let num = |i: usize| -> Result<f64, CsvError> {
            fields[i].parse().map_err(|_| CsvError::Malformed {
                line: idx + 1,
                what: format!("unreadable number {:?}", fields[i]),
            })
        };
        records.push(SweepRecord {
            channel: fields[0].to_string(),
            n: fields[1].parse().map_err(|_| CsvError::Malformed {
                line: idx + 1,
                what: format!("unreadable window side {:?}", fields[1]),
            })?,
            shrink: num(2)?,
            alpha: num(3)?,
            beta: num(4)?,
            gamma: num(5)?,
            d_n: num(6)?,
            snr_db: num(7)?,
            wall_time_ms: num(8)?,
        });
    }
    Ok(records)
}
