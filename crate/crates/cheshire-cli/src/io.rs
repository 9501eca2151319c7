//! CSV and JSON readers/writers.
//!
//! CSV schemas are minimal and diff-friendly:
//!
//! * sweep curves: `phase_rad,probability`
//! * count records: `phase_rad,counts,duration_s`
//!
//! Floats are written with the shortest round-trip representation, so files
//! regenerate byte-identically from identical inputs.

use std::fs;
use std::path::Path;

use cheshire::experiment::SweepCurve;
use cheshire::montecarlo::CountRecord;

use crate::CliError;

pub const SWEEP_HEADER: &str = "phase_rad,probability";
pub const COUNTS_HEADER: &str = "phase_rad,counts,duration_s";

pub fn sweep_csv(curve: &SweepCurve) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in &curve.points {
        out.push_str(&format!("{},{}\n", p.phase, p.probability));
    }
    out
}

pub fn counts_csv(records: &[CountRecord]) -> String {
    let mut out = String::from(COUNTS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!("{},{},{}\n", r.phase, r.counts, r.duration));
    }
    out
}

/// Parses a counts CSV, reporting the offending row (1-based, header is
/// row 1) on any schema violation.
pub fn parse_counts_csv(text: &str) -> Result<Vec<CountRecord>, CliError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == COUNTS_HEADER => {}
        Some((_, header)) => {
            return Err(CliError::usage(format!(
                "counts CSV row 1: expected header \"{COUNTS_HEADER}\", got \"{header}\""
            )))
        }
        None => return Err(CliError::usage("counts CSV is empty".into())),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::usage(format!(
                "counts CSV row {row}: expected 3 fields, got {}",
                fields.len()
            )));
        }
        let phase: f64 = fields[0].trim().parse().map_err(|_| {
            CliError::usage(format!("counts CSV row {row}: bad phase \"{}\"", fields[0]))
        })?;
        let counts: u64 = fields[1].trim().parse().map_err(|_| {
            CliError::usage(format!("counts CSV row {row}: bad counts \"{}\"", fields[1]))
        })?;
        let duration: f64 = fields[2].trim().parse().map_err(|_| {
            CliError::usage(format!(
                "counts CSV row {row}: bad duration \"{}\"",
                fields[2]
            ))
        })?;
        records.push(CountRecord {
            phase,
            counts,
            duration,
            seed_tag: 0,
        });
    }
    Ok(records)
}

pub fn read_counts_file(path: &Path) -> Result<Vec<CountRecord>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|_| CliError::usage(format!("counts file not found: {}", path.display())))?;
    parse_counts_csv(&text)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("cannot serialize JSON: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_csv_round_trips() {
        let records = vec![
            CountRecord {
                phase: 0.0,
                counts: 2526,
                duration: 5.0,
                seed_tag: 1,
            },
            CountRecord {
                phase: 0.25,
                counts: 2491,
                duration: 5.0,
                seed_tag: 2,
            },
        ];
        let text = counts_csv(&records);
        let parsed = parse_counts_csv(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].counts, 2526);
        assert_eq!(parsed[1].phase, 0.25);
    }

    #[test]
    fn schema_violations_name_the_row() {
        let bad_header = "phase,counts\n0,1,5\n";
        let err = parse_counts_csv(bad_header).unwrap_err().to_string();
        assert!(err.contains("row 1"), "{err}");

        let bad_row = format!("{COUNTS_HEADER}\n0.0,12,5.0\n0.1,oops,5.0\n");
        let err = parse_counts_csv(&bad_row).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        assert!(err.contains("oops"), "{err}");
    }
}
