//! Trial logs on disk.
//!
//! One CSV layout, version 1: UTF-8, comma separated, `.` decimals, LF line
//! endings and the header
//!
//! ```text
//! experiment,interaction,F_cm,W_cm,A_cm,phi_deg,theta_deg,alpha_deg,omega_deg,mt_s,success
//! ```
//!
//! Numbers are written in the shortest form that parses back to the same
//! `f64` (`12`, `7.5`, `1.6300000000000001`); `success` is `0` or `1`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::task::{InteractionKind, TaskSpec, Trial};

pub const SCHEMA_VERSION: u32 = 1;

pub const HEADER: [&str; 11] = [
    "experiment",
    "interaction",
    "F_cm",
    "W_cm",
    "A_cm",
    "phi_deg",
    "theta_deg",
    "alpha_deg",
    "omega_deg",
    "mt_s",
    "success",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    pub schema_version: u32,
    /// Experiment label shared by every row; `None` for an empty log.
    pub experiment: Option<String>,
    /// Interaction shared by every row, if they agree.
    pub interaction: Option<InteractionKind>,
    pub trials: Vec<Trial>,
    pub warnings: Vec<String>,
}

/// Writes `trials` under the experiment label `experiment`.
pub fn write_trials<W: Write>(mut out: W, experiment: &str, trials: &[Trial]) -> Result<()> {
    if experiment.is_empty() || experiment.contains([',', '\n', '\r', '"']) {
        return Err(Error::Schema(format!("experiment label '{experiment}' is not a plain CSV field")));
    }
    let mut line = HEADER.join(",");
    line.push('\n');
    out.write_all(line.as_bytes())?;
    for t in trials {
        let k = &t.task;
        let row = format!(
            "{experiment},{},{},{},{},{},{},{},{},{},{}\n",
            k.interaction,
            k.object_size,
            k.width,
            k.separation,
            k.direction,
            k.inclination,
            k.rotation,
            k.tolerance,
            t.mt,
            u8::from(t.success)
        );
        out.write_all(row.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trials_file(path: impl AsRef<Path>, experiment: &str, trials: &[Trial]) -> Result<()> {
    let file = File::create(path.as_ref())?;
    write_trials(BufWriter::new(file), experiment, trials)
}

fn field_error(line: u64, column: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, column, reason: reason.into() }
}

fn parse_number(record: &csv::StringRecord, line: u64, column: usize) -> Result<f64> {
    let raw = &record[column];
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| field_error(line, column + 1, format!("{} is not a number: '{raw}'", HEADER[column])))?;
    if !v.is_finite() {
        return Err(field_error(line, column + 1, format!("{} must be finite", HEADER[column])));
    }
    Ok(v)
}

fn parse_row(record: &csv::StringRecord, line: u64) -> Result<(String, Trial)> {
    if record.len() != HEADER.len() {
        return Err(field_error(
            line,
            record.len().min(HEADER.len()) + 1,
            format!("expected {} fields, found {}", HEADER.len(), record.len()),
        ));
    }
    let experiment = record[0].trim().to_string();
    if experiment.is_empty() {
        return Err(field_error(line, 1, "experiment label is empty"));
    }
    let interaction: InteractionKind =
        record[1].trim().parse().map_err(|_| field_error(line, 2, format!("unknown interaction '{}'", &record[1])))?;
    let mut nums = [0.0; 8];
    for (k, slot) in nums.iter_mut().enumerate() {
        *slot = parse_number(record, line, k + 2)?;
    }
    let success = match record[10].trim() {
        "1" => true,
        "0" => false,
        other => return Err(field_error(line, 11, format!("success must be 0 or 1, found '{other}'"))),
    };
    let task = TaskSpec {
        object_size: nums[0],
        width: nums[1],
        separation: nums[2],
        direction: nums[3],
        inclination: nums[4],
        rotation: nums[5],
        tolerance: nums[6],
        interaction,
    };
    let trial = Trial { task, mt: nums[7], success };

    let checks: [(usize, bool, &str); 8] = [
        (3, task.object_size > 0.0, "F_cm > 0"),
        (4, task.width > 0.0, "W_cm > 0"),
        (5, task.separation >= 0.0, "A_cm >= 0"),
        (6, (0.0..360.0).contains(&task.direction), "0 <= phi_deg < 360"),
        (7, (0.0..=90.0).contains(&task.inclination), "0 <= theta_deg <= 90"),
        (8, task.rotation >= 0.0, "alpha_deg >= 0"),
        (9, task.tolerance >= 0.0, "omega_deg >= 0"),
        (10, trial.mt > 0.0, "mt > 0"),
    ];
    for (column, ok, constraint) in checks {
        if !ok {
            return Err(field_error(line, column, format!("violates constraint {constraint}")));
        }
    }
    if success && trial.mt > interaction.timeout_s() {
        return Err(field_error(
            line,
            10,
            format!("successful {interaction} trial exceeds the {} s timeout", interaction.timeout_s()),
        ));
    }
    Ok((experiment, trial))
}

/// Parses a trial log, validating every row.
pub fn read_trials<R: Read>(input: R) -> Result<TrialLog> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut records = reader.records();

    let header = match records.next() {
        Some(r) => r.map_err(|e| Error::Schema(format!("unreadable header: {e}")))?,
        None => return Err(Error::Schema("missing header row".into())),
    };
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    let found = match found.first() {
        Some(first) if first.starts_with('\u{feff}') => {
            let mut v = found.clone();
            v[0] = first.trim_start_matches('\u{feff}');
            v
        }
        _ => found,
    };
    if found != HEADER {
        return Err(Error::Schema(format!(
            "header mismatch: expected '{}', found '{}'",
            HEADER.join(","),
            found.join(",")
        )));
    }

    let mut log = TrialLog {
        schema_version: SCHEMA_VERSION,
        experiment: None,
        interaction: None,
        trials: Vec::new(),
        warnings: Vec::new(),
    };
    let mut mixed_interaction = false;
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            field_error(line, 0, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        let (experiment, trial) = parse_row(&record, line)?;
        match &log.experiment {
            None => log.experiment = Some(experiment),
            Some(e) if *e != experiment => {
                return Err(field_error(line, 1, format!("experiment '{experiment}' differs from '{e}'")));
            }
            _ => {}
        }
        match log.interaction {
            None if !mixed_interaction => log.interaction = Some(trial.task.interaction),
            Some(i) if i != trial.task.interaction => {
                log.interaction = None;
                mixed_interaction = true;
            }
            _ => {}
        }
        log.trials.push(trial);
    }
    if log.trials.is_empty() {
        log.warnings.push("log contains no trials".into());
    }
    Ok(log)
}

pub fn read_trials_file(path: impl AsRef<Path>) -> Result<TrialLog> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_trials(file)
}
