//! CSV emission: the single data contract between the simulator and any
//! downstream tooling. Twelve significant digits, LF line endings, stable
//! row order (algorithm enum order, then ascending k / parameter).

use crate::harness::{AggregateResult, SweepTable};
use std::io::Write;
use std::path::Path;

/// Format with 12 significant digits. Round-tripping the printed value
/// through `parse::<f64>` recovers it exactly at that precision.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn emit_run_csv(result: &AggregateResult, path: &Path) -> std::io::Result<()> {
    let mut out = String::new();
    out.push_str("algorithm,k,mean_norm_gain,mean_angle_sq,runs,seed\n");
    for curve in &result.curves {
        for k in 0..=result.k_max {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                curve.kind.name(),
                k,
                sig12(curve.mean_norm_gain[k]),
                sig12(curve.mean_angle_sq[k]),
                result.runs,
                result.base_seed
            ));
        }
    }
    write_atomic(path, out.as_bytes())
}

pub fn emit_sweep_csv(table: &SweepTable, path: &Path) -> std::io::Result<()> {
    let mut out = String::new();
    out.push_str(&format!(
        "algorithm,{},mean_norm_gain,runs,seed\n",
        table.param_name
    ));
    // Rows grouped by algorithm in enum order, then ascending parameter.
    let mut kinds: Vec<_> = table
        .rows
        .first()
        .map(|r| r.gains.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    kinds.sort_by_key(|k| k.order_index());
    for kind in &kinds {
        for row in &table.rows {
            if let Some((_, gain)) = row.gains.iter().find(|(k, _)| k == kind) {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    kind.name(),
                    trim_param(row.param),
                    sig12(*gain),
                    table.runs,
                    table.base_seed
                ));
            }
        }
    }
    write_atomic(path, out.as_bytes())
}

fn trim_param(p: f64) -> String {
    if p == p.trunc() && p.abs() < 1e15 {
        format!("{}", p as i64)
    } else {
        format!("{p}")
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(bytes)?;
    file.flush()
}

/// One parsed row of a run CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunCsvRow {
    pub algorithm: String,
    pub k: usize,
    pub mean_norm_gain: f64,
    pub mean_angle_sq: f64,
    pub runs: usize,
    pub seed: u64,
}

/// Parse a run CSV back (the write-then-read contract check).
pub fn parse_run_csv(path: &Path) -> std::io::Result<Vec<RunCsvRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("line {}: expected 6 fields", idx + 1),
            ));
        }
        let parse_err = |what: &str| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("line {}: bad {what}", idx + 1),
            )
        };
        rows.push(RunCsvRow {
            algorithm: fields[0].to_string(),
            k: fields[1].parse().map_err(|_| parse_err("k"))?,
            mean_norm_gain: fields[2].parse().map_err(|_| parse_err("gain"))?,
            mean_angle_sq: fields[3].parse().map_err(|_| parse_err("angle"))?,
            runs: fields[4].parse().map_err(|_| parse_err("runs"))?,
            seed: fields[5].parse().map_err(|_| parse_err("seed"))?,
        });
    }
    Ok(rows)
}
