//! CSV and JSON emission with versioned schemas.
//!
//! CSV files open with a `# schema=...` comment line, then a header row;
//! floats carry 16 significant digits and missing values print as `NA`.
//! table2 pivots to the three-error-column layout of its source table;
//! every other experiment uses the long row schema.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind, OutputFormat};
use crate::experiments::ResultRow;
use crate::CliError;

pub const ROWS_SCHEMA: &str = "fpquad.rows.v1";
pub const TABLE2_SCHEMA: &str = "fpquad.table2.v1";

/// 16 significant digits.
pub fn format_float(value: f64) -> String {
    format!("{value:.15e}")
}

fn format_opt_float(value: Option<f64>) -> String {
    value.map(format_float).unwrap_or_else(|| "NA".into())
}

fn format_opt_usize(value: Option<usize>) -> String {
    value.map(|v| v.to_string()).unwrap_or_else(|| "NA".into())
}

/// Default output file name for an experiment.
pub fn default_output_path(config: &ExperimentConfig) -> PathBuf {
    let ext = match config.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    PathBuf::from(format!("fpquad-{}.{ext}", config.experiment.name()))
}

/// Writes the rows in the configured format; returns the path written.
pub fn write_output(
    config: &ExperimentConfig,
    rows: &[ResultRow],
    path: &Path,
) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)?;
    match config.format {
        OutputFormat::Csv => {
            let text = if config.experiment == ExperimentKind::Table2 {
                table2_csv(rows)?
            } else {
                rows_csv(rows)
            };
            file.write_all(text.as_bytes())?;
        }
        OutputFormat::Json => {
            let text = rows_json(config, rows);
            file.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub fn rows_csv(rows: &[ResultRow]) -> String {
    let mut out = format!("# schema={ROWS_SCHEMA}\n");
    out.push_str("case,m,n_used,approx,exact,abs_error,time_s,note\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6e},{}\n",
            row.case,
            row.m,
            format_opt_usize(row.n_used),
            format_opt_float(row.approx),
            format_opt_float(row.exact),
            format_opt_float(row.abs_error),
            row.time_s,
            row.note.as_deref().unwrap_or("")
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    schema: &'static str,
    experiment: &'static str,
    rows: &'a [ResultRow],
}

pub fn rows_json(config: &ExperimentConfig, rows: &[ResultRow]) -> String {
    serde_json::to_string_pretty(&JsonDocument {
        schema: ROWS_SCHEMA,
        experiment: config.experiment.name(),
        rows,
    })
    .expect("rows serialise")
}

/// table2's wide layout: one row per Gauss order with the three error
/// columns side by side (the middle one is the far-node method this
/// harness does not implement).
fn table2_csv(rows: &[ResultRow]) -> Result<String, CliError> {
    let mut out = format!("# schema={TABLE2_SCHEMA}\n");
    out.push_str("m,baseline_error,baseline_time_s,farnode_error,ours_n,ours_error,ours_time_s\n");
    let mut chunks = rows.chunks_exact(3);
    for chunk in &mut chunks {
        let (baseline, farnode, ours) = (&chunk[0], &chunk[1], &chunk[2]);
        if baseline.case != "baseline" || farnode.case != "far-node" || ours.case != "ours" {
            return Err(CliError::Validation(
                "table2 rows out of order; expected baseline/far-node/ours triples".into(),
            ));
        }
        out.push_str(&format!(
            "{},{},{:.6e},{},{},{},{:.6e}\n",
            baseline.m,
            format_opt_float(baseline.abs_error),
            baseline.time_s,
            farnode.note.as_deref().unwrap_or("NOT-IMPLEMENTED"),
            format_opt_usize(ours.n_used),
            format_opt_float(ours.abs_error),
            ours.time_s,
        ));
    }
    if !chunks.remainder().is_empty() {
        return Err(CliError::Validation(
            "table2 rows are not baseline/far-node/ours triples".into(),
        ));
    }
    Ok(out)
}

/// Parses a long-schema CSV back into rows (used by the round-trip tests
/// and available for downstream tooling).
pub fn parse_rows_csv(text: &str) -> Result<Vec<ResultRow>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Validation(format!("csv parse: {e}")))?;
        let field = |idx: usize| -> &str { record.get(idx).unwrap_or("") };
        let opt_f64 = |idx: usize| -> Result<Option<f64>, CliError> {
            let raw = field(idx);
            if raw == "NA" || raw.is_empty() {
                Ok(None)
            } else {
                raw.parse::<f64>()
                    .map(Some)
                    .map_err(|e| CliError::Validation(format!("csv field {idx}: {e}")))
            }
        };
        let opt_usize = |idx: usize| -> Result<Option<usize>, CliError> {
            let raw = field(idx);
            if raw == "NA" || raw.is_empty() {
                Ok(None)
            } else {
                raw.parse::<usize>()
                    .map(Some)
                    .map_err(|e| CliError::Validation(format!("csv field {idx}: {e}")))
            }
        };
        rows.push(ResultRow {
            case: field(0).to_string(),
            m: field(1)
                .parse()
                .map_err(|e| CliError::Validation(format!("csv field 1: {e}")))?,
            n_used: opt_usize(2)?,
            approx: opt_f64(3)?,
            exact: opt_f64(4)?,
            abs_error: opt_f64(5)?,
            time_s: field(6)
                .parse()
                .map_err(|e| CliError::Validation(format!("csv field 6: {e}")))?,
            note: match field(7) {
                "" => None,
                other => Some(other.to_string()),
            },
        });
    }
    Ok(rows)
}
