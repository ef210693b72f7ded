use std::io::{self, Write};

use fvp_core::{Error, SolutionReport};
use serde::{Deserialize, Serialize};

/// One evaluation point of a solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub x: f64,
    pub y_method: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_oracle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_deviation: Option<f64>,
    pub status: String,
}

pub fn status_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::CenterMismatch { .. } => "center-mismatch",
        Error::SingularDenominator => "singular-denominator",
        Error::DepthExhausted { .. } => "depth-exhausted",
        Error::PoleAtCenter { .. } => "pole-at-center",
        Error::RecursionDepth { .. } => "recursion-depth",
        Error::StageSingular { .. } => "stage-singular",
        Error::TailNotConverged { .. } => "tail-not-converged",
        Error::MissingDerivative { .. } => "missing-derivative",
        Error::Quadrature { .. } => "quadrature",
        Error::OracleFailure(_) => "oracle-failure",
        Error::OracleSingular => "oracle-singular",
    }
}

pub fn records(report: &SolutionReport) -> Vec<OutputRecord> {
    report
        .eval_points
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let outcome = &report.outcomes[i];
            OutputRecord {
                x,
                y_method: outcome.as_ref().ok().map(|s| s.value),
                y_oracle: report.oracle_values.as_ref().map(|v| v[i]),
                abs_deviation: match (outcome, &report.oracle_deviation) {
                    (Ok(_), Some(d)) => Some(d[i]),
                    _ => None,
                },
                status: outcome
                    .as_ref()
                    .map_or_else(|e| status_code(e).to_string(), |_| "ok".to_string()),
            }
        })
        .collect()
}

/// 17 significant digits; empty for a missing value.
pub fn fmt_float(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.16e}"),
        None => String::new(),
    }
}

pub fn write_csv(out: &mut dyn Write, recs: &[OutputRecord], with_oracle: bool) -> io::Result<()> {
    if with_oracle {
        writeln!(out, "x,y_method,y_oracle,abs_deviation,status")?;
    } else {
        writeln!(out, "x,y_method,status")?;
    }
    for r in recs {
        if with_oracle {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_float(Some(r.x)),
                fmt_float(r.y_method),
                fmt_float(r.y_oracle),
                fmt_float(r.abs_deviation),
                r.status
            )?;
        } else {
            writeln!(
                out,
                "{},{},{}",
                fmt_float(Some(r.x)),
                fmt_float(r.y_method),
                r.status
            )?;
        }
    }
    Ok(())
}

pub fn write_json(out: &mut dyn Write, recs: &[OutputRecord]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, recs)?;
    writeln!(out)
}
