//! Report documents in JSON and CSV.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::metrics::{format_threshold, threshold_serde, MetricsReport, SweepPoint, SweepResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    /// Metrics at one fixed threshold.
    Metrics {
        #[serde(with = "threshold_serde")]
        threshold: f64,
        metrics: MetricsReport,
    },
    /// Metrics at every candidate threshold.
    Sweep { sweep: SweepResult },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(format!("unknown format {s:?} (expected json or csv)")),
        }
    }
}

pub const CSV_HEADER: &str = "threshold,tp,tn,fp,fn,precision,recall,accuracy,kappa";

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:?}"))
}

fn csv_row(out: &mut String, threshold: f64, r: &MetricsReport) {
    let m = &r.matrix;
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        format_threshold(threshold),
        m.tp,
        m.tn,
        m.fp,
        m.fn_,
        cell(r.precision),
        cell(r.recall),
        cell(Some(r.accuracy)),
        cell(Some(r.kappa)),
    );
}

/// Deterministic rendering of `report`. Ratios are written at full
/// precision in `[0, 1]`; undefined ones as `n/a`.
pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            match report {
                Report::Metrics { threshold, metrics } => csv_row(&mut out, *threshold, metrics),
                Report::Sweep { sweep } => {
                    for SweepPoint { threshold, report } in &sweep.points {
                        csv_row(&mut out, *threshold, report);
                    }
                }
            }
            out
        }
    }
}

/// Inverse of the JSON form of [`emit_report`].
pub fn load_report(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}
