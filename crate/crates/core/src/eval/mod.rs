//! Benchmark evaluation: annotated statement pairs are scored by a
//! similarity metric and the scores are compared with binarized human
//! judgements over all decision thresholds.

pub mod metrics;
pub mod report;
pub mod score;

pub use metrics::{
    candidate_thresholds, compute_metrics, format_threshold, matrix_at, percent, threshold_sweep,
    ConfusionMatrix, MetricsError, MetricsReport, SweepError, SweepPoint, SweepResult,
};
pub use report::{emit_report, load_report, Report, ReportFormat};
pub use score::{score_dataset, ScoreEntry, ScoreError, Scorer};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Five-way annotation: provability crossed with likeness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnotationLabel {
    /// Mutually provable and like.
    A,
    /// Mutually provable and unlike.
    B,
    /// Mutually unprovable and like.
    C,
    /// Mutually unprovable and like, with a minor defect.
    D,
    /// Mutually unprovable and unlike.
    E,
}

impl AnnotationLabel {
    pub const ALL: [AnnotationLabel; 5] = [
        AnnotationLabel::A,
        AnnotationLabel::B,
        AnnotationLabel::C,
        AnnotationLabel::D,
        AnnotationLabel::E,
    ];
}

/// How annotations map to a binary ground truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Only mutually provable pairs are correct.
    Strict,
    /// Anything short of unprovable and unlike is useful.
    HumanInLoop,
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Policy::Strict),
            "human_in_loop" => Ok(Policy::HumanInLoop),
            _ => Err(format!("unknown policy {s:?} (expected strict or human_in_loop)")),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Strict => "strict",
            Policy::HumanInLoop => "human_in_loop",
        })
    }
}

pub fn binarize(label: AnnotationLabel, policy: Policy) -> bool {
    use AnnotationLabel::*;
    match policy {
        Policy::Strict => matches!(label, A | B),
        Policy::HumanInLoop => !matches!(label, E),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub id: String,
    pub source: String,
    pub nl: String,
    pub label_stmt: String,
    pub pred_stmt: String,
    pub annotation: AnnotationLabel,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: duplicate id {id:?} (first seen on line {first})")]
    DuplicateId { id: String, line: usize, first: usize },
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses JSON Lines, skipping blank lines. `check` validates each value.
fn parse_lines<T: for<'de> Deserialize<'de>>(
    text: &str,
    id: impl Fn(&T) -> &str,
    check: impl Fn(&T) -> Result<(), String>,
) -> Result<Vec<T>, LoadError> {
    let mut out = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: T = serde_json::from_str(raw).map_err(|e| LoadError::Format {
            line,
            message: e.to_string(),
        })?;
        check(&value).map_err(|message| LoadError::Format { line, message })?;
        let key = id(&value).to_string();
        if let Some(&first) = seen.get(&key) {
            return Err(LoadError::DuplicateId { id: key, line, first });
        }
        seen.insert(key, line);
        out.push(value);
    }
    Ok(out)
}

/// Records of a benchmark in JSON Lines form.
pub fn parse_benchmark(text: &str) -> Result<Vec<BenchmarkRecord>, LoadError> {
    parse_lines(
        text,
        |r: &BenchmarkRecord| &r.id,
        |r| {
            if r.label_stmt.trim().is_empty() {
                Err("label_stmt is empty".to_string())
            } else if r.pred_stmt.trim().is_empty() {
                Err("pred_stmt is empty".to_string())
            } else {
                Ok(())
            }
        },
    )
}

pub fn load_benchmark(path: &Path) -> Result<Vec<BenchmarkRecord>, LoadError> {
    parse_benchmark(&read(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExternalScore {
    id: String,
    score: f64,
}

/// Precomputed scores, one `{"id", "score"}` object per line.
pub fn parse_external_scores(text: &str) -> Result<BTreeMap<String, f64>, LoadError> {
    let rows = parse_lines(
        text,
        |s: &ExternalScore| &s.id,
        |s| {
            if s.score.is_finite() {
                Ok(())
            } else {
                Err("score is not finite".to_string())
            }
        },
    )?;
    Ok(rows.into_iter().map(|s| (s.id, s.score)).collect())
}

pub fn load_external_scores(path: &Path) -> Result<BTreeMap<String, f64>, LoadError> {
    parse_external_scores(&read(path)?)
}
