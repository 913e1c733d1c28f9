//! Confusion matrices, classification metrics and threshold sweeps.
//!
//! Ratios are kept at full precision; rounding to two decimals happens only
//! when a report is displayed. Comparisons between candidate thresholds use
//! exact rational kappa so that ties are recognised without float noise.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        ConfusionMatrix { tp, tn, fp, fn_ }
    }

    /// Counts of `(prediction, truth)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut cm = ConfusionMatrix::default();
        for (pred, truth) in pairs {
            match (pred, truth) {
                (true, true) => cm.tp += 1,
                (false, false) => cm.tn += 1,
                (true, false) => cm.fp += 1,
                (false, true) => cm.fn_ += 1,
            }
        }
        cm
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// Cohen's kappa as an exact fraction. When both marginals put every
    /// item in the same class, chance agreement is 1 and kappa is taken as 0.
    pub fn kappa_exact(&self) -> Option<Ratio<i128>> {
        let n = i128::from(self.total());
        if n == 0 {
            return None;
        }
        let (tp, tn, fp, fn_) = (
            i128::from(self.tp),
            i128::from(self.tn),
            i128::from(self.fp),
            i128::from(self.fn_),
        );
        // kappa = (n * agree - chance) / (n^2 - chance), all scaled by n^2.
        let chance = (tp + fp) * (tp + fn_) + (tn + fn_) * (tn + fp);
        let denom = n * n - chance;
        if denom == 0 {
            return Some(Ratio::from_integer(0));
        }
        Some(Ratio::new(n * (tp + tn) - chance, denom))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("confusion matrix is empty")]
    Empty,
    #[error("degenerate confusion matrix: {0}")]
    Degenerate(MetricsReport),
}

/// Ratios in `[0, 1]`; precision and recall are `None` when undefined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub matrix: ConfusionMatrix,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: f64,
    pub kappa: f64,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl MetricsReport {
    /// Report for a non-empty matrix, with undefined ratios left as `None`.
    pub fn from_matrix(cm: ConfusionMatrix) -> Option<MetricsReport> {
        let kappa = cm.kappa_exact()?;
        Some(MetricsReport {
            matrix: cm,
            precision: ratio(cm.tp, cm.tp + cm.fp),
            recall: ratio(cm.tp, cm.tp + cm.fn_),
            accuracy: (cm.tp + cm.tn) as f64 / cm.total() as f64,
            kappa: to_f64(kappa),
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.precision.is_none() || self.recall.is_none()
    }
}

/// Percentage with two decimals, or `n/a`.
pub fn percent(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{:.2}", x * 100.0),
        None => "n/a".to_string(),
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(
            f,
            "tp {} tn {} fp {} fn {}: precision {} recall {} accuracy {} kappa {:.2}",
            m.tp,
            m.tn,
            m.fp,
            m.fn_,
            percent(self.precision),
            percent(self.recall),
            percent(Some(self.accuracy)),
            self.kappa
        )
    }
}

/// Metrics of `cm`. A matrix without predicted or without actual positives
/// is an error that still carries the partial report.
pub fn compute_metrics(cm: ConfusionMatrix) -> Result<MetricsReport, MetricsError> {
    let report = MetricsReport::from_matrix(cm).ok_or(MetricsError::Empty)?;
    if report.is_degenerate() {
        return Err(MetricsError::Degenerate(report));
    }
    Ok(report)
}

/// Thresholds serialize as numbers, with the infinite endpoints as the
/// strings `"-inf"` and `"inf"`.
pub mod threshold_serde {
    use super::*;

    pub fn serialize<S: Serializer>(t: &f64, s: S) -> Result<S::Ok, S::Error> {
        if t.is_finite() {
            s.serialize_f64(*t)
        } else if *t > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => Err(serde::de::Error::custom(format!("invalid threshold {s:?}"))),
            },
        }
    }
}

/// Threshold for display and CSV output.
pub fn format_threshold(t: f64) -> String {
    if t == f64::INFINITY {
        "inf".to_string()
    } else if t == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{t:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(with = "threshold_serde")]
    pub threshold: f64,
    pub report: MetricsReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// `None` when the truths are all of one class.
    #[serde(with = "option_threshold")]
    pub best_by_kappa: Option<f64>,
    #[serde(with = "threshold_serde")]
    pub best_by_accuracy: f64,
}

mod option_threshold {
    use super::*;

    pub fn serialize<S: Serializer>(t: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match t {
            Some(x) => threshold_serde::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "threshold_serde")] f64);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

impl SweepResult {
    pub fn point(&self, threshold: f64) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.threshold == threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("{scores} scores but {truths} truths")]
    LengthMismatch { scores: usize, truths: usize },
    #[error("no scores to sweep")]
    Empty,
    #[error("score {index} is not a finite number")]
    NonFinite { index: usize },
    #[error("all truths are {truth}; best-by-kappa threshold is undefined")]
    Degenerate { truth: bool, sweep: SweepResult },
}

/// Candidate thresholds: `-inf`, the midpoints between adjacent distinct
/// scores, and `+inf`. Any threshold between two candidates yields the same
/// predictions as the larger one.
pub fn candidate_thresholds(scores: &[f64]) -> Vec<f64> {
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut out = Vec::with_capacity(distinct.len() + 1);
    out.push(f64::NEG_INFINITY);
    for w in distinct.windows(2) {
        out.push(w[0] + (w[1] - w[0]) / 2.0);
    }
    out.push(f64::INFINITY);
    out
}

/// Confusion matrix of the rule `score >= threshold` against `truths`.
pub fn matrix_at(scores: &[f64], truths: &[bool], threshold: f64) -> ConfusionMatrix {
    ConfusionMatrix::from_pairs(scores.iter().zip(truths).map(|(&s, &t)| (s >= threshold, t)))
}

/// Metrics at every candidate threshold, with the best thresholds by kappa
/// and by accuracy. Ties go to the larger threshold.
pub fn threshold_sweep(scores: &[f64], truths: &[bool]) -> Result<SweepResult, SweepError> {
    if scores.len() != truths.len() {
        return Err(SweepError::LengthMismatch {
            scores: scores.len(),
            truths: truths.len(),
        });
    }
    if scores.is_empty() {
        return Err(SweepError::Empty);
    }
    if let Some(index) = scores.iter().position(|s| !s.is_finite()) {
        return Err(SweepError::NonFinite { index });
    }
    let mut points = Vec::new();
    let mut best_kappa: Option<(Ratio<i128>, f64)> = None;
    let mut best_acc: Option<(u64, f64)> = None;
    for threshold in candidate_thresholds(scores) {
        let cm = matrix_at(scores, truths, threshold);
        let kappa = cm.kappa_exact().expect("non-empty sweep");
        let agree = cm.tp + cm.tn;
        // Candidates ascend, so `>=` keeps the larger threshold on ties.
        if best_kappa.map_or(true, |(k, _)| kappa.cmp(&k) != Ordering::Less) {
            best_kappa = Some((kappa, threshold));
        }
        if best_acc.map_or(true, |(a, _)| agree >= a) {
            best_acc = Some((agree, threshold));
        }
        let report = MetricsReport::from_matrix(cm).expect("non-empty sweep");
        points.push(SweepPoint { threshold, report });
    }
    let mut sweep = SweepResult {
        points,
        best_by_kappa: best_kappa.map(|(_, t)| t),
        best_by_accuracy: best_acc.expect("at least two candidates").1,
    };
    let first = truths[0];
    if truths.iter().all(|&t| t == first) {
        sweep.best_by_kappa = None;
        return Err(SweepError::Degenerate { truth: first, sweep });
    }
    Ok(sweep)
}
