//! Scoring benchmark records with a similarity metric.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::BenchmarkRecord;
use crate::parser::{statement_opt, token_tree};
use crate::ted::ted_similarity;
use crate::transform::{transted_source, RuleLibrary, SearchBudget};

/// A statement-pair similarity.
#[derive(Clone, Copy, Debug)]
pub enum Scorer<'a> {
    /// TED similarity of the two operator trees.
    Ted,
    /// TransTED similarity under a node-count budget.
    TransTed {
        budget: SearchBudget,
        rules: &'a RuleLibrary,
    },
    /// Scores computed elsewhere, keyed by record id.
    External(&'a BTreeMap<String, f64>),
}

/// Score of one record. `score` is `None` exactly when `error` is set;
/// `degraded` marks pairs that were compared as token sequences because a
/// statement failed to parse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub id: String,
    pub score: Option<f64>,
    pub degraded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proved: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("jobs must be positive")]
    Jobs,
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

fn failed(id: &str, error: String) -> ScoreEntry {
    ScoreEntry {
        id: id.to_string(),
        score: None,
        degraded: false,
        proved: None,
        error: Some(error),
    }
}

pub fn score_record(record: &BenchmarkRecord, scorer: &Scorer) -> ScoreEntry {
    let id = record.id.as_str();
    let (label, pred) = (record.label_stmt.as_str(), record.pred_stmt.as_str());
    match scorer {
        Scorer::Ted => {
            let (score, degraded) = match (statement_opt(label), statement_opt(pred)) {
                (Ok(t1), Ok(t2)) => (ted_similarity(&t1, &t2), false),
                _ => (ted_similarity(&token_tree(label), &token_tree(pred)), true),
            };
            ScoreEntry {
                id: id.to_string(),
                score: Some(score),
                degraded,
                proved: None,
                error: None,
            }
        }
        Scorer::TransTed { budget, rules } => match transted_source(label, pred, budget, rules) {
            Ok(r) => ScoreEntry {
                id: id.to_string(),
                score: Some(r.similarity),
                degraded: r.degraded,
                proved: Some(r.proved_equal),
                error: None,
            },
            Err(e) => failed(id, e.to_string()),
        },
        Scorer::External(map) => match map.get(id) {
            Some(&s) => ScoreEntry {
                id: id.to_string(),
                score: Some(s),
                degraded: false,
                proved: None,
                error: None,
            },
            None => failed(id, format!("no external score for id {id:?}")),
        },
    }
}

/// One entry per record, in input order, computed on `jobs` threads. A
/// failing record yields an error entry and the batch continues.
pub fn score_dataset(
    records: &[BenchmarkRecord],
    scorer: &Scorer,
    jobs: usize,
) -> Result<Vec<ScoreEntry>, ScoreError> {
    if jobs == 0 {
        return Err(ScoreError::Jobs);
    }
    if jobs == 1 {
        return Ok(records.iter().map(|r| score_record(r, scorer)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ScoreError::Pool(e.to_string()))?;
    Ok(pool.install(|| records.par_iter().map(|r| score_record(r, scorer)).collect()))
}
