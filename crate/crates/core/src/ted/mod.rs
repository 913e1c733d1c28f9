//! Tree edit distance between operator trees and the normalized TED
//! similarity.
//!
//! Labels are compared by exact string equality, `<SLOT>` suffix included.
//! Distances are exact rationals; similarity becomes a float only when it
//! is reported.

pub mod script;
pub mod zhang_shasha;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use script::{apply_script, script_from_mapping, EditOp, EditScript, ScriptError};
use zhang_shasha::{Flat, Weights, Workspace};

use crate::tree::OperatorTree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostError {
    #[error("delete cost {delete} differs from insert cost {insert}")]
    Asymmetric {
        delete: Rational64,
        insert: Rational64,
    },
    #[error("negative cost {0}")]
    Negative(Rational64),
}

/// Costs of the three edit operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EditCosts {
    delete: Rational64,
    insert: Rational64,
    relabel: Rational64,
}

impl EditCosts {
    pub fn new(
        delete: Rational64,
        insert: Rational64,
        relabel: Rational64,
    ) -> Result<Self, CostError> {
        for c in [delete, insert, relabel] {
            if c < Rational64::zero() {
                return Err(CostError::Negative(c));
            }
        }
        if delete != insert {
            return Err(CostError::Asymmetric { delete, insert });
        }
        Ok(EditCosts {
            delete,
            insert,
            relabel,
        })
    }

    pub fn unit() -> Self {
        let one = Rational64::from_integer(1);
        EditCosts {
            delete: one,
            insert: one,
            relabel: one,
        }
    }

    pub fn delete(&self) -> Rational64 {
        self.delete
    }

    pub fn insert(&self) -> Rational64 {
        self.insert
    }

    pub fn relabel(&self) -> Rational64 {
        self.relabel
    }

    fn is_unit(&self) -> bool {
        *self == EditCosts::unit()
    }

    /// Summed cost of a script.
    pub fn script_cost(&self, script: &[EditOp]) -> Rational64 {
        script
            .iter()
            .map(|op| match op {
                EditOp::Delete { .. } => self.delete,
                EditOp::Insert { .. } => self.insert,
                EditOp::Relabel { .. } => self.relabel,
            })
            .sum()
    }
}

impl Default for EditCosts {
    fn default() -> Self {
        EditCosts::unit()
    }
}

/// Number of nodes, `|T|`.
pub fn tree_size(t: &OperatorTree) -> usize {
    t.size()
}

/// Exact edit distance and an optimal script turning `t1` into `t2`.
pub fn ted(t1: &OperatorTree, t2: &OperatorTree, costs: &EditCosts) -> (Rational64, EditScript) {
    let a = Flat::new(t1);
    let b = Flat::new(t2);
    let w = Weights {
        delete: costs.delete,
        insert: costs.insert,
        relabel: costs.relabel,
    };
    let (d, mapping) = zhang_shasha::distance_with_mapping(&a, &b, w);
    let mut pre: Vec<(usize, usize)> = mapping
        .into_iter()
        .map(|(i, j)| (a.preorder[i], b.preorder[j]))
        .collect();
    pre.sort_unstable();
    (d, script_from_mapping(t1, t2, &pre))
}

/// Unit-cost edit distance without a script.
pub fn ted_unit(t1: &OperatorTree, t2: &OperatorTree) -> u32 {
    TedContext::new().distance(t1, t2)
}

/// Edit distance under arbitrary costs, without a script.
pub fn ted_distance(t1: &OperatorTree, t2: &OperatorTree, costs: &EditCosts) -> Rational64 {
    if costs.is_unit() {
        return Rational64::from_integer(i64::from(ted_unit(t1, t2)));
    }
    let w = Weights {
        delete: costs.delete,
        insert: costs.insert,
        relabel: costs.relabel,
    };
    zhang_shasha::distance(&Flat::new(t1), &Flat::new(t2), w, &mut Workspace::new())
}

/// Reusable buffers for many unit-cost distance computations.
#[derive(Default)]
pub struct TedContext {
    ws: Workspace<u32>,
}

impl TedContext {
    pub fn new() -> Self {
        TedContext {
            ws: Workspace::new(),
        }
    }

    pub fn distance(&mut self, t1: &OperatorTree, t2: &OperatorTree) -> u32 {
        let w = Weights {
            delete: 1,
            insert: 1,
            relabel: 1,
        };
        zhang_shasha::distance(&Flat::new(t1), &Flat::new(t2), w, &mut self.ws)
    }
}

/// `1 - d / max(|t1|, |t2|)` for a given distance. Not clamped: the
/// distance may exceed the larger size, giving a negative value.
pub fn similarity_from_distance(distance: Rational64, t1: &OperatorTree, t2: &OperatorTree) -> f64 {
    let max = t1.size().max(t2.size()) as i64;
    let ratio = distance / Rational64::from_integer(max);
    1.0 - ratio.to_f64().expect("finite ratio")
}

/// Unit-cost TED similarity.
pub fn ted_similarity(t1: &OperatorTree, t2: &OperatorTree) -> f64 {
    similarity_from_distance(Rational64::from_integer(i64::from(ted_unit(t1, t2))), t1, t2)
}
