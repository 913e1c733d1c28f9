//! TransTED: the statement pair is merged into one equality goal, which a
//! best-first search rewrites with semantics-preserving rules. The answer
//! is the smallest TED between the two sides over all expanded goals, and
//! exactly 0 once the sides coincide.
//!
//! Rules stand in for proof tactics and are applied in the weaker to
//! stronger direction: a rewritten goal implies the original one.

pub mod builtins;
pub mod normalize;
pub mod pattern;
pub mod rules;
pub mod search;

pub use builtins::Builtin;
pub use normalize::normalize;
pub use pattern::{Guard, Pattern, PatternError};
pub use rules::{apply_rule, Goal, RewriteRule, RuleError, RuleKind, RuleLibrary, RuleSpec, Step};
pub use search::{
    enumerate_children, label_lower_bound, transted_trees, BudgetError, ExpandError, SearchBudget, SearchNode,
    TransTedResult,
};

use crate::parser::{build_opt, statement_opt, token_tree, StatementAst};
use crate::ted::{ted_unit, similarity_from_distance};
use crate::tree::OperatorTree;
use num_rational::Rational64;

/// Equality whose sides are the operator trees of the two statements.
pub fn merge_to_equality(label: &StatementAst, prediction: &StatementAst) -> OperatorTree {
    OperatorTree::node(builtins::EQ, vec![build_opt(label), build_opt(prediction)])
}

/// TransTED between two parsed statements.
pub fn transted(
    label: &StatementAst,
    prediction: &StatementAst,
    budget: &SearchBudget,
    rules: &RuleLibrary,
) -> Result<TransTedResult, BudgetError> {
    transted_trees(&build_opt(label), &build_opt(prediction), budget, rules)
}

/// TransTED between two statement sources. When either fails to parse, no
/// search runs: the result is plain TED between token-level trees, flagged
/// as degraded.
pub fn transted_source(
    label: &str,
    prediction: &str,
    budget: &SearchBudget,
    rules: &RuleLibrary,
) -> Result<TransTedResult, BudgetError> {
    budget.validate()?;
    match (statement_opt(label), statement_opt(prediction)) {
        (Ok(t1), Ok(t2)) => transted_trees(&t1, &t2, budget, rules),
        _ => {
            let (t1, t2) = (token_tree(label), token_tree(prediction));
            let d = ted_unit(&t1, &t2);
            Ok(TransTedResult {
                distance: d,
                similarity: similarity_from_distance(Rational64::from(i64::from(d)), &t1, &t2),
                proved_equal: false,
                trace: Vec::new(),
                expanded: 0,
                initial_distance: d,
                degraded: true,
                timed_out: false,
            })
        }
    }
}

/// `1 - distance / max(|t1|, |t2|)` for the sides of the initial equality.
pub fn transted_similarity(result: &TransTedResult, t1: &OperatorTree, t2: &OperatorTree) -> f64 {
    similarity_from_distance(Rational64::from(i64::from(result.distance)), t1, t2)
}
