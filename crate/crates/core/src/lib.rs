//! Similarity of formal theorem statements.
//!
//! Statements are parsed into operator trees ([`tree::OperatorTree`]) and
//! compared by tree edit distance ([`ted`]) or by the transformation-aware
//! TransTED search ([`transform`]). [`eval`] scores a metric against an
//! annotated benchmark and [`oracle`] computes maximum pseudometrics on
//! finite instances.

pub mod eval;
pub mod oracle;
pub mod parser;
pub mod ted;
pub mod scope;
pub mod transform;
pub mod tree;

pub use tree::{NodePath, OperatorTree, TreeError, SLOT};
