//! Statement parsing: tokens, a Pratt parser over a fixed Lean-like grammar,
//! operator-tree construction and canonical rendering.

pub mod ast;
pub mod grammar;
pub mod lexer;
pub mod opt;
pub mod parse;
pub mod render;

pub use ast::{BinderGroup, BinderKind, Expr, StatementAst};
pub use lexer::{tokenize, LexError, Span, Token, TokenKind};
pub use opt::{build_opt, expr_opt};
pub use parse::{parse_expr, parse_statement, ParseError, SyntaxError};
pub use render::render;

use crate::tree::OperatorTree;

/// Head of the flat tree used when a statement cannot be parsed.
pub const TOKENS: &str = "tokens";

/// Parses `source` and builds its operator tree.
pub fn statement_opt(source: &str) -> Result<OperatorTree, SyntaxError> {
    parse_statement(source).map(|ast| build_opt(&ast))
}

/// Best-effort tree for unparseable input: one leaf per token (or per
/// whitespace-separated word when lexing fails) under a single root.
pub fn token_tree(source: &str) -> OperatorTree {
    let words: Vec<String> = match tokenize(source) {
        Ok(tokens) => tokens.into_iter().map(|t| t.text).collect(),
        Err(_) => source.split_whitespace().map(str::to_string).collect(),
    };
    let leaves: Vec<OperatorTree> = words
        .into_iter()
        .map(|w| match w.strip_suffix(crate::tree::SLOT) {
            Some("") => OperatorTree::leaf("_"),
            Some(stripped) => OperatorTree::leaf(stripped),
            None => OperatorTree::leaf(w),
        })
        .collect();
    if leaves.is_empty() {
        OperatorTree::leaf(TOKENS)
    } else {
        OperatorTree::node(TOKENS, leaves)
    }
}
