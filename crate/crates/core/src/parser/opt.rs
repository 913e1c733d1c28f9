//! Conversion of parsed statements into operator trees.
//!
//! Parentheses disappear, operators and function heads become `<SLOT>`
//! nodes, and every bound name gets its own binder node. A `∀` whose name is
//! not used in its scope is shown as an implication, following the usual
//! display of non-dependent function types; statement hypotheses such as
//! `(h : y ≠ 0)` therefore become `y ≠ 0 → ...`.

use super::ast::{BinderExpr, BinderGroup, Expr, StatementAst, ANONYMOUS};
use crate::scope::occurs_free;
use crate::tree::OperatorTree;

/// Head of the node used for applications whose function is not a name.
pub const APP: &str = "app";
/// Head used for pairs `(a, b)`.
pub const PAIR: &str = "Prod.mk";
/// Head used for anonymous constructors `⟨a, b⟩`.
pub const ANON_CTOR: &str = "⟨⟩";
/// Head used for type ascriptions `(e : T)`.
pub const ASCRIPTION: &str = ":";

/// Operator tree of the statement's type: binders folded around the body.
/// The theorem name is dropped.
pub fn build_opt(ast: &StatementAst) -> OperatorTree {
    fold_binders("∀", &ast.binders, expr_opt(&ast.body))
}

pub fn expr_opt(e: &Expr) -> OperatorTree {
    match e {
        Expr::Ident(s) | Expr::Num(s) => OperatorTree::leaf(s.as_str()),
        Expr::Paren(inner) => expr_opt(inner),
        Expr::Tuple(items) => {
            let mut iter = items.iter().rev();
            let last = expr_opt(iter.next().expect("tuples have components"));
            iter.fold(last, |acc, item| OperatorTree::node(PAIR, vec![expr_opt(item), acc]))
        }
        Expr::AnonCtor(items) => OperatorTree::node(ANON_CTOR, items.iter().map(expr_opt).collect()),
        Expr::Ascription(e, ty) => OperatorTree::node(ASCRIPTION, vec![expr_opt(e), expr_opt(ty)]),
        Expr::Proj(e, field) => OperatorTree::node(&format!(".{field}"), vec![expr_opt(e)]),
        Expr::App(head, args) => {
            let mut args: Vec<OperatorTree> = args.iter().map(expr_opt).collect();
            let mut head = head.unparen();
            // (f x) y is f x y
            while let Expr::App(inner, inner_args) = head {
                let mut all: Vec<OperatorTree> = inner_args.iter().map(expr_opt).collect();
                all.append(&mut args);
                args = all;
                head = inner.unparen();
            }
            match head {
                Expr::Ident(name) => OperatorTree::node(name, args),
                other => {
                    args.insert(0, expr_opt(other));
                    OperatorTree::node(APP, args)
                }
            }
        }
        Expr::Unary(op, x) => OperatorTree::node(op, vec![expr_opt(x)]),
        Expr::Binary(op, a, b) => OperatorTree::node(op, vec![expr_opt(a), expr_opt(b)]),
        Expr::Binder(b) => binder_opt(b),
        Expr::Let {
            name, value, body, ..
        } => OperatorTree::node(
            "let",
            vec![OperatorTree::leaf(name.as_str()), expr_opt(value), expr_opt(body)],
        ),
    }
}

fn binder_opt(b: &BinderExpr) -> OperatorTree {
    let mut body = expr_opt(&b.body);
    match (&b.pred, b.op) {
        (Some((_, domain)), "∑" | "∏") => {
            let domain = expr_opt(domain);
            for g in b.groups.iter().rev() {
                for name in g.names.iter().rev() {
                    body = OperatorTree::node(
                        b.op,
                        vec![OperatorTree::leaf(name.as_str()), domain.clone(), body],
                    );
                }
            }
            body
        }
        (Some((pred, rhs)), op) => {
            let rhs = expr_opt(rhs);
            let connective = if op == "∃" { "∧" } else { "→" };
            for g in b.groups.iter().rev() {
                for name in g.names.iter().rev() {
                    let guard =
                        OperatorTree::node(pred, vec![OperatorTree::leaf(name.as_str()), rhs.clone()]);
                    body = OperatorTree::node(connective, vec![guard, body]);
                    body = OperatorTree::node(op, vec![OperatorTree::leaf(name.as_str()), body]);
                }
            }
            body
        }
        (None, op) => fold_binders(op, &b.groups, body),
    }
}

fn fold_binders(op: &str, groups: &[BinderGroup], mut body: OperatorTree) -> OperatorTree {
    for g in groups.iter().rev() {
        let ty = g.ty.as_ref().map(expr_opt);
        for name in g.names.iter().rev() {
            body = match &ty {
                Some(ty) if op == "∀" && (name == ANONYMOUS || !occurs_free(&body, name)) => {
                    OperatorTree::node("→", vec![ty.clone(), body])
                }
                Some(ty) => OperatorTree::node(
                    op,
                    vec![OperatorTree::leaf(name.as_str()), ty.clone(), body],
                ),
                None => OperatorTree::node(op, vec![OperatorTree::leaf(name.as_str()), body]),
            };
        }
    }
    body
}
