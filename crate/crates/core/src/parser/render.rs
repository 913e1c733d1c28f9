//! Canonical text for operator trees.
//!
//! Every non-atomic operand is parenthesized, so the output does not depend
//! on the precedence table and re-parses to the same tree.

use super::grammar;
use super::opt::{ANON_CTOR, APP, ASCRIPTION, PAIR};
use crate::tree::OperatorTree;

pub fn render(t: &OperatorTree) -> String {
    let mut out = String::new();
    write_expr(t, &mut out);
    out
}

fn write_expr(t: &OperatorTree, out: &mut String) {
    if t.is_leaf() {
        out.push_str(t.label());
        return;
    }
    let head = t.head();
    let kids = t.children();
    match (head, kids) {
        (_, [a, b]) if grammar::infix_by_head(head).is_some() => {
            write_operand(a, out);
            out.push(' ');
            out.push_str(head);
            out.push(' ');
            write_operand(b, out);
        }
        ("¬" | "-" | "↑", [x]) => {
            out.push_str(head);
            write_operand(x, out);
        }
        ("∀" | "∃", [x, body]) => {
            out.push_str(head);
            out.push(' ');
            out.push_str(x.label());
            out.push_str(", ");
            write_expr(body, out);
        }
        ("∀" | "∃", [x, ty, body]) => {
            out.push_str(head);
            out.push(' ');
            out.push_str(x.label());
            out.push_str(" : ");
            write_operand(ty, out);
            out.push_str(", ");
            write_expr(body, out);
        }
        ("∑" | "∏", [x, domain, body]) => {
            out.push_str(head);
            out.push(' ');
            out.push_str(x.label());
            out.push_str(" ∈ ");
            write_operand(domain, out);
            out.push_str(", ");
            write_expr(body, out);
        }
        ("λ", [x, body]) => {
            out.push_str("fun ");
            out.push_str(x.label());
            out.push_str(" => ");
            write_expr(body, out);
        }
        ("λ", [x, ty, body]) => {
            out.push_str("fun ");
            out.push_str(x.label());
            out.push_str(" : ");
            write_operand(ty, out);
            out.push_str(" => ");
            write_expr(body, out);
        }
        ("let", [x, value, body]) => {
            out.push_str("let ");
            out.push_str(x.label());
            out.push_str(" := ");
            write_operand(value, out);
            out.push_str("; ");
            write_expr(body, out);
        }
        (PAIR, [a, b]) => {
            out.push('(');
            write_expr(a, out);
            out.push_str(", ");
            write_expr(b, out);
            out.push(')');
        }
        (ASCRIPTION, [e, ty]) => {
            out.push('(');
            write_expr(e, out);
            out.push_str(" : ");
            write_expr(ty, out);
            out.push(')');
        }
        (ANON_CTOR, items) => {
            out.push('⟨');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(item, out);
            }
            out.push('⟩');
        }
        (field, [e]) if field.starts_with('.') => {
            let numeric = field[1..].chars().all(|c| c.is_ascii_digit());
            if e.is_leaf() && numeric {
                out.push_str(e.label());
            } else {
                out.push('(');
                write_expr(e, out);
                out.push(')');
            }
            out.push_str(field);
        }
        (APP, [f, args @ ..]) if !f.is_leaf() && !args.is_empty() => {
            write_operand(f, out);
            for a in args {
                out.push(' ');
                write_operand(a, out);
            }
        }
        (_, args) => {
            out.push_str(head);
            for a in args {
                out.push(' ');
                write_operand(a, out);
            }
        }
    }
}

fn write_operand(t: &OperatorTree, out: &mut String) {
    let self_delimited = matches!(t.head(), PAIR | ASCRIPTION | ANON_CTOR) && !t.is_leaf();
    if t.is_leaf() || self_delimited {
        write_expr(t, out);
    } else {
        out.push('(');
        write_expr(t, out);
        out.push(')');
    }
}
