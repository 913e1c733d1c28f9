//! Local simplifications applied before the search starts: literal
//! arithmetic, numeral casts, `let` inlining and projections of pairs.
//!
//! Arithmetic folding must stay sound whatever the numeric type is, so
//! subtraction, division and remainder only fold where natural-number and
//! field semantics agree, and results are always integers.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::parser::opt::PAIR;
use crate::scope::substitute;
use crate::tree::OperatorTree;

type Q = Ratio<i128>;

const MAX_EXPONENT: u32 = 64;
const MAX_PASSES: usize = 64;

/// Value of a numeral leaf such as `12` or `2.5`.
fn numeral(label: &str) -> Option<Q> {
    let (int, frac) = match label.split_once('.') {
        Some((i, f)) => (i, f),
        None => (label, ""),
    };
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac.bytes().all(|b| b.is_ascii_digit()) || (label.contains('.') && frac.is_empty()) {
        return None;
    }
    let digits: i128 = format!("{int}{frac}").parse().ok()?;
    let scale = 10i128.checked_pow(u32::try_from(frac.len()).ok()?)?;
    Some(Q::new(digits, scale))
}

/// Value of a literal operand: a numeral or the negation of one.
fn literal(t: &OperatorTree) -> Option<Q> {
    if t.is_leaf() {
        return numeral(t.label());
    }
    if t.head() == "-" && t.children().len() == 1 && t.children()[0].is_leaf() {
        return numeral(t.children()[0].label()).map(|v| -v);
    }
    None
}

fn is_negative_literal(t: &OperatorTree) -> bool {
    literal(t).is_some_and(|v| v.is_negative())
}

/// Tree for an integer value; `None` for non-integers.
fn integer_tree(v: Q) -> Option<OperatorTree> {
    if !v.is_integer() {
        return None;
    }
    let n = v.to_integer();
    let leaf = OperatorTree::leaf(n.unsigned_abs().to_string());
    Some(if n < 0 {
        OperatorTree::node("-", vec![leaf])
    } else {
        leaf
    })
}

/// Evaluates a binary operator applied to two literals.
pub(crate) fn const_fold(t: &OperatorTree) -> Option<OperatorTree> {
    if t.is_leaf() || t.children().len() != 2 {
        return None;
    }
    let (x, y) = (&t.children()[0], &t.children()[1]);
    let (a, b) = (literal(x)?, literal(y)?);
    let v = match t.head() {
        "+" => a.checked_add(&b)?,
        "*" => a.checked_mul(&b)?,
        "-" if a >= b || is_negative_literal(x) || is_negative_literal(y) => a.checked_sub(&b)?,
        "/" if !b.is_zero() => {
            let q = a.checked_div(&b)?;
            if !q.is_integer() {
                return None;
            }
            q
        }
        "%" if a.is_integer() && b.is_integer() && !a.is_negative() && b.is_positive() => {
            Q::from_integer(a.to_integer() % b.to_integer())
        }
        "^" if b.is_integer() && !b.is_negative() => {
            let e = b.to_integer().to_u32().filter(|&e| e <= MAX_EXPONENT)?;
            let mut acc = Q::one();
            for _ in 0..e {
                acc = acc.checked_mul(&a)?;
            }
            acc
        }
        _ => return None,
    };
    integer_tree(v)
}

/// `↑n` becomes `n` for a numeral `n`, and `↑↑x` becomes `↑x`.
pub(crate) fn cast_collapse(t: &OperatorTree) -> Option<OperatorTree> {
    if t.is_leaf() || t.head() != "↑" || t.children().len() != 1 {
        return None;
    }
    let inner = &t.children()[0];
    if inner.is_leaf() && numeral(inner.label()).is_some() {
        return Some(inner.clone());
    }
    if !inner.is_leaf() && inner.head() == "↑" && inner.children().len() == 1 {
        return Some(inner.clone());
    }
    None
}

/// `let x := v; body` becomes `body[x := v]` unless that would capture.
pub(crate) fn let_inline(t: &OperatorTree) -> Option<OperatorTree> {
    if t.is_leaf() || t.head() != "let" || t.children().len() != 3 {
        return None;
    }
    let [name, value, body] = t.children() else {
        return None;
    };
    if !name.is_leaf() {
        return None;
    }
    substitute(body, name.label(), value)
}

/// `(a, b).1` becomes `a` and `(a, b).2` becomes `b`.
pub(crate) fn proj_fold(t: &OperatorTree) -> Option<OperatorTree> {
    if t.is_leaf() || t.children().len() != 1 {
        return None;
    }
    let pair = &t.children()[0];
    if pair.is_leaf() || pair.head() != PAIR || pair.children().len() != 2 {
        return None;
    }
    match t.head() {
        ".1" => Some(pair.children()[0].clone()),
        ".2" => Some(pair.children()[1].clone()),
        _ => None,
    }
}

fn simplify_node(t: &OperatorTree) -> Option<OperatorTree> {
    let_inline(t)
        .or_else(|| proj_fold(t))
        .or_else(|| const_fold(t))
        .or_else(|| cast_collapse(t))
}

/// One bottom-up pass; returns whether anything changed.
fn pass(t: &OperatorTree) -> (OperatorTree, bool) {
    let mut changed = false;
    let t = if t.is_leaf() {
        t.clone()
    } else {
        let kids = t
            .children()
            .iter()
            .map(|c| {
                let (c, ch) = pass(c);
                changed |= ch;
                c
            })
            .collect();
        OperatorTree::with_label(t.label(), kids)
    };
    match simplify_node(&t) {
        Some(s) => (s, true),
        None => (t, changed),
    }
}

/// Applies the simplifications everywhere until nothing changes.
pub fn normalize(t: &OperatorTree) -> OperatorTree {
    let mut cur = t.clone();
    for _ in 0..MAX_PASSES {
        let (next, changed) = pass(&cur);
        if !changed {
            break;
        }
        cur = next;
    }
    cur
}
