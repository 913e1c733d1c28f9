//! Bound-variable handling on operator trees.
//!
//! Binder nodes (`∀ ∃ λ ∑ ∏ let`) keep the bound name as their first child
//! and the scoped body as their last child; anything in between (a type, a
//! summation domain, a let value) lies outside the scope.

use crate::tree::OperatorTree;

pub const BINDER_HEADS: [&str; 6] = ["∀", "∃", "λ", "∑", "∏", "let"];

pub fn is_binder(t: &OperatorTree) -> bool {
    !t.is_leaf()
        && BINDER_HEADS.contains(&t.head())
        && t.children().len() >= 2
        && t.children()[0].is_leaf()
}

/// Bound name of a binder node.
pub fn bound_name(t: &OperatorTree) -> Option<&str> {
    is_binder(t).then(|| t.children()[0].label())
}

/// True if `name` appears as a free leaf in `t`.
pub fn occurs_free(t: &OperatorTree, name: &str) -> bool {
    if t.is_leaf() {
        return t.label() == name;
    }
    if let Some(bound) = bound_name(t) {
        let kids = t.children();
        let last = kids.len() - 1;
        if kids[1..last].iter().any(|c| occurs_free(c, name)) {
            return true;
        }
        return bound != name && occurs_free(&kids[last], name);
    }
    t.children().iter().any(|c| occurs_free(c, name))
}

/// True if `name` appears anywhere in `t`, bound or free.
pub fn occurs(t: &OperatorTree, name: &str) -> bool {
    if t.is_leaf() {
        t.label() == name
    } else {
        t.children().iter().any(|c| occurs(c, name))
    }
}

/// Replaces free occurrences of `name` by `value`. Returns `None` when a
/// binder inside `t` would capture a free variable of `value`.
pub fn substitute(t: &OperatorTree, name: &str, value: &OperatorTree) -> Option<OperatorTree> {
    if t.is_leaf() {
        return Some(if t.label() == name {
            value.clone()
        } else {
            t.clone()
        });
    }
    if !occurs_free(t, name) {
        return Some(t.clone());
    }
    let kids = t.children();
    let mut out = Vec::with_capacity(kids.len());
    if let Some(bound) = bound_name(t) {
        let last = kids.len() - 1;
        out.push(kids[0].clone());
        for c in &kids[1..last] {
            out.push(substitute(c, name, value)?);
        }
        if bound == name {
            out.push(kids[last].clone());
        } else {
            if occurs_free(&kids[last], name) && occurs_free(value, bound) {
                return None;
            }
            out.push(substitute(&kids[last], name, value)?);
        }
    } else {
        for c in kids {
            out.push(substitute(c, name, value)?);
        }
    }
    Some(OperatorTree::with_label(t.label(), out))
}

/// Renames free occurrences of `from` to `to`. The caller must pick a `to`
/// that does not occur in `t`, which rules out capture.
pub fn rename_free(t: &OperatorTree, from: &str, to: &str) -> OperatorTree {
    substitute(t, from, &OperatorTree::leaf(to)).expect("fresh names cannot be captured")
}

/// First of `base`, `base'`, `base''`, ... for which `taken` is false.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}
