//! Procedural rules that a single tree pattern cannot express.
//!
//! Goal-level rules (`congr-arg`, `forall-congr`, ...) act on the equality
//! at the root and replace it by one residual equality. Local rules act on
//! any node inside either side.

use crate::scope::{fresh_name, is_binder, occurs, occurs_free, rename_free, BINDER_HEADS};
use crate::tree::OperatorTree;

use super::normalize::{cast_collapse, const_fold, let_inline, proj_fold};

pub const EQ: &str = "=";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `a = b` becomes `b = a`.
    EqSymm,
    /// `f x = f y` becomes `x = y` when exactly one argument differs.
    CongrArg,
    /// `f x = g x` becomes `f = g`.
    CongrFun,
    /// `(∀ x : A, P) = (∀ y : A, Q)` becomes `P = Q[y := x]`; also for
    /// `∃`, `∑` and `∏` with equal domains.
    ForallCongr,
    /// `(fun x => f x) = (fun y => g y)` becomes `f x = g x`.
    Ext,
    /// `(a → c) = (b → d)` becomes `a = b` when `c` and `d` agree, or
    /// `c = d` when `a` and `b` agree.
    ImpliesCongr,
    /// Reorders independent binders and hypotheses.
    ForallSwap,
    ConstFold,
    CastCollapse,
    LetInline,
    ProjFold,
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::EqSymm,
        Builtin::CongrArg,
        Builtin::CongrFun,
        Builtin::ForallCongr,
        Builtin::Ext,
        Builtin::ImpliesCongr,
        Builtin::ForallSwap,
        Builtin::ConstFold,
        Builtin::CastCollapse,
        Builtin::LetInline,
        Builtin::ProjFold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::EqSymm => "eq-symm",
            Builtin::CongrArg => "congr-arg",
            Builtin::CongrFun => "congr-fun",
            Builtin::ForallCongr => "forall-congr",
            Builtin::Ext => "ext",
            Builtin::ImpliesCongr => "implies-congr",
            Builtin::ForallSwap => "forall-swap",
            Builtin::ConstFold => "const-fold",
            Builtin::CastCollapse => "cast-collapse",
            Builtin::LetInline => "let-inline",
            Builtin::ProjFold => "proj-fold",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Goal-level rules only apply at the root equality.
    pub fn is_goal_level(self) -> bool {
        matches!(
            self,
            Builtin::EqSymm
                | Builtin::CongrArg
                | Builtin::CongrFun
                | Builtin::ForallCongr
                | Builtin::Ext
                | Builtin::ImpliesCongr
        )
    }

    /// New sides `(l, r)` for a goal `l = r`.
    pub fn apply_goal(self, l: &OperatorTree, r: &OperatorTree) -> Option<(OperatorTree, OperatorTree)> {
        match self {
            Builtin::EqSymm => Some((r.clone(), l.clone())),
            Builtin::CongrArg => congr_arg(l, r),
            Builtin::CongrFun => congr_fun(l, r),
            Builtin::ForallCongr => binder_congr(l, r, &["∀", "∃", "∑", "∏"]),
            Builtin::Ext => binder_congr(l, r, &["λ"]),
            Builtin::ImpliesCongr => implies_congr(l, r),
            _ => None,
        }
    }

    /// Results of rewriting the node `t` in place.
    pub fn apply_local(self, t: &OperatorTree) -> Vec<OperatorTree> {
        match self {
            Builtin::ForallSwap => forall_swap(t),
            Builtin::ConstFold => const_fold(t).into_iter().collect(),
            Builtin::CastCollapse => cast_collapse(t).into_iter().collect(),
            Builtin::LetInline => let_inline(t).into_iter().collect(),
            Builtin::ProjFold => proj_fold(t).into_iter().collect(),
            _ => Vec::new(),
        }
    }
}

fn congr_arg(l: &OperatorTree, r: &OperatorTree) -> Option<(OperatorTree, OperatorTree)> {
    if l.is_leaf() || r.is_leaf() || l.label() != r.label() {
        return None;
    }
    // binders and implications have dedicated rules
    if BINDER_HEADS.contains(&l.head()) || l.head() == "→" {
        return None;
    }
    if l.children().len() != r.children().len() {
        return None;
    }
    let mut differing = l.children().iter().zip(r.children()).filter(|(a, b)| a != b);
    let (a, b) = differing.next()?;
    differing.next().is_none().then(|| (a.clone(), b.clone()))
}

fn congr_fun(l: &OperatorTree, r: &OperatorTree) -> Option<(OperatorTree, OperatorTree)> {
    if l.is_leaf() || r.is_leaf() || l.head() == r.head() {
        return None;
    }
    if BINDER_HEADS.contains(&l.head()) || BINDER_HEADS.contains(&r.head()) {
        return None;
    }
    (l.children() == r.children())
        .then(|| (OperatorTree::leaf(l.head()), OperatorTree::leaf(r.head())))
}

/// Bound name both bodies can share: the smaller of the two names that is
/// not already used in the other body, else a primed variant.
fn unify_names(x: &str, bx: &OperatorTree, y: &str, by: &OperatorTree) -> String {
    let usable = |c: &str| (c == x || !occurs(bx, c)) && (c == y || !occurs(by, c));
    let mut candidates = [x, y];
    candidates.sort();
    if let Some(c) = candidates.into_iter().find(|c| usable(c)) {
        return c.to_string();
    }
    fresh_name(candidates[0], |c| occurs(bx, c) || occurs(by, c))
}

fn binder_congr(
    l: &OperatorTree,
    r: &OperatorTree,
    heads: &[&str],
) -> Option<(OperatorTree, OperatorTree)> {
    if !is_binder(l) || !is_binder(r) || l.label() != r.label() || !heads.contains(&l.head()) {
        return None;
    }
    let (lk, rk) = (l.children(), r.children());
    if lk.len() != rk.len() || lk[1..lk.len() - 1] != rk[1..rk.len() - 1] {
        return None;
    }
    let (x, y) = (lk[0].label(), rk[0].label());
    let (bx, by) = (&lk[lk.len() - 1], &rk[rk.len() - 1]);
    let z = unify_names(x, bx, y, by);
    Some((rename_free(bx, x, &z), rename_free(by, y, &z)))
}

fn implies_congr(l: &OperatorTree, r: &OperatorTree) -> Option<(OperatorTree, OperatorTree)> {
    let is_arrow = |t: &OperatorTree| !t.is_leaf() && t.head() == "→" && t.children().len() == 2;
    if !is_arrow(l) || !is_arrow(r) {
        return None;
    }
    let ([a, c], [b, d]) = (l.children(), r.children()) else {
        return None;
    };
    match (a == b, c == d) {
        (true, false) => Some((c.clone(), d.clone())),
        (false, true) => Some((a.clone(), b.clone())),
        // identical sides are already closed; two residual goals are not allowed
        _ => None,
    }
}

/// `∀ x, ∀ y, P` ↦ `∀ y, ∀ x, P`, `∀ x, (H → P)` ↦ `H → ∀ x, P` and back,
/// and `A → B → C` ↦ `B → A → C`, each when no variable escapes its scope.
fn forall_swap(t: &OperatorTree) -> Vec<OperatorTree> {
    let mut out = Vec::new();
    if is_forall(t) {
        let (x, mid, body) = split_binder(t);
        if is_forall(body) {
            let (y, mid2, inner) = split_binder(body);
            let x_in_y_type = mid2.iter().any(|m| occurs_free(m, x));
            let y_in_x_type = mid.iter().any(|m| occurs(m, y));
            if x != y && !x_in_y_type && !y_in_x_type {
                out.push(rebind(body, y, mid2, rebind(t, x, mid, inner.clone())));
            }
        }
        if is_arrow(body) {
            let [h, p] = body.children() else { unreachable!() };
            if !occurs_free(h, x) {
                out.push(OperatorTree::node("→", vec![h.clone(), rebind(t, x, mid, p.clone())]));
            }
        }
    }
    if is_arrow(t) {
        let [h, p] = t.children() else { unreachable!() };
        if is_forall(p) {
            let (x, mid, inner) = split_binder(p);
            if !occurs_free(h, x) && !mid.iter().any(|m| occurs(m, x)) {
                let arrow = OperatorTree::node("→", vec![h.clone(), inner.clone()]);
                out.push(rebind(p, x, mid, arrow));
            }
        }
        if is_arrow(p) {
            let [b, c] = p.children() else { unreachable!() };
            let inner = OperatorTree::node("→", vec![h.clone(), c.clone()]);
            out.push(OperatorTree::node("→", vec![b.clone(), inner]));
        }
    }
    out
}

fn is_forall(t: &OperatorTree) -> bool {
    is_binder(t) && t.head() == "∀"
}

fn is_arrow(t: &OperatorTree) -> bool {
    !t.is_leaf() && t.head() == "→" && t.children().len() == 2
}

fn split_binder(t: &OperatorTree) -> (&str, &[OperatorTree], &OperatorTree) {
    let kids = t.children();
    (kids[0].label(), &kids[1..kids.len() - 1], &kids[kids.len() - 1])
}

/// Binder node with the same head as `like`.
fn rebind(like: &OperatorTree, name: &str, mid: &[OperatorTree], body: OperatorTree) -> OperatorTree {
    let mut kids = Vec::with_capacity(mid.len() + 2);
    kids.push(OperatorTree::leaf(name));
    kids.extend(mid.iter().cloned());
    kids.push(body);
    OperatorTree::node(like.head(), kids)
}
