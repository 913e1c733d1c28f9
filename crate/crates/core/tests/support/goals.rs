//! Random well-typed goals over integers, propositions and pairs.

use rand::seq::SliceRandom;
use rand::Rng;
use transted::OperatorTree;

const VARS: [&str; 2] = ["a", "b"];
const BOUND: [&str; 2] = ["x", "y"];
const LITERALS: [&str; 3] = ["0", "1", "2"];
const COMPARISONS: [&str; 6] = ["=", "≠", "<", "≤", ">", "≥"];

fn leaf(s: &str) -> OperatorTree {
    OperatorTree::leaf(s)
}

fn node(h: &str, kids: Vec<OperatorTree>) -> OperatorTree {
    OperatorTree::node(h, kids)
}

pub fn number<R: Rng>(rng: &mut R, depth: u32, bound: &[&str]) -> OperatorTree {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 if !bound.is_empty() => leaf(bound.choose(rng).unwrap()),
            0 | 1 => leaf(VARS.choose(rng).unwrap()),
            2 => leaf(LITERALS.choose(rng).unwrap()),
            _ => node("-", vec![leaf("1")]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..12) {
        0..=2 => {
            let op = ["+", "*", "-"].choose(rng).unwrap();
            node(op, vec![number(rng, d, bound), number(rng, d, bound)])
        }
        3 => node("-", vec![number(rng, d, bound)]),
        4 => node(["f", "g"].choose(rng).unwrap(), vec![number(rng, d, bound)]),
        5 => node("↑", vec![number(rng, d, bound)]),
        6 => node("/", vec![number(rng, d, bound), leaf(LITERALS[rng.gen_range(1..3)])]),
        7 => node("^", vec![number(rng, d, bound), leaf(LITERALS.choose(rng).unwrap())]),
        8 => {
            let mut inner = bound.to_vec();
            inner.push("z");
            node("let", vec![leaf("z"), number(rng, d, bound), number(rng, d, &inner)])
        }
        9 => {
            let pair = node("Prod.mk", vec![number(rng, d, bound), number(rng, d, bound)]);
            node([".1", ".2"].choose(rng).unwrap(), vec![pair])
        }
        10 => node("*", vec![number(rng, d, bound), node("-", vec![leaf("1")])]),
        _ => node("+", vec![node("+", vec![number(rng, d, bound), number(rng, d, bound)]), number(rng, d, bound)]),
    }
}

pub fn proposition<R: Rng>(rng: &mut R, depth: u32, bound: &[&str]) -> OperatorTree {
    if depth == 0 || rng.gen_bool(0.25) {
        let d = depth.min(1);
        return if rng.gen_bool(0.15) {
            node("IsRegular", vec![number(rng, d, bound)])
        } else {
            let op = COMPARISONS.choose(rng).unwrap();
            node(op, vec![number(rng, d, bound), number(rng, d, bound)])
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => node("∧", vec![proposition(rng, d, bound), proposition(rng, d, bound)]),
        1 => node("∨", vec![proposition(rng, d, bound), proposition(rng, d, bound)]),
        2 | 3 => node("→", vec![proposition(rng, d, bound), proposition(rng, d, bound)]),
        4 => node(
            "→",
            vec![
                node("∧", vec![proposition(rng, d, bound), proposition(rng, d, bound)]),
                proposition(rng, d, bound),
            ],
        ),
        5 => node("¬", vec![proposition(rng, d, bound)]),
        _ => {
            let x = *BOUND.choose(rng).unwrap();
            let mut inner = bound.to_vec();
            inner.push(x);
            let q = if rng.gen_bool(0.8) { "∀" } else { "∃" };
            node(q, vec![leaf(x), leaf("ℤ"), proposition(rng, d, &inner)])
        }
    }
}

/// Replaces one leaf by another leaf of the same kind.
fn mutate_leaf<R: Rng>(rng: &mut R, t: &OperatorTree) -> OperatorTree {
    let paths: Vec<_> = t
        .preorder_paths()
        .into_iter()
        .filter(|p| {
            let n = t.get(p.as_slice()).unwrap();
            n.is_leaf() && n.label() != "ℤ" && !(p.as_slice().last() == Some(&0) && is_binder_name(t, p.as_slice()))
        })
        .collect();
    let Some(p) = paths.choose(rng) else {
        return t.clone();
    };
    let old = t.get(p.as_slice()).unwrap().label();
    let pool: &[&str] = if old.bytes().all(|b| b.is_ascii_digit()) { &LITERALS } else { &VARS };
    t.replace(p.as_slice(), leaf(pool.choose(rng).unwrap())).unwrap()
}

fn is_binder_name(t: &OperatorTree, path: &[usize]) -> bool {
    let parent = t.get(&path[..path.len() - 1]).unwrap();
    !parent.is_leaf() && matches!(parent.head(), "∀" | "∃" | "let")
}

/// Two sides of a goal: independent, or one a small mutation of the other.
pub fn goal_pair<R: Rng>(rng: &mut R, depth: u32) -> (OperatorTree, OperatorTree) {
    let prop = rng.gen_bool(0.7);
    let side = |rng: &mut R| {
        if prop {
            proposition(rng, depth, &[])
        } else {
            number(rng, depth, &[])
        }
    };
    let l = side(rng);
    let r = match rng.gen_range(0..20) {
        0..=6 => side(rng),
        7 => {
            let f = if rng.gen_bool(0.5) { "f" } else { "g" };
            let other = if f == "f" { "g" } else { "f" };
            let arg = number(rng, depth.saturating_sub(1), &[]);
            return (node(f, vec![arg.clone()]), node(other, vec![arg]));
        }
        _ => mutate_leaf(rng, &l),
    };
    (l, r)
}
