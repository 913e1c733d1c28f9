//! Reference interpreter for goals over a small integer domain.
//!
//! Variables range over `-2..=2`, quantifiers enumerate that domain, `f`
//! and `g` are fixed integer functions and `↑` is the identity. A goal
//! `l = r` is true when both sides agree under every assignment of its
//! free variables.

use std::collections::BTreeMap;

use num_rational::Ratio;
use transted::scope::occurs_free;
use transted::OperatorTree;

pub type Q = Ratio<i128>;

pub const DOMAIN: [i128; 5] = [-2, -1, 0, 1, 2];
pub const FUNCTIONS: [&str; 2] = ["f", "g"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum V {
    N(Q),
    B(bool),
    Fun(String),
    Pair(Box<V>, Box<V>),
}

type Env = BTreeMap<String, V>;

fn apply_fun(name: &str, v: Q) -> Option<V> {
    let n = *v.numer() * 7 + *v.denom() * 3;
    Some(V::N(Q::from_integer(match name {
        "f" => n.rem_euclid(11),
        "g" => (n * n).rem_euclid(5) - 2,
        _ => return None,
    })))
}

fn num(v: V) -> Option<Q> {
    match v {
        V::N(q) => Some(q),
        _ => None,
    }
}

fn boolean(v: V) -> Option<bool> {
    match v {
        V::B(b) => Some(b),
        _ => None,
    }
}

pub fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Value of `t`; `None` for ill-typed or uninterpretable terms.
pub fn eval(t: &OperatorTree, env: &Env) -> Option<V> {
    if t.is_leaf() {
        let l = t.label();
        if is_numeral(l) {
            return Some(V::N(Q::from_integer(l.parse().ok()?)));
        }
        if let Some(v) = env.get(l) {
            return Some(v.clone());
        }
        if FUNCTIONS.contains(&l) {
            return Some(V::Fun(l.to_string()));
        }
        return match l {
            "True" => Some(V::B(true)),
            "False" => Some(V::B(false)),
            _ => None,
        };
    }
    let k = t.children();
    let ev = |i: usize| eval(&k[i], env);
    let n = |i: usize| ev(i).and_then(num);
    let b = |i: usize| ev(i).and_then(boolean);
    Some(match (t.head(), k.len()) {
        ("+", 2) => V::N(n(0)? + n(1)?),
        ("-", 2) => V::N(n(0)? - n(1)?),
        ("*", 2) => V::N(n(0)? * n(1)?),
        ("/", 2) => {
            let d = n(1)?;
            V::N(if d == Q::from_integer(0) { d } else { n(0)? / d })
        }
        ("^", 2) => {
            let e = n(1)?;
            if !e.is_integer() || e < Q::from_integer(0) || e > Q::from_integer(8) {
                return None;
            }
            let base = n(0)?;
            V::N((0..*e.numer()).fold(Q::from_integer(1), |acc, _| acc * base))
        }
        ("-", 1) => V::N(-n(0)?),
        ("↑", 1) => V::N(n(0)?),
        ("¬", 1) => V::B(!b(0)?),
        ("∧", 2) => V::B(b(0)? & b(1)?),
        ("∨", 2) => V::B(b(0)? | b(1)?),
        ("→", 2) => V::B(!b(0)? | b(1)?),
        ("↔", 2) => V::B(b(0)? == b(1)?),
        ("=", 2) => V::B(ev(0)? == ev(1)?),
        ("≠", 2) => V::B(ev(0)? != ev(1)?),
        ("<", 2) => V::B(n(0)? < n(1)?),
        ("≤", 2) => V::B(n(0)? <= n(1)?),
        (">", 2) => V::B(n(0)? > n(1)?),
        ("≥", 2) => V::B(n(0)? >= n(1)?),
        ("IsRegular", 1) => V::B(n(0)? != Q::from_integer(0)),
        ("Prod.mk", 2) => V::Pair(Box::new(ev(0)?), Box::new(ev(1)?)),
        (".1", 1) => match ev(0)? {
            V::Pair(a, _) => *a,
            _ => return None,
        },
        (".2", 1) => match ev(0)? {
            V::Pair(_, b) => *b,
            _ => return None,
        },
        ("let", 3) => {
            let mut inner = env.clone();
            inner.insert(k[0].label().to_string(), ev(1)?);
            eval(&k[2], &inner)?
        }
        (q @ ("∀" | "∃"), 3) => {
            let mut results = Vec::new();
            for d in DOMAIN {
                let mut inner = env.clone();
                inner.insert(k[0].label().to_string(), V::N(Q::from_integer(d)));
                results.push(boolean(eval(&k[2], &inner)?)?);
            }
            V::B(if q == "∀" {
                results.iter().all(|&r| r)
            } else {
                results.iter().any(|&r| r)
            })
        }
        (h, 1) if FUNCTIONS.contains(&h) => apply_fun(h, n(0)?)?,
        _ => return None,
    })
}

/// Leaves that are neither numerals, functions nor reserved constants,
/// collected regardless of binding.
pub fn variables(t: &OperatorTree, out: &mut Vec<String>) {
    if t.is_leaf() {
        let l = t.label();
        let reserved = is_numeral(l) || FUNCTIONS.contains(&l) || matches!(l, "True" | "False" | "ℤ");
        if !reserved && !out.iter().any(|v| v == l) {
            out.push(l.to_string());
        }
        return;
    }
    for c in t.children() {
        variables(c, out);
    }
}

/// Truth of the goal `l = r` over all assignments; `None` if some
/// assignment cannot be evaluated.
pub fn goal_holds(l: &OperatorTree, r: &OperatorTree) -> Option<bool> {
    let mut vars = Vec::new();
    variables(l, &mut vars);
    variables(r, &mut vars);
    vars.retain(|v| occurs_free(l, v) || occurs_free(r, v));
    let mut idx = vec![0usize; vars.len()];
    loop {
        let env: Env = vars
            .iter()
            .zip(&idx)
            .map(|(v, &i)| (v.clone(), V::N(Q::from_integer(DOMAIN[i]))))
            .collect();
        if eval(l, &env)? != eval(r, &env)? {
            return Some(false);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Some(true);
            }
            idx[pos] += 1;
            if idx[pos] < DOMAIN.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
