//! Tree patterns written as s-expressions with `?`-prefixed metavariables.
//!
//! `?x` in argument position matches any subtree; `?op` in head position
//! matches the head of any internal node with the same number of children.
//! Repeated metavariables must match equal subtrees (or equal heads).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tree::{sexp_atoms, OperatorTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("malformed pattern {0:?}")]
    Syntax(String),
    #[error("metavariable ?{0} is used both as a head and as a subtree")]
    MixedUse(String),
    #[error("malformed guard {0:?}; expected \"?var in a b c\"")]
    Guard(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    Meta(String),
    Lit(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Meta(String),
    Leaf(String),
    Node(Head, Vec<Pattern>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Tree(OperatorTree),
    Head(String),
}

pub type Bindings = BTreeMap<String, Binding>;

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern, PatternError> {
        let atoms = sexp_atoms(text);
        let mut pos = 0;
        let p = parse_atoms(&atoms, &mut pos).ok_or_else(|| PatternError::Syntax(text.into()))?;
        if pos != atoms.len() {
            return Err(PatternError::Syntax(text.into()));
        }
        let mut heads = Vec::new();
        let mut trees = Vec::new();
        p.collect_metas(&mut heads, &mut trees);
        if let Some(m) = heads.iter().find(|h| trees.contains(h)) {
            return Err(PatternError::MixedUse(m.clone()));
        }
        Ok(p)
    }

    fn collect_metas(&self, heads: &mut Vec<String>, trees: &mut Vec<String>) {
        match self {
            Pattern::Meta(m) => trees.push(m.clone()),
            Pattern::Leaf(_) => {}
            Pattern::Node(h, args) => {
                if let Head::Meta(m) = h {
                    heads.push(m.clone());
                }
                for a in args {
                    a.collect_metas(heads, trees);
                }
            }
        }
    }

    /// Names of all metavariables, heads included.
    pub fn metavars(&self) -> Vec<String> {
        let mut heads = Vec::new();
        let mut trees = Vec::new();
        self.collect_metas(&mut heads, &mut trees);
        heads.append(&mut trees);
        heads.sort();
        heads.dedup();
        heads
    }

    /// Extends `b` so that the pattern matches `t`; leaves `b` in an
    /// unspecified state on failure.
    pub fn matches(&self, t: &OperatorTree, b: &mut Bindings) -> bool {
        match self {
            Pattern::Meta(m) => bind(b, m, Binding::Tree(t.clone())),
            Pattern::Leaf(l) => t.is_leaf() && t.label() == l,
            Pattern::Node(head, args) => {
                if t.is_leaf() || t.children().len() != args.len() {
                    return false;
                }
                let head_ok = match head {
                    Head::Lit(h) => t.head() == h,
                    Head::Meta(m) => bind(b, m, Binding::Head(t.head().to_string())),
                };
                head_ok && args.iter().zip(t.children()).all(|(p, c)| p.matches(c, b))
            }
        }
    }

    /// Builds the tree described by the pattern; `None` if a metavariable
    /// is unbound or bound to the wrong kind.
    pub fn instantiate(&self, b: &Bindings) -> Option<OperatorTree> {
        match self {
            Pattern::Meta(m) => match b.get(m)? {
                Binding::Tree(t) => Some(t.clone()),
                Binding::Head(_) => None,
            },
            Pattern::Leaf(l) => Some(OperatorTree::leaf(l.as_str())),
            Pattern::Node(head, args) => {
                let head = match head {
                    Head::Lit(h) => h.clone(),
                    Head::Meta(m) => match b.get(m)? {
                        Binding::Head(h) => h.clone(),
                        Binding::Tree(_) => return None,
                    },
                };
                let kids = args
                    .iter()
                    .map(|a| a.instantiate(b))
                    .collect::<Option<Vec<_>>>()?;
                Some(OperatorTree::node(&head, kids))
            }
        }
    }
}

fn bind(b: &mut Bindings, name: &str, value: Binding) -> bool {
    match b.get(name) {
        Some(existing) => *existing == value,
        None => {
            b.insert(name.to_string(), value);
            true
        }
    }
}

fn parse_atoms(atoms: &[&str], pos: &mut usize) -> Option<Pattern> {
    let atom = *atoms.get(*pos)?;
    *pos += 1;
    match atom {
        "(" => {
            let head = *atoms.get(*pos)?;
            if head == "(" || head == ")" {
                return None;
            }
            *pos += 1;
            let head = match head.strip_prefix('?') {
                Some(m) if !m.is_empty() => Head::Meta(m.to_string()),
                _ => Head::Lit(head.to_string()),
            };
            let mut args = Vec::new();
            while *atoms.get(*pos)? != ")" {
                args.push(parse_atoms(atoms, pos)?);
            }
            *pos += 1;
            (!args.is_empty()).then_some(Pattern::Node(head, args))
        }
        ")" => None,
        a => Some(match a.strip_prefix('?') {
            Some(m) if !m.is_empty() => Pattern::Meta(m.to_string()),
            _ => Pattern::Leaf(a.to_string()),
        }),
    }
}

/// Side condition `?var in a b c`: the variable's head (or leaf label) must
/// be one of the listed names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guard {
    pub var: String,
    pub allowed: Vec<String>,
}

impl Guard {
    pub fn parse(text: &str) -> Result<Guard, PatternError> {
        let err = || PatternError::Guard(text.to_string());
        let mut words = text.split_whitespace();
        let var = words.next().and_then(|w| w.strip_prefix('?')).ok_or_else(err)?;
        if var.is_empty() || words.next() != Some("in") {
            return Err(err());
        }
        let allowed: Vec<String> = words.map(str::to_string).collect();
        if allowed.is_empty() {
            return Err(err());
        }
        Ok(Guard {
            var: var.to_string(),
            allowed,
        })
    }

    pub fn holds(&self, b: &Bindings) -> bool {
        let name = match b.get(&self.var) {
            Some(Binding::Head(h)) => h.as_str(),
            Some(Binding::Tree(t)) if t.is_leaf() => t.label(),
            _ => return false,
        };
        self.allowed.iter().any(|a| a == name)
    }
}
