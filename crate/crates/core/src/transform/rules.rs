//! Rewrite rules, the JSON rule-library format and rule application.
//!
//! A library is a JSON list of `{name, lhs?, rhs?, guard?, commutes?}`.
//! Entries with patterns rewrite `lhs` to `rhs` at any node inside either
//! side of the goal (and `rhs` to `lhs` as well when `commutes` is true).
//! Entries without patterns name a built-in procedure.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::builtins::{Builtin, EQ};
use super::pattern::{Binding, Bindings, Guard, Pattern, PatternError};
use crate::tree::{NodePath, OperatorTree};

const DEFAULT_LIBRARY: &str = include_str!("../../rules/default.json");

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("invalid rule library JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rule {name:?}: {source}")]
    Pattern {
        name: String,
        source: PatternError,
    },
    #[error("rule {name:?}: unknown built-in procedure (rules without patterns must name one)")]
    UnknownBuiltin { name: String },
    #[error("rule {name:?}: lhs and rhs must be given together")]
    MissingSide { name: String },
    #[error("rule {name:?}: metavariable ?{var} of the {side} does not occur in the {other}")]
    UnboundMetavar {
        name: String,
        var: String,
        side: &'static str,
        other: &'static str,
    },
    #[error("rule {name:?}: guard, commutes only apply to pattern rules")]
    BuiltinOptions { name: String },
    #[error("rule {name:?}: guard variable ?{var} does not occur in the patterns")]
    GuardVar { name: String, var: String },
}

/// One library entry exactly as written in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutes: Option<bool>,
}

#[derive(Clone, Debug)]
pub enum RuleKind {
    Pattern {
        lhs: Pattern,
        rhs: Pattern,
        guard: Option<Guard>,
        commutes: bool,
    },
    Builtin(Builtin),
}

#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub kind: RuleKind,
}

/// Goal of a search node: an open equality or a closed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Open(OperatorTree),
    Completed,
}

impl Goal {
    /// Goal `l = r`, closed at once when the sides coincide.
    pub fn equality(l: OperatorTree, r: OperatorTree) -> Goal {
        if l == r {
            Goal::Completed
        } else {
            Goal::Open(OperatorTree::node(EQ, vec![l, r]))
        }
    }

    pub fn sides(&self) -> Option<(&OperatorTree, &OperatorTree)> {
        match self {
            Goal::Open(t) => equality_sides(t),
            Goal::Completed => None,
        }
    }
}

/// The two sides of an equality-rooted tree.
pub fn equality_sides(t: &OperatorTree) -> Option<(&OperatorTree, &OperatorTree)> {
    match t.children() {
        [l, r] if t.head() == EQ => Some((l, r)),
        _ => None,
    }
}

/// One rule application, for traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: String,
    /// Operator bound by the guard, e.g. `+` for commutativity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    /// True when a commuting rule was used right to left.
    pub reverse: bool,
    pub path: NodePath,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reverse {
            write!(f, "←")?;
        }
        write!(f, "{}", self.rule)?;
        if let Some(op) = &self.operator {
            write!(f, "({op})")?;
        }
        write!(f, "@{}", self.path)
    }
}

impl RewriteRule {
    pub fn from_spec(spec: &RuleSpec) -> Result<RewriteRule, RuleError> {
        let name = spec.name.clone();
        let kind = match (&spec.lhs, &spec.rhs) {
            (None, None) => {
                if spec.guard.is_some() || spec.commutes.is_some() {
                    return Err(RuleError::BuiltinOptions { name });
                }
                let b = Builtin::from_name(&name)
                    .ok_or_else(|| RuleError::UnknownBuiltin { name: name.clone() })?;
                RuleKind::Builtin(b)
            }
            (Some(l), Some(r)) => {
                let pat = |s: &str| {
                    Pattern::parse(s).map_err(|source| RuleError::Pattern {
                        name: name.clone(),
                        source,
                    })
                };
                let (lhs, rhs) = (pat(l)?, pat(r)?);
                let commutes = spec.commutes.unwrap_or(false);
                let (lv, rv) = (lhs.metavars(), rhs.metavars());
                let unbound = |from: &[String], to: &[String], side, other| {
                    from.iter().find(|v| !to.contains(v)).map(|v| RuleError::UnboundMetavar {
                        name: name.clone(),
                        var: v.clone(),
                        side,
                        other,
                    })
                };
                if let Some(e) = unbound(&rv, &lv, "rhs", "lhs") {
                    return Err(e);
                }
                if commutes {
                    if let Some(e) = unbound(&lv, &rv, "lhs", "rhs") {
                        return Err(e);
                    }
                }
                let guard = match &spec.guard {
                    None => None,
                    Some(g) => {
                        let g = Guard::parse(g).map_err(|source| RuleError::Pattern {
                            name: name.clone(),
                            source,
                        })?;
                        if !lv.contains(&g.var) {
                            return Err(RuleError::GuardVar {
                                name,
                                var: g.var,
                            });
                        }
                        Some(g)
                    }
                };
                RuleKind::Pattern {
                    lhs,
                    rhs,
                    guard,
                    commutes,
                }
            }
            _ => return Err(RuleError::MissingSide { name }),
        };
        Ok(RewriteRule { name, kind })
    }

    /// Every goal obtained by applying the rule at `path`, in a fixed
    /// order. Goal-level rules only apply at the root; all other rules only
    /// apply strictly inside the sides. Results that are not equalities
    /// are dropped.
    pub fn apply_at(&self, goal: &OperatorTree, path: &NodePath) -> Vec<(Goal, Step)> {
        let Some((l, r)) = equality_sides(goal) else {
            return Vec::new();
        };
        let step = |operator: Option<String>, reverse: bool| Step {
            rule: self.name.clone(),
            operator,
            reverse,
            path: path.clone(),
        };
        match &self.kind {
            RuleKind::Builtin(b) if b.is_goal_level() => {
                if !path.is_root() {
                    return Vec::new();
                }
                b.apply_goal(l, r)
                    .map(|(l, r)| vec![(Goal::equality(l, r), step(None, false))])
                    .unwrap_or_default()
            }
            _ if path.is_root() => Vec::new(),
            RuleKind::Builtin(b) => {
                let Some(node) = goal.get(path.as_slice()) else {
                    return Vec::new();
                };
                b.apply_local(node)
                    .into_iter()
                    .filter_map(|new| rebuild(goal, path, new))
                    .map(|g| (g, step(None, false)))
                    .collect()
            }
            RuleKind::Pattern {
                lhs,
                rhs,
                guard,
                commutes,
            } => {
                let Some(node) = goal.get(path.as_slice()) else {
                    return Vec::new();
                };
                let mut out = Vec::new();
                let mut directions = vec![(lhs, rhs, false)];
                if *commutes {
                    directions.push((rhs, lhs, true));
                }
                for (from, to, reverse) in directions {
                    let mut b = Bindings::new();
                    if !from.matches(node, &mut b) {
                        continue;
                    }
                    if guard.as_ref().is_some_and(|g| !g.holds(&b)) {
                        continue;
                    }
                    let operator = guard.as_ref().and_then(|g| match b.get(&g.var) {
                        Some(Binding::Head(h)) => Some(h.clone()),
                        Some(Binding::Tree(t)) => Some(t.label().to_string()),
                        None => None,
                    });
                    let Some(new) = to.instantiate(&b) else { continue };
                    if new == *node {
                        continue;
                    }
                    if let Some(g) = rebuild(goal, path, new) {
                        out.push((g, step(operator, reverse)));
                    }
                }
                out
            }
        }
    }
}

fn rebuild(goal: &OperatorTree, path: &NodePath, new: OperatorTree) -> Option<Goal> {
    let t = goal.replace(path.as_slice(), new)?;
    let (l, r) = equality_sides(&t)?;
    Some(Goal::equality(l.clone(), r.clone()))
}

/// First result of applying `rule` at `path`, if any.
pub fn apply_rule(rule: &RewriteRule, goal: &OperatorTree, path: &NodePath) -> Option<Goal> {
    rule.apply_at(goal, path).into_iter().next().map(|(g, _)| g)
}

/// An ordered rule library together with its source entries.
#[derive(Clone, Debug)]
pub struct RuleLibrary {
    specs: Vec<RuleSpec>,
    rules: Vec<RewriteRule>,
}

impl RuleLibrary {
    pub fn from_specs(specs: Vec<RuleSpec>) -> Result<RuleLibrary, RuleError> {
        let rules = specs
            .iter()
            .map(RewriteRule::from_spec)
            .collect::<Result<_, _>>()?;
        Ok(RuleLibrary { specs, rules })
    }

    pub fn from_json(text: &str) -> Result<RuleLibrary, RuleError> {
        RuleLibrary::from_specs(serde_json::from_str(text)?)
    }

    /// Pretty-printed JSON with a trailing newline; the shipped library is
    /// stored in exactly this form.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.specs).expect("rule specs serialize");
        s.push('\n');
        s
    }

    /// The library shipped with the crate.
    pub fn default_library() -> RuleLibrary {
        RuleLibrary::from_json(DEFAULT_LIBRARY).expect("shipped rule library is valid")
    }

    /// Source text of the shipped library.
    pub fn default_json() -> &'static str {
        DEFAULT_LIBRARY
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn specs(&self) -> &[RuleSpec] {
        &self.specs
    }
}

impl Default for RuleLibrary {
    fn default() -> Self {
        RuleLibrary::default_library()
    }
}
