//! Best-first search over rule applications with TED as the heuristic.
//!
//! A node is an equality goal; its heuristic is the unit-cost TED between
//! the two sides. The frontier is ordered by (heuristic, depth, rendering)
//! where the rendering is the pair of side s-expressions in sorted order,
//! so `l = r` and `r = l` are one node and the search is symmetric in its
//! inputs. The answer is the smallest heuristic among expanded nodes, or 0
//! once a goal is closed.
//!
//! New children enter the frontier with a label-multiset lower bound and
//! get their exact TED when first popped. Since the bound never exceeds the
//! distance, nodes are expanded in exactly the order of eager evaluation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use super::normalize::normalize;
use super::rules::{equality_sides, Goal, RuleLibrary, Step};
use crate::ted::{similarity_from_distance, TedContext};
use crate::tree::{parse_sexp_tree, NodePath, OperatorTree};
use num_rational::Rational64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("max-nodes must be positive")]
    Nodes,
    #[error("max-depth must be positive")]
    Depth,
    #[error("max-wall-time must be positive")]
    WallTime,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error("a completed goal has no children")]
    Completed,
}

/// Limits of one search. The node count is the reproducible limit; the
/// wall-clock limit is advisory and disabled with `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: usize,
    pub max_depth: usize,
    pub max_wall_time: Option<Duration>,
}

impl SearchBudget {
    pub fn new(
        max_nodes: usize,
        max_depth: usize,
        max_wall_time: Option<Duration>,
    ) -> Result<SearchBudget, BudgetError> {
        let b = SearchBudget {
            max_nodes,
            max_depth,
            max_wall_time,
        };
        b.validate()?;
        Ok(b)
    }

    /// Same limits without a wall clock, for deterministic runs.
    pub fn without_wall_time(self) -> SearchBudget {
        SearchBudget {
            max_wall_time: None,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.max_nodes == 0 {
            return Err(BudgetError::Nodes);
        }
        if self.max_depth == 0 {
            return Err(BudgetError::Depth);
        }
        if self.max_wall_time.is_some_and(|t| t.is_zero()) {
            return Err(BudgetError::WallTime);
        }
        Ok(())
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000,
            max_depth: 30,
            max_wall_time: Some(Duration::from_secs(10)),
        }
    }
}

/// A goal with its heuristic, depth and the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchNode {
    pub goal: Goal,
    pub heuristic: u32,
    pub depth: usize,
    pub trace: Vec<Step>,
}

impl SearchNode {
    /// Root node for the equality `t`.
    pub fn start(t: &OperatorTree, ted: &mut TedContext) -> Option<SearchNode> {
        let (l, r) = equality_sides(t)?;
        let goal = Goal::equality(l.clone(), r.clone());
        Some(SearchNode {
            heuristic: heuristic(&goal, ted),
            goal,
            depth: 0,
            trace: Vec::new(),
        })
    }
}

fn heuristic(goal: &Goal, ted: &mut TedContext) -> u32 {
    goal.sides().map_or(0, |(l, r)| ted.distance(l, r))
}

/// Sorted rendering used as node identity and final tie-break.
fn node_key(l: &OperatorTree, r: &OperatorTree) -> (Rc<str>, Rc<str>) {
    let (a, b) = (l.to_sexp(), r.to_sexp());
    if a <= b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

/// All rule applications on an open goal, in rule-library order, then
/// preorder position, then rendering.
fn successors(goal: &OperatorTree, rules: &RuleLibrary) -> Vec<(Goal, Step)> {
    let paths = goal.preorder_paths();
    let mut out = Vec::new();
    for rule in rules.rules() {
        for path in &paths {
            let mut here = rule.apply_at(goal, path);
            if here.len() > 1 {
                here.sort_by_cached_key(|(g, _)| match g {
                    Goal::Open(t) => t.to_sexp(),
                    Goal::Completed => String::new(),
                });
            }
            out.extend(here);
        }
    }
    out
}

/// Children of an open node with recomputed heuristics.
pub fn enumerate_children(
    node: &SearchNode,
    rules: &RuleLibrary,
) -> Result<Vec<SearchNode>, ExpandError> {
    let Goal::Open(goal) = &node.goal else {
        return Err(ExpandError::Completed);
    };
    let mut ted = TedContext::new();
    Ok(successors(goal, rules)
        .into_iter()
        .map(|(g, step)| {
            let mut trace = node.trace.clone();
            trace.push(step);
            SearchNode {
                heuristic: heuristic(&g, &mut ted),
                goal: g,
                depth: node.depth + 1,
                trace,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransTedResult {
    /// Smallest heuristic reached; 0 when the goal was closed.
    pub distance: u32,
    /// `1 - distance / max(|t1|, |t2|)` over the initial sides.
    pub similarity: f64,
    pub proved_equal: bool,
    /// Steps leading to the best node.
    pub trace: Vec<Step>,
    /// Number of expanded nodes.
    pub expanded: usize,
    /// Plain TED between the initial sides.
    pub initial_distance: u32,
    /// Set when a statement did not parse and token trees were compared.
    pub degraded: bool,
    /// Set when the wall-clock limit stopped the search.
    pub timed_out: bool,
}

/// Persistent trace list shared between frontier entries.
struct Link {
    step: Step,
    parent: Option<Rc<Link>>,
}

fn collect_trace(mut link: Option<&Rc<Link>>) -> Vec<Step> {
    let mut out = Vec::new();
    while let Some(l) = link {
        out.push(l.step.clone());
        link = l.parent.as_ref();
    }
    out.reverse();
    out
}

struct Entry {
    /// Exact TED when `exact`, otherwise a lower bound on it.
    heuristic: u32,
    exact: bool,
    depth: usize,
    key: (Rc<str>, Rc<str>),
    /// Whether the goal's left side is `key.1`.
    swapped: bool,
    trace: Option<Rc<Link>>,
}

impl Entry {
    fn rank(&self) -> (u32, usize, &str, &str) {
        (self.heuristic, self.depth, &self.key.0, &self.key.1)
    }

    fn goal(&self) -> OperatorTree {
        let (a, b) = (&self.key.0, &self.key.1);
        let (l, r) = if self.swapped { (b, a) } else { (a, b) };
        let side = |s: &str| parse_sexp_tree(s).expect("rendered side parses back");
        OperatorTree::node(super::builtins::EQ, vec![side(l), side(r)])
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank()
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed: the heap pops the smallest rank first
    fn cmp(&self, other: &Self) -> Ordering {
        other.rank().cmp(&self.rank())
    }
}

/// `max(|l|, |r|)` minus the size of the common label multiset. Each
/// unmatched node costs an insert or delete and each mapped pair beyond
/// the shared labels costs a relabel, so unit TED is at least this.
pub fn label_lower_bound(l: &OperatorTree, r: &OperatorTree) -> u32 {
    fn labels(t: &OperatorTree) -> Vec<&str> {
        let mut v = t.preorder_labels();
        v.sort_unstable();
        v
    }
    let (a, b) = (labels(l), labels(r));
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (a.len().max(b.len()) - common) as u32
}

fn entry(
    l: &OperatorTree,
    r: &OperatorTree,
    depth: usize,
    h: u32,
    exact: bool,
    trace: Option<Rc<Link>>,
) -> Entry {
    let key = node_key(l, r);
    let swapped = *key.0 != *l.to_sexp();
    Entry {
        heuristic: h,
        exact,
        depth,
        key,
        swapped,
        trace,
    }
}

/// TransTED between two operator trees.
pub fn transted_trees(
    t1: &OperatorTree,
    t2: &OperatorTree,
    budget: &SearchBudget,
    rules: &RuleLibrary,
) -> Result<TransTedResult, BudgetError> {
    budget.validate()?;
    let started = Instant::now();
    let mut ted = TedContext::new();
    let initial = ted.distance(t1, t2);
    let finish = |distance: u32, proved: bool, trace: Vec<Step>, expanded: usize, timed_out: bool| {
        TransTedResult {
            distance,
            similarity: similarity_from_distance(Rational64::from(i64::from(distance)), t1, t2),
            proved_equal: proved,
            trace,
            expanded,
            initial_distance: initial,
            degraded: false,
            timed_out,
        }
    };
    if t1 == t2 {
        return Ok(finish(0, true, Vec::new(), 0, false));
    }

    // numeric normalization, then the syntactic identity check
    let (n1, n2) = (normalize(t1), normalize(t2));
    let start_trace = (n1 != *t1 || n2 != *t2).then(|| {
        Rc::new(Link {
            step: Step {
                rule: "normalize".into(),
                operator: None,
                reverse: false,
                path: NodePath::root(),
            },
            parent: None,
        })
    });
    if n1 == n2 {
        return Ok(finish(0, true, collect_trace(start_trace.as_ref()), 0, false));
    }

    let mut best = (initial, Vec::new());
    let start = entry(&n1, &n2, 0, ted.distance(&n1, &n2), true, start_trace);
    let mut seen: HashSet<(Rc<str>, Rc<str>)> = HashSet::new();
    seen.insert(start.key.clone());
    let mut frontier = BinaryHeap::new();
    frontier.push(start);
    let mut expanded = 0;
    let mut timed_out = false;

    while let Some(mut node) = frontier.pop() {
        if expanded >= budget.max_nodes {
            break;
        }
        if budget.max_wall_time.is_some_and(|t| started.elapsed() >= t) {
            timed_out = true;
            break;
        }
        let goal = node.goal();
        if !node.exact {
            let (l, r) = equality_sides(&goal).expect("entries are equalities");
            node.heuristic = ted.distance(l, r);
            node.exact = true;
            frontier.push(node);
            continue;
        }
        expanded += 1;
        if node.heuristic < best.0 {
            best = (node.heuristic, collect_trace(node.trace.as_ref()));
        }
        if node.depth >= budget.max_depth {
            continue;
        }
        for (child, step) in successors(&goal, rules) {
            let link = Rc::new(Link {
                step,
                parent: node.trace.clone(),
            });
            let Goal::Open(t) = child else {
                return Ok(finish(0, true, collect_trace(Some(&link)), expanded, false));
            };
            let (l, r) = equality_sides(&t).expect("rules keep equalities");
            let key = node_key(l, r);
            if seen.contains(&key) {
                continue;
            }
            seen.insert(key);
            let bound = label_lower_bound(l, r);
            frontier.push(entry(l, r, node.depth + 1, bound, false, Some(link)));
        }
    }
    let (distance, trace) = best;
    Ok(finish(distance, false, trace, expanded, timed_out))
}
