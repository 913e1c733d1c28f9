//! Edit scripts: construction from an optimal mapping and replay.
//!
//! Deleting a root leaves a forest, so script paths address nodes from an
//! implicit forest root: `[0]` is the tree root, `[0, 2]` its third child,
//! and an insert under parent `[]` creates a new top-level tree.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{NodePath, OperatorTree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    /// Removes the node; its children take its place in order.
    Delete { path: NodePath },
    /// Creates a node at `index` under `parent`, adopting the `adopt`
    /// siblings that start at that index as its children.
    Insert {
        label: String,
        parent: NodePath,
        index: usize,
        adopt: usize,
    },
    Relabel { path: NodePath, label: String },
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Delete { path } => write!(f, "delete {}", ForestPath(path)),
            EditOp::Insert {
                label,
                parent,
                index,
                adopt,
            } => write!(
                f,
                "insert {label:?} under {} at {index} adopting {adopt}",
                ForestPath(parent)
            ),
            EditOp::Relabel { path, label } => {
                write!(f, "relabel {} to {label:?}", ForestPath(path))
            }
        }
    }
}

struct ForestPath<'a>(&'a NodePath);

impl fmt::Display for ForestPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.as_slice().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

pub type EditScript = Vec<EditOp>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("step {step}: no node at {path:?}")]
    BadPath { step: usize, path: Vec<usize> },
    #[error("step {step}: cannot adopt {adopt} children from index {index}")]
    BadSpan {
        step: usize,
        index: usize,
        adopt: usize,
    },
    #[error("script leaves {0} trees instead of one")]
    NotATree(usize),
}

/// Mutable tree used while replaying; labels are unchecked until the end.
#[derive(Clone, Debug)]
struct Node {
    label: String,
    children: Vec<Node>,
}

impl Node {
    fn from_tree(t: &OperatorTree) -> Node {
        Node {
            label: t.label().to_string(),
            children: t.children().iter().map(Node::from_tree).collect(),
        }
    }

    fn into_tree(self) -> OperatorTree {
        let children = self.children.into_iter().map(Node::into_tree).collect();
        OperatorTree::unchecked(self.label, children)
    }
}

/// Children list addressed by `parent` (the forest itself for `[]`).
fn siblings<'a>(forest: &'a mut Vec<Node>, parent: &[usize]) -> Option<&'a mut Vec<Node>> {
    let mut list = forest;
    for &i in parent {
        list = &mut list.get_mut(i)?.children;
    }
    Some(list)
}

/// Replays `script` on `t`.
pub fn apply_script(t: &OperatorTree, script: &[EditOp]) -> Result<OperatorTree, ScriptError> {
    let mut forest = vec![Node::from_tree(t)];
    for (step, op) in script.iter().enumerate() {
        let bad_path = |p: &NodePath| ScriptError::BadPath {
            step,
            path: p.as_slice().to_vec(),
        };
        match op {
            EditOp::Relabel { path, label } => {
                let (&last, parent) = path.as_slice().split_last().ok_or_else(|| bad_path(path))?;
                let list = siblings(&mut forest, parent).ok_or_else(|| bad_path(path))?;
                list.get_mut(last).ok_or_else(|| bad_path(path))?.label = label.clone();
            }
            EditOp::Delete { path } => {
                let (&last, parent) = path.as_slice().split_last().ok_or_else(|| bad_path(path))?;
                let list = siblings(&mut forest, parent).ok_or_else(|| bad_path(path))?;
                if last >= list.len() {
                    return Err(bad_path(path));
                }
                let removed = list.remove(last);
                for (k, c) in removed.children.into_iter().enumerate() {
                    list.insert(last + k, c);
                }
            }
            EditOp::Insert {
                label,
                parent,
                index,
                adopt,
            } => {
                let list = siblings(&mut forest, parent.as_slice()).ok_or_else(|| bad_path(parent))?;
                if index + adopt > list.len() {
                    return Err(ScriptError::BadSpan {
                        step,
                        index: *index,
                        adopt: *adopt,
                    });
                }
                let children: Vec<Node> = list.drain(*index..index + adopt).collect();
                list.insert(
                    *index,
                    Node {
                        label: label.clone(),
                        children,
                    },
                );
            }
        }
    }
    if forest.len() != 1 {
        return Err(ScriptError::NotATree(forest.len()));
    }
    Ok(forest.pop().expect("one tree").into_tree())
}

/// Preorder view of a tree with parent links.
struct Indexed<'a> {
    nodes: Vec<&'a OperatorTree>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    paths: Vec<Vec<usize>>,
}

impl<'a> Indexed<'a> {
    fn new(t: &'a OperatorTree) -> Self {
        let mut ix = Indexed {
            nodes: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            paths: Vec::new(),
        };
        ix.walk(t, None, vec![0]);
        ix
    }

    fn walk(&mut self, t: &'a OperatorTree, parent: Option<usize>, path: Vec<usize>) -> usize {
        let me = self.nodes.len();
        self.nodes.push(t);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.paths.push(path.clone());
        for (k, c) in t.children().iter().enumerate() {
            let mut p = path.clone();
            p.push(k);
            let child = self.walk(c, Some(me), p);
            self.children[me].push(child);
        }
        me
    }

    /// Present nodes directly below `node` (or below the forest root) once
    /// absent nodes are spliced out.
    fn induced_children(&self, node: Option<usize>, present: &[bool]) -> Vec<usize> {
        fn collect(ix: &Indexed, kids: &[usize], present: &[bool], out: &mut Vec<usize>) {
            for &k in kids {
                if present[k] {
                    out.push(k);
                } else {
                    collect(ix, &ix.children[k], present, out);
                }
            }
        }
        let mut out = Vec::new();
        match node {
            Some(n) => collect(self, &self.children[n], present, &mut out),
            None => collect(self, &[0], present, &mut out),
        }
        out
    }

    /// Forest path of a present node in the induced forest.
    fn induced_path(&self, node: usize, present: &[bool]) -> Vec<usize> {
        let mut chain = vec![node];
        let mut cur = self.parent[node];
        while let Some(p) = cur {
            if present[p] {
                chain.push(p);
            }
            cur = self.parent[p];
        }
        chain.reverse();
        let mut path = Vec::with_capacity(chain.len());
        let mut above = None;
        for &n in &chain {
            let kids = self.induced_children(above, present);
            path.push(kids.iter().position(|&k| k == n).expect("present child"));
            above = Some(n);
        }
        path
    }
}

/// Builds a script from a valid ordered mapping between preorder ranks.
/// Relabels come first, then deletions in reverse preorder, then insertions
/// in the second tree's preorder.
pub fn script_from_mapping(
    t1: &OperatorTree,
    t2: &OperatorTree,
    mapping: &[(usize, usize)],
) -> EditScript {
    let a = Indexed::new(t1);
    let b = Indexed::new(t2);
    let mut mapped_a = vec![false; a.nodes.len()];
    let mut present_b = vec![false; b.nodes.len()];
    let mut script = Vec::new();

    for &(i, j) in mapping {
        mapped_a[i] = true;
        present_b[j] = true;
        if a.nodes[i].label() != b.nodes[j].label() {
            script.push(EditOp::Relabel {
                path: NodePath(a.paths[i].clone()),
                label: b.nodes[j].label().to_string(),
            });
        }
    }
    for i in (0..a.nodes.len()).rev() {
        if !mapped_a[i] {
            script.push(EditOp::Delete {
                path: NodePath(a.paths[i].clone()),
            });
        }
    }
    for j in 0..b.nodes.len() {
        if present_b[j] {
            continue;
        }
        // preorder insertion: the parent, if any, is already present
        let parent = b.parent[j];
        let parent_path = parent.map_or_else(Vec::new, |p| b.induced_path(p, &present_b));
        let before = b.induced_children(parent, &present_b);
        present_b[j] = true;
        let adopt = b.induced_children(Some(j), &present_b).len();
        let after = b.induced_children(parent, &present_b);
        let index = after.iter().position(|&k| k == j).expect("inserted node");
        debug_assert_eq!(before.len() + 1, after.len() + adopt);
        script.push(EditOp::Insert {
            label: b.nodes[j].label().to_string(),
            parent: NodePath(parent_path),
            index,
            adopt,
        });
    }
    script
}
