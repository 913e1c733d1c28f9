//! Labeled, ordered operator trees.
//!
//! Operators become internal nodes whose labels carry the [`SLOT`] suffix;
//! operands are leaves. The suffix keeps an operator from ever matching an
//! operand of the same name under label equality.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Placeholder suffix carried by every internal node label.
pub const SLOT: &str = "<SLOT>";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("empty label at {0}")]
    EmptyLabel(NodePath),
    #[error("internal node at {0} is missing the {SLOT} suffix")]
    MissingSlot(NodePath),
    #[error("leaf at {0} carries the {SLOT} suffix")]
    LeafWithSlot(NodePath),
    #[error("invalid tree JSON: {0}")]
    Json(String),
}

/// Address of a node as the sequence of child indices taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        v.push(index);
        NodePath(v)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for NodePath {
    fn from(v: Vec<usize>) -> Self {
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

/// An operator tree (OPT).
///
/// Invariant: a node has children iff its label ends with [`SLOT`], and no
/// label is empty. Trees built through [`OperatorTree::leaf`] and
/// [`OperatorTree::node`] uphold it; deserialized trees should be checked
/// with [`OperatorTree::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OperatorTree {
    label: String,
    #[serde(default)]
    children: Vec<OperatorTree>,
}

impl OperatorTree {
    pub fn leaf(label: impl Into<String>) -> Self {
        let label = label.into();
        assert!(!label.is_empty(), "leaf label must be nonempty");
        assert!(!label.ends_with(SLOT), "leaf label must not carry {SLOT}");
        OperatorTree {
            label,
            children: Vec::new(),
        }
    }

    /// Builds an internal node; `head` is the operator name without the suffix.
    pub fn node(head: &str, children: Vec<OperatorTree>) -> Self {
        assert!(!head.is_empty(), "operator head must be nonempty");
        assert!(!children.is_empty(), "internal node needs children");
        OperatorTree {
            label: format!("{head}{SLOT}"),
            children,
        }
    }

    /// Builds a node from a full label: a leaf when `children` is empty,
    /// otherwise an internal node (the suffix is added if missing).
    pub fn with_label(label: &str, children: Vec<OperatorTree>) -> Self {
        if children.is_empty() {
            OperatorTree::leaf(label.strip_suffix(SLOT).unwrap_or(label))
        } else {
            OperatorTree::node(label.strip_suffix(SLOT).unwrap_or(label), children)
        }
    }

    /// Builds a node without enforcing the placeholder law. Meant for code
    /// that treats operator trees as generic labeled trees (edit-distance
    /// tests, script replay); [`OperatorTree::validate`] reports violations.
    pub fn unchecked(label: impl Into<String>, children: Vec<OperatorTree>) -> Self {
        OperatorTree {
            label: label.into(),
            children,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Label without the placeholder suffix.
    pub fn head(&self) -> &str {
        self.label.strip_suffix(SLOT).unwrap_or(&self.label)
    }

    pub fn children(&self) -> &[OperatorTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn into_parts(self) -> (String, Vec<OperatorTree>) {
        (self.label, self.children)
    }

    /// Number of nodes, `|T|`.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(OperatorTree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(OperatorTree::depth).max().unwrap_or(0)
    }

    pub fn get(&self, path: &[usize]) -> Option<&OperatorTree> {
        let mut node = self;
        for &i in path {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    /// Returns a copy with the subtree at `path` replaced.
    pub fn replace(&self, path: &[usize], subtree: OperatorTree) -> Option<OperatorTree> {
        match path.split_first() {
            None => Some(subtree),
            Some((&i, rest)) => {
                let child = self.children.get(i)?.replace(rest, subtree)?;
                let mut out = self.clone();
                out.children[i] = child;
                Some(out)
            }
        }
    }

    /// Paths of all nodes in preorder.
    pub fn preorder_paths(&self) -> Vec<NodePath> {
        fn walk(t: &OperatorTree, prefix: &mut Vec<usize>, out: &mut Vec<NodePath>) {
            out.push(NodePath(prefix.clone()));
            for (i, c) in t.children.iter().enumerate() {
                prefix.push(i);
                walk(c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::with_capacity(self.size());
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Labels in preorder.
    pub fn preorder_labels(&self) -> Vec<&str> {
        fn walk<'a>(t: &'a OperatorTree, out: &mut Vec<&'a str>) {
            out.push(&t.label);
            for c in &t.children {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        fn check(t: &OperatorTree, path: &mut Vec<usize>) -> Result<(), TreeError> {
            let here = || NodePath(path.clone());
            if t.label.is_empty() || t.label == SLOT {
                return Err(TreeError::EmptyLabel(here()));
            }
            match (t.children.is_empty(), t.label.ends_with(SLOT)) {
                (true, true) => return Err(TreeError::LeafWithSlot(here())),
                (false, false) => return Err(TreeError::MissingSlot(here())),
                _ => {}
            }
            for (i, c) in t.children.iter().enumerate() {
                path.push(i);
                check(c, path)?;
                path.pop();
            }
            Ok(())
        }
        check(self, &mut Vec::new())
    }

    /// Canonical JSON: `{"label": ..., "children": [...]}`, compact, fields in
    /// that order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<OperatorTree, TreeError> {
        let tree: OperatorTree =
            serde_json::from_str(text).map_err(|e| TreeError::Json(e.to_string()))?;
        tree.validate()?;
        Ok(tree)
    }

    /// Compact s-expression: leaves print as their label, internal nodes as
    /// `(head child ...)`. Injective on valid trees since labels never
    /// contain whitespace or parentheses.
    pub fn to_sexp(&self) -> String {
        let mut out = String::new();
        self.write_sexp(&mut out);
        out
    }

    fn write_sexp(&self, out: &mut String) {
        if self.children.is_empty() {
            out.push_str(&self.label);
            return;
        }
        out.push('(');
        out.push_str(self.head());
        for c in &self.children {
            out.push(' ');
            c.write_sexp(out);
        }
        out.push(')');
    }
}

impl fmt::Display for OperatorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp())
    }
}

/// Parses the s-expression form produced by [`OperatorTree::to_sexp`].
pub fn parse_sexp_tree(text: &str) -> Option<OperatorTree> {
    let atoms = sexp_atoms(text);
    let mut pos = 0;
    let tree = sexp_tree(&atoms, &mut pos)?;
    (pos == atoms.len()).then_some(tree)
}

pub(crate) fn sexp_atoms(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' | ')' => {
                if let Some(s) = start.take() {
                    out.push(&text[s..i]);
                }
                out.push(&text[i..i + 1]);
            }
            c if c.is_whitespace() => {
                if let Some(s) = start.take() {
                    out.push(&text[s..i]);
                }
            }
            _ => {
                if start.is_none() {
                    start = Some(i);
                }
            }
        }
    }
    if let Some(s) = start {
        out.push(&text[s..]);
    }
    out
}

fn sexp_tree(atoms: &[&str], pos: &mut usize) -> Option<OperatorTree> {
    let atom = *atoms.get(*pos)?;
    *pos += 1;
    match atom {
        "(" => {
            let head = *atoms.get(*pos)?;
            if head == "(" || head == ")" {
                return None;
            }
            *pos += 1;
            let mut children = Vec::new();
            while *atoms.get(*pos)? != ")" {
                children.push(sexp_tree(atoms, pos)?);
            }
            *pos += 1;
            if children.is_empty() {
                return None;
            }
            Some(OperatorTree::node(head, children))
        }
        ")" => None,
        label => Some(OperatorTree::leaf(label)),
    }
}
