//! Reference tree edit distances that share no code with the library.
//!
//! Two independent routes:
//! * [`ScriptSearch`]: breadth-first search over literal delete / insert /
//!   relabel operations on forests (unit costs, tiny trees only);
//! * [`brute_force`]: minimum over all pairs of kept-node subsets whose
//!   induced ordered forests have the same shape, which is exactly the set
//!   of valid edit mappings.
//!
//! [`maximal_mappings`] specializes the second route for bulk checking: the
//! valid subset pairs depend only on the two tree shapes, so they can be
//! tabulated once per shape pair.
//!
//! Trees here are generic labeled trees: internal nodes may carry any
//! label, so they are built with `OperatorTree::unchecked`.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;
use transted::OperatorTree;

/// Tree in preorder arrays.
#[derive(Clone, Debug)]
pub struct Pre {
    pub labels: Vec<String>,
    pub parent: Vec<Option<usize>>,
}

impl Pre {
    pub fn new(t: &OperatorTree) -> Pre {
        fn walk(t: &OperatorTree, parent: Option<usize>, out: &mut Pre) {
            let me = out.labels.len();
            out.labels.push(t.label().to_string());
            out.parent.push(parent);
            for c in t.children() {
                walk(c, Some(me), out);
            }
        }
        let mut out = Pre {
            labels: Vec::new(),
            parent: Vec::new(),
        };
        walk(t, None, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Depth of each kept node in the forest induced by `mask`, in preorder.
    pub fn induced_shape(&self, mask: u32) -> Vec<u8> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let mut depth = 0;
            let mut p = self.parent[i];
            while let Some(q) = p {
                if mask & (1 << q) != 0 {
                    depth += 1;
                }
                p = self.parent[q];
            }
            out.push(depth);
        }
        out
    }

    fn kept_labels(&self, mask: u32) -> Vec<&str> {
        (0..self.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.labels[i].as_str())
            .collect()
    }
}

/// Minimum edit cost with integer costs `(delete, insert, relabel)`,
/// enumerating every valid mapping.
pub fn brute_force(t1: &OperatorTree, t2: &OperatorTree, costs: (i64, i64, i64)) -> i64 {
    let (a, b) = (Pre::new(t1), Pre::new(t2));
    assert!(a.len() <= 16 && b.len() <= 16);
    let mut by_shape: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
    for m in 0..(1u32 << b.len()) {
        by_shape.entry(b.induced_shape(m)).or_default().push(m);
    }
    let (n1, n2) = (a.len() as i64, b.len() as i64);
    let mut best = i64::MAX;
    for m1 in 0..(1u32 << a.len()) {
        let Some(partners) = by_shape.get(&a.induced_shape(m1)) else {
            continue;
        };
        let k = i64::from(m1.count_ones());
        let base = costs.0 * (n1 - k) + costs.1 * (n2 - k);
        let l1 = a.kept_labels(m1);
        for &m2 in partners {
            let l2 = b.kept_labels(m2);
            let mismatches = l1.iter().zip(&l2).filter(|(x, y)| x != y).count() as i64;
            best = best.min(base + costs.2 * mismatches);
        }
    }
    best
}

/// Mutable forest node for the literal search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    label: u8,
    kids: Vec<Node>,
}

fn to_node(t: &OperatorTree, alphabet: &mut Vec<String>) -> Node {
    let label = match alphabet.iter().position(|l| l == t.label()) {
        Some(i) => i as u8,
        None => {
            alphabet.push(t.label().to_string());
            (alphabet.len() - 1) as u8
        }
    };
    Node {
        label,
        kids: t.children().iter().map(|c| to_node(c, alphabet)).collect(),
    }
}

fn forest_size(f: &[Node]) -> usize {
    f.iter().map(|n| 1 + forest_size(&n.kids)).sum()
}

/// Every forest reachable by one operation, with at most `max_size` nodes.
fn neighbours(f: &[Node], labels: u8, max_size: usize, out: &mut Vec<Vec<Node>>) {
    let size = forest_size(f);
    for i in 0..f.len() {
        // delete the i-th root: its children take its place
        let mut g = f.to_vec();
        let removed = g.remove(i);
        for (k, c) in removed.kids.into_iter().enumerate() {
            g.insert(i + k, c);
        }
        out.push(g);
        for l in 0..labels {
            if l != f[i].label {
                let mut g = f.to_vec();
                g[i].label = l;
                out.push(g);
            }
        }
        // operations strictly inside the i-th tree
        let mut inner = Vec::new();
        neighbours(&f[i].kids, labels, max_size - (size - forest_size(&f[i].kids)), &mut inner);
        for kids in inner {
            let mut g = f.to_vec();
            g[i].kids = kids;
            out.push(g);
        }
    }
    if size < max_size {
        for start in 0..=f.len() {
            for end in start..=f.len() {
                for l in 0..labels {
                    let mut g = f[..start].to_vec();
                    g.push(Node {
                        label: l,
                        kids: f[start..end].to_vec(),
                    });
                    g.extend_from_slice(&f[end..]);
                    out.push(g);
                }
            }
        }
    }
}

/// Unit-cost distances from `source` to every forest reachable without
/// exceeding `max_size` nodes, by breadth-first search over operations.
pub struct ScriptSearch {
    alphabet: Vec<String>,
    dist: HashMap<Vec<Node>, u32>,
}

impl ScriptSearch {
    /// `labels` fixes the alphabet available to inserts and relabels.
    pub fn new(source: &OperatorTree, labels: &[&str], max_size: usize) -> ScriptSearch {
        let mut alphabet: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let start = vec![to_node(source, &mut alphabet)];
        assert_eq!(alphabet.len(), labels.len(), "source uses labels outside the alphabet");
        let mut dist = HashMap::new();
        dist.insert(start.clone(), 0u32);
        let mut queue = VecDeque::from([start]);
        let mut buf = Vec::new();
        while let Some(f) = queue.pop_front() {
            let d = dist[&f];
            buf.clear();
            neighbours(&f, labels.len() as u8, max_size, &mut buf);
            for g in buf.drain(..) {
                if !dist.contains_key(&g) {
                    dist.insert(g.clone(), d + 1);
                    queue.push_back(g);
                }
            }
        }
        ScriptSearch { alphabet, dist }
    }

    pub fn distance_to(&self, target: &OperatorTree) -> Option<u32> {
        let mut alphabet = self.alphabet.clone();
        let node = to_node(target, &mut alphabet);
        if alphabet.len() != self.alphabet.len() {
            return None;
        }
        self.dist.get(&vec![node]).copied()
    }
}

/// All ordered tree shapes with exactly `n` nodes, as preorder depth lists.
pub fn shapes(n: usize) -> Vec<Vec<u8>> {
    fn forests(n: usize, depth: u8) -> Vec<Vec<u8>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for head in trees(first, depth) {
                for tail in forests(n - first, depth) {
                    let mut v = head.clone();
                    v.extend(tail);
                    out.push(v);
                }
            }
        }
        out
    }
    fn trees(n: usize, depth: u8) -> Vec<Vec<u8>> {
        forests(n - 1, depth + 1)
            .into_iter()
            .map(|rest| {
                let mut v = vec![depth];
                v.extend(rest);
                v
            })
            .collect()
    }
    trees(n, 0)
}

/// Builds the tree with the given preorder depths and labels.
pub fn build(depths: &[u8], labels: &[&str]) -> OperatorTree {
    fn go(depths: &[u8], labels: &[&str], pos: &mut usize) -> OperatorTree {
        let me = *pos;
        *pos += 1;
        let mut kids = Vec::new();
        while *pos < depths.len() && depths[*pos] > depths[me] {
            kids.push(go(depths, labels, pos));
        }
        OperatorTree::unchecked(labels[me], kids)
    }
    let mut pos = 0;
    let t = go(depths, labels, &mut pos);
    assert_eq!(pos, depths.len());
    t
}

/// Every labeling of `n` positions over `alphabet`.
pub fn labelings<'a>(n: usize, alphabet: &[&'a str]) -> Vec<Vec<&'a str>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                alphabet.iter().map(move |l| {
                    let mut w = v.clone();
                    w.push(*l);
                    w
                })
            })
            .collect();
    }
    out
}

/// Labelings in which labels first appear in alphabet order, one per
/// orbit under renaming of the alphabet.
pub fn canonical_labelings<'a>(n: usize, alphabet: &[&'a str]) -> Vec<Vec<&'a str>> {
    labelings(n, alphabet)
        .into_iter()
        .filter(|v| {
            let mut next = 0;
            for l in v {
                let idx = alphabet.iter().position(|a| a == l).unwrap();
                if idx > next {
                    return false;
                }
                if idx == next {
                    next += 1;
                }
            }
            true
        })
        .collect()
}

/// Random tree with at most `max_nodes` nodes over `alphabet`.
pub fn random_tree(rng: &mut impl Rng, max_nodes: usize, alphabet: &[&str]) -> OperatorTree {
    let n = rng.gen_range(1..=max_nodes);
    // random parent for each node among earlier nodes on the rightmost path
    let mut depths = vec![0u8];
    for _ in 1..n {
        let last = *depths.last().unwrap();
        depths.push(rng.gen_range(1..=last + 1));
    }
    let labels: Vec<&str> = (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
    build(&depths, &labels)
}

/// Valid subset pairs of two shapes that cannot be extended by one more
/// matched pair. Under unit costs every extension lowers the cost, so the
/// optimum is attained at one of these.
pub fn maximal_mappings(s1: &[u8], s2: &[u8]) -> Vec<(u32, u32)> {
    let dummy1 = vec!["x"; s1.len()];
    let dummy2 = vec!["x"; s2.len()];
    let a = Pre::new(&build(s1, &dummy1));
    let b = Pre::new(&build(s2, &dummy2));
    let keys1: Vec<Vec<u8>> = (0..1u32 << a.len()).map(|m| a.induced_shape(m)).collect();
    let keys2: Vec<Vec<u8>> = (0..1u32 << b.len()).map(|m| b.induced_shape(m)).collect();
    let mut valid = HashSet::new();
    for m1 in 0..1u32 << a.len() {
        for m2 in 0..1u32 << b.len() {
            if keys1[m1 as usize] == keys2[m2 as usize] {
                valid.insert((m1, m2));
            }
        }
    }
    let rank = |mask: u32, i: usize| (mask & ((1u32 << i) - 1)).count_ones();
    let mut out: Vec<(u32, u32)> = valid
        .iter()
        .copied()
        .filter(|&(m1, m2)| {
            !(0..a.len()).any(|u| {
                m1 & (1 << u) == 0
                    && (0..b.len()).any(|v| {
                        m2 & (1 << v) == 0
                            && rank(m1, u) == rank(m2, v)
                            && valid.contains(&(m1 | 1 << u, m2 | 1 << v))
                    })
            })
        })
        .collect();
    out.sort_unstable();
    out
}

/// Labels of the kept nodes packed two bits each (codes 1..=3).
pub fn packed_labels(codes: &[u8], mask: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    for (i, &c) in codes.iter().enumerate() {
        if mask & (1 << i) != 0 {
            out |= u32::from(c) << (2 * k);
            k += 1;
        }
    }
    out
}

/// Number of differing positions between two packed label lists of equal
/// length.
pub fn packed_mismatches(x: u32, y: u32) -> u32 {
    let d = x ^ y;
    ((d | (d >> 1)) & 0x5555_5555).count_ones()
}
