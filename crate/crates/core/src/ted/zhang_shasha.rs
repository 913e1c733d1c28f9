//! Zhang–Shasha keyroot dynamic program for ordered tree edit distance,
//! with a backtrace that recovers an optimal node mapping.

use std::ops::Add;

use num_traits::Zero;

use crate::tree::OperatorTree;

/// Numeric type the dynamic program runs over.
pub trait Cost: Copy + Ord + Add<Output = Self> + Zero {}

impl<T: Copy + Ord + Add<Output = T> + Zero> Cost for T {}

/// Postorder flattening of a tree.
pub struct Flat<'a> {
    /// Node labels in postorder.
    pub labels: Vec<&'a str>,
    /// Postorder index of each node's leftmost leaf descendant.
    pub leftmost: Vec<usize>,
    /// Keyroots in increasing postorder.
    pub keyroots: Vec<usize>,
    /// Preorder rank of each postorder node.
    pub preorder: Vec<usize>,
}

impl<'a> Flat<'a> {
    pub fn new(t: &'a OperatorTree) -> Self {
        let n = t.size();
        let mut f = Flat {
            labels: Vec::with_capacity(n),
            leftmost: Vec::with_capacity(n),
            keyroots: Vec::new(),
            preorder: Vec::with_capacity(n),
        };
        let mut pre = 0;
        f.walk(t, &mut pre);
        // a keyroot is the highest node for its leftmost leaf
        let mut seen = vec![false; n];
        for i in (0..n).rev() {
            if !seen[f.leftmost[i]] {
                seen[f.leftmost[i]] = true;
                f.keyroots.push(i);
            }
        }
        f.keyroots.reverse();
        f
    }

    fn walk(&mut self, t: &'a OperatorTree, pre: &mut usize) -> usize {
        let my_pre = *pre;
        *pre += 1;
        let mut first_leaf = None;
        for c in t.children() {
            let lm = self.walk(c, pre);
            first_leaf.get_or_insert(lm);
        }
        let idx = self.labels.len();
        self.labels.push(t.label());
        self.leftmost.push(first_leaf.unwrap_or(idx));
        self.preorder.push(my_pre);
        self.leftmost[idx]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Per-operation costs for the dynamic program.
#[derive(Clone, Copy, Debug)]
pub struct Weights<C> {
    pub delete: C,
    pub insert: C,
    pub relabel: C,
}

/// Reusable scratch buffers.
#[derive(Default)]
pub struct Workspace<C> {
    tree: Vec<C>,
    forest: Vec<C>,
}

impl<C: Cost> Workspace<C> {
    pub fn new() -> Self {
        Workspace {
            tree: Vec::new(),
            forest: Vec::new(),
        }
    }
}

struct Dp<'w, 'a, C> {
    a: &'w Flat<'a>,
    b: &'w Flat<'a>,
    w: Weights<C>,
    ws: &'w mut Workspace<C>,
}

impl<C: Cost> Dp<'_, '_, C> {
    fn rel(&self, i: usize, j: usize) -> C {
        if self.a.labels[i] == self.b.labels[j] {
            C::zero()
        } else {
            self.w.relabel
        }
    }

    fn td(&self, i: usize, j: usize) -> C {
        self.ws.tree[i * self.b.len() + j]
    }

    /// Fills the forest table for the subtree pair `(i, j)` and records the
    /// tree distances it determines. Row/column 0 stand for the empty forest.
    fn forest(&mut self, i: usize, j: usize) {
        let (li, lj) = (self.a.leftmost[i], self.b.leftmost[j]);
        let rows = i - li + 2;
        let cols = j - lj + 2;
        let nb = self.b.len();
        self.ws.forest.clear();
        self.ws.forest.resize(rows * cols, C::zero());
        let fd = |r: usize, c: usize| r * cols + c;
        for r in 1..rows {
            self.ws.forest[fd(r, 0)] = self.ws.forest[fd(r - 1, 0)] + self.w.delete;
        }
        for c in 1..cols {
            self.ws.forest[fd(0, c)] = self.ws.forest[fd(0, c - 1)] + self.w.insert;
        }
        for r in 1..rows {
            let x = li + r - 1;
            for c in 1..cols {
                let y = lj + c - 1;
                let del = self.ws.forest[fd(r - 1, c)] + self.w.delete;
                let ins = self.ws.forest[fd(r, c - 1)] + self.w.insert;
                let best = del.min(ins);
                let m = if self.a.leftmost[x] == li && self.b.leftmost[y] == lj {
                    let v = self.ws.forest[fd(r - 1, c - 1)] + self.rel(x, y);
                    let v = best.min(v);
                    self.ws.tree[x * nb + y] = v;
                    v
                } else {
                    let pr = self.a.leftmost[x] - li;
                    let pc = self.b.leftmost[y] - lj;
                    best.min(self.ws.forest[fd(pr, pc)] + self.td(x, y))
                };
                self.ws.forest[fd(r, c)] = m;
            }
        }
    }

    fn run(&mut self) {
        let n = self.a.len() * self.b.len();
        self.ws.tree.clear();
        self.ws.tree.resize(n, C::zero());
        for ki in 0..self.a.keyroots.len() {
            for kj in 0..self.b.keyroots.len() {
                let (i, j) = (self.a.keyroots[ki], self.b.keyroots[kj]);
                self.forest(i, j);
            }
        }
    }
}

/// Edit distance only.
pub fn distance<C: Cost>(a: &Flat, b: &Flat, w: Weights<C>, ws: &mut Workspace<C>) -> C {
    let mut dp = Dp { a, b, w, ws };
    dp.run();
    dp.td(a.len() - 1, b.len() - 1)
}

/// Edit distance and an optimal mapping as postorder index pairs.
pub fn distance_with_mapping<C: Cost>(
    a: &Flat,
    b: &Flat,
    w: Weights<C>,
) -> (C, Vec<(usize, usize)>) {
    let mut ws = Workspace::new();
    let mut dp = Dp {
        a,
        b,
        w,
        ws: &mut ws,
    };
    dp.run();
    let total = dp.td(a.len() - 1, b.len() - 1);

    let mut mapping = Vec::new();
    let mut stack = vec![(a.len() - 1, b.len() - 1)];
    while let Some((i, j)) = stack.pop() {
        dp.forest(i, j);
        let (li, lj) = (a.leftmost[i], b.leftmost[j]);
        let cols = j - lj + 2;
        let fd = |dp: &Dp<C>, r: usize, c: usize| dp.ws.forest[r * cols + c];
        let (mut r, mut c) = (i - li + 1, j - lj + 1);
        while r > 0 || c > 0 {
            let here = fd(&dp, r, c);
            if r > 0 && here == fd(&dp, r - 1, c) + w.delete {
                r -= 1;
                continue;
            }
            if c > 0 && here == fd(&dp, r, c - 1) + w.insert {
                c -= 1;
                continue;
            }
            let (x, y) = (li + r - 1, lj + c - 1);
            if a.leftmost[x] == li && b.leftmost[y] == lj {
                debug_assert!(here == fd(&dp, r - 1, c - 1) + dp.rel(x, y));
                mapping.push((x, y));
                r -= 1;
                c -= 1;
            } else {
                stack.push((x, y));
                r = a.leftmost[x] - li;
                c = b.leftmost[y] - lj;
            }
        }
    }
    mapping.sort_unstable();
    (total, mapping)
}
