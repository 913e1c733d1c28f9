//! Maximum pseudometrics on finite instances.
//!
//! An instance gives points `X`, an upper bound `b(x, y)` in `[0, ∞]` and
//! constraints `((x, y), (u, v))` requiring `d(x, y) ≤ d(u, v)`. The family
//! of pseudometrics meeting all bounds and constraints always contains the
//! zero table and has a pointwise greatest member, which
//! [`solve_max_pseudometric`] computes as the limit of lowering steps that
//! every member must already satisfy.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{CheckedAdd, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Non-negative rational or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    Finite(Rational64),
    Infinite,
}

impl Ext {
    pub fn zero() -> Ext {
        Ext::Finite(Rational64::zero())
    }

    pub fn int(n: i64) -> Ext {
        Ext::Finite(Rational64::from_integer(n))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Finite(_))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp(b),
            (Ext::Finite(_), Ext::Infinite) => Ordering::Less,
            (Ext::Infinite, Ext::Finite(_)) => Ordering::Greater,
            (Ext::Infinite, Ext::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Ext {
    type Output = Ext;

    /// `∞ + r = ∞`. Finite sums that overflow `i64` are treated as `∞`,
    /// which only matters for bounds near the integer limit.
    fn add(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.checked_add(&b).map_or(Ext::Infinite, Ext::Finite),
            _ => Ext::Infinite,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(r) => write!(f, "{r}"),
            Ext::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid value {0:?}; expected a non-negative number, \"p/q\" or \"inf\"")]
pub struct ExtParseError(pub String);

impl FromStr for Ext {
    type Err = ExtParseError;

    /// Accepts `inf`, `∞`, integers, decimals and fractions `p/q`.
    fn from_str(s: &str) -> Result<Ext, ExtParseError> {
        let err = || ExtParseError(s.to_string());
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Ext::Infinite);
        }
        let value = if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| err())?;
            let q: i64 = q.trim().parse().map_err(|_| err())?;
            if q == 0 {
                return Err(err());
            }
            Rational64::new(p, q)
        } else {
            decimal(s).ok_or_else(err)?
        };
        if value < Rational64::zero() {
            return Err(err());
        }
        Ok(Ext::Finite(value))
    }
}

/// Exact value of a decimal literal such as `-2`, `0.25` or `1e3`.
fn decimal(s: &str) -> Option<Rational64> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(d) => (true, d),
        None => (false, mantissa),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: i64 = format!("{int}{frac}").parse().ok()?;
    let scale = exp - i32::try_from(frac.len()).ok()?;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    let r = if scale >= 0 {
        Rational64::from_integer(n.checked_mul(pow)?)
    } else {
        Rational64::new(n, pow)
    };
    Some(if neg { -r } else { r })
}

impl Serialize for Ext {
    /// Integers as JSON numbers, other rationals as `"p/q"`, infinity as
    /// `"inf"`.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::Finite(r) if r.is_integer() => s.serialize_i64(*r.numer()),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Ext, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match &v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(de::Error::custom(ExtParseError(other.to_string()))),
        };
        text.parse().map_err(de::Error::custom)
    }
}

/// Square table over `n` points, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    n: usize,
    cells: Vec<Ext>,
}

impl Table {
    pub fn filled(n: usize, value: Ext) -> Table {
        Table {
            n,
            cells: vec![value; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Ext>>) -> Result<Table, InstanceError> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(InstanceError::NotSquare {
                row: i,
                len: r.len(),
                expected: n,
            });
        }
        Ok(Table {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> Vec<Vec<Ext>> {
        self.cells.chunks(self.n.max(1)).map(<[Ext]>::to_vec).take(self.n).collect()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Ext {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Ext) {
        self.cells[i * self.n + j] = v;
    }

    /// Lowers the entry to `v` if that is smaller; reports a change.
    fn lower(&mut self, i: usize, j: usize, v: Ext) -> bool {
        if v < self.get(i, j) {
            self.set(i, j, v);
            true
        } else {
            false
        }
    }

    /// True if every entry is at most the matching entry of `other`.
    pub fn le(&self, other: &Table) -> bool {
        self.n == other.n && self.cells.iter().zip(&other.cells).all(|(a, b)| a <= b)
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Table, D::Error> {
        Table::from_rows(Vec::deserialize(d)?).map_err(de::Error::custom)
    }
}

/// Constraint `d(x, y) ≤ d(u, v)` by point indices.
pub type Constraint = ((usize, usize), (usize, usize));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteInstance {
    pub points: Vec<String>,
    pub bound: Table,
    #[serde(default)]
    pub constraints: Vec<[[usize; 2]; 2]>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("bound table is {table}x{table} but there are {points} points")]
    SizeMismatch { table: usize, points: usize },
    #[error("constraint {index} refers to point {point}, but there are only {points}")]
    ConstraintRange {
        index: usize,
        point: usize,
        points: usize,
    },
    #[error("invalid instance JSON: {0}")]
    Json(String),
}

impl FiniteInstance {
    pub fn new(
        points: Vec<String>,
        bound: Table,
        constraints: Vec<Constraint>,
    ) -> Result<FiniteInstance, InstanceError> {
        let inst = FiniteInstance {
            points,
            bound,
            constraints: constraints
                .into_iter()
                .map(|((x, y), (u, v))| [[x, y], [u, v]])
                .collect(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<FiniteInstance, InstanceError> {
        let inst: FiniteInstance =
            serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.points.len();
        if self.bound.len() != n {
            return Err(InstanceError::SizeMismatch {
                table: self.bound.len(),
                points: n,
            });
        }
        for (index, c) in self.constraints.iter().enumerate() {
            if let Some(&point) = c.iter().flatten().find(|&&p| p >= n) {
                return Err(InstanceError::ConstraintRange {
                    index,
                    point,
                    points: n,
                });
            }
        }
        Ok(())
    }

    pub fn constraint_pairs(&self) -> impl Iterator<Item = Constraint> + '_ {
        self.constraints.iter().map(|[[x, y], [u, v]]| ((*x, *y), (*u, *v)))
    }
}

/// One pass of Floyd–Warshall; reports whether anything changed.
fn close_triangles(d: &mut Table) -> bool {
    let n = d.len();
    let mut changed = false;
    for k in 0..n {
        for i in 0..n {
            let ik = d.get(i, k);
            if !ik.is_finite() {
                continue;
            }
            for j in 0..n {
                changed |= d.lower(i, j, ik + d.get(k, j));
            }
        }
    }
    changed
}

fn zero_diagonal(d: &mut Table) -> bool {
    let mut changed = false;
    for i in 0..d.len() {
        changed |= d.lower(i, i, Ext::zero());
    }
    changed
}

fn symmetrize(d: &mut Table) -> bool {
    let mut changed = false;
    for i in 0..d.len() {
        for j in 0..i {
            let m = d.get(i, j).min(d.get(j, i));
            changed |= d.lower(i, j, m);
            changed |= d.lower(j, i, m);
        }
    }
    changed
}

/// All-pairs shortest paths over symmetric edge weights; pairs without a
/// finite path stay at `∞`.
pub fn shortest_path_pseudometric(weights: &Table) -> Table {
    let mut d = weights.clone();
    zero_diagonal(&mut d);
    symmetrize(&mut d);
    close_triangles(&mut d);
    d
}

/// Greatest table meeting the pseudometric axioms, `d ≤ b` and every
/// constraint. Panics if the fixed point is not reached within
/// `|X|²·(|T|+|X|)` passes, which would indicate a bug.
pub fn solve_max_pseudometric(instance: &FiniteInstance) -> Table {
    let n = instance.points.len();
    let t = instance.constraints.len();
    let max_passes = (n * n * (t + n)).max(1);
    let mut d = instance.bound.clone();
    for _ in 0..=max_passes {
        let mut changed = zero_diagonal(&mut d);
        changed |= symmetrize(&mut d);
        changed |= close_triangles(&mut d);
        for ((x, y), (u, v)) in instance.constraint_pairs() {
            let target = d.get(u, v);
            changed |= d.lower(x, y, target);
        }
        if !changed {
            return d;
        }
    }
    panic!("no fixed point after {max_passes} passes");
}

/// A condition the candidate table violates, with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Diagonal { x: usize },
    Symmetry { x: usize, y: usize },
    Triangle { x: usize, y: usize, z: usize },
    Bound { x: usize, y: usize },
    Constraint { x: usize, y: usize, u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { x } => write!(f, "d({x},{x}) is not 0"),
            Violation::Symmetry { x, y } => write!(f, "d({x},{y}) differs from d({y},{x})"),
            Violation::Triangle { x, y, z } => {
                write!(f, "d({x},{z}) exceeds d({x},{y}) + d({y},{z})")
            }
            Violation::Bound { x, y } => write!(f, "d({x},{y}) exceeds b({x},{y})"),
            Violation::Constraint { x, y, u, v } => write!(f, "d({x},{y}) exceeds d({u},{v})"),
        }
    }
}

/// Every violated condition; empty exactly when the candidate belongs to
/// the instance's family.
pub fn verify_membership(instance: &FiniteInstance, candidate: &Table) -> Vec<Violation> {
    let n = instance.points.len();
    assert_eq!(candidate.len(), n, "candidate must cover the instance's points");
    let d = |i, j| candidate.get(i, j);
    let mut out = Vec::new();
    for x in 0..n {
        if d(x, x) != Ext::zero() {
            out.push(Violation::Diagonal { x });
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if d(x, y) != d(y, x) {
                out.push(Violation::Symmetry { x, y });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if d(x, z) > d(x, y) + d(y, z) {
                    out.push(Violation::Triangle { x, y, z });
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if d(x, y) > instance.bound.get(x, y) {
                out.push(Violation::Bound { x, y });
            }
        }
    }
    for ((x, y), (u, v)) in instance.constraint_pairs() {
        if d(x, y) > d(u, v) {
            out.push(Violation::Constraint { x, y, u, v });
        }
    }
    out
}
