//! Operator table for statement expressions.
//!
//! Lean-4-like ordering: `↔` loosest, then `→` (right), `∨`, `∧`/`×`
//! (right), comparisons, additive (left), multiplicative (left), `^`
//! (right). Application binds tighter than every operator.

/// Associativity of an infix operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug)]
pub struct InfixOp {
    /// Canonical label head.
    pub head: &'static str,
    pub precedence: u8,
    pub assoc: Assoc,
}

impl InfixOp {
    /// Left and right binding powers for the Pratt loop.
    pub fn binding_power(&self) -> (u8, u8) {
        match self.assoc {
            Assoc::Left => (self.precedence, self.precedence + 1),
            Assoc::Right => (self.precedence, self.precedence),
        }
    }
}

const fn op(head: &'static str, precedence: u8, assoc: Assoc) -> InfixOp {
    InfixOp {
        head,
        precedence,
        assoc,
    }
}

/// `(spelling, operator)`; ASCII spellings map onto the Unicode head.
pub const INFIX: &[(&str, InfixOp)] = &[
    ("↔", op("↔", 20, Assoc::Left)),
    ("<->", op("↔", 20, Assoc::Left)),
    ("→", op("→", 25, Assoc::Right)),
    ("->", op("→", 25, Assoc::Right)),
    ("∨", op("∨", 30, Assoc::Right)),
    ("∧", op("∧", 35, Assoc::Right)),
    ("×", op("×", 35, Assoc::Right)),
    ("=", op("=", 50, Assoc::Left)),
    ("≠", op("≠", 50, Assoc::Left)),
    ("!=", op("≠", 50, Assoc::Left)),
    ("<", op("<", 50, Assoc::Left)),
    (">", op(">", 50, Assoc::Left)),
    ("≤", op("≤", 50, Assoc::Left)),
    ("<=", op("≤", 50, Assoc::Left)),
    ("≥", op("≥", 50, Assoc::Left)),
    (">=", op("≥", 50, Assoc::Left)),
    ("∈", op("∈", 50, Assoc::Left)),
    ("∉", op("∉", 50, Assoc::Left)),
    ("∣", op("∣", 50, Assoc::Left)),
    ("+", op("+", 65, Assoc::Left)),
    ("-", op("-", 65, Assoc::Left)),
    ("*", op("*", 70, Assoc::Left)),
    ("/", op("/", 70, Assoc::Left)),
    ("%", op("%", 70, Assoc::Left)),
    ("^", op("^", 75, Assoc::Right)),
];

/// Operand binding power of `¬`.
pub const NOT_BP: u8 = 40;
/// Operand binding power of prefix `-`.
pub const NEG_BP: u8 = 75;

/// Binder-predicate operators accepted in `∀ x ∈ s, ...` style binders.
pub const BINDER_PREDICATES: &[&str] = &["∈", "∉", "<", ">", "≤", "≥", "≠"];

pub fn infix(spelling: &str) -> Option<&'static InfixOp> {
    INFIX.iter().find(|(s, _)| *s == spelling).map(|(_, op)| op)
}

/// Infix operator by canonical head.
pub fn infix_by_head(head: &str) -> Option<&'static InfixOp> {
    INFIX.iter().find(|(_, op)| op.head == head).map(|(_, op)| op)
}

pub fn prefix_head(spelling: &str) -> Option<&'static str> {
    match spelling {
        "¬" => Some("¬"),
        "-" => Some("-"),
        "↑" => Some("↑"),
        _ => None,
    }
}
