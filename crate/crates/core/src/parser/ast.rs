/// Bracket style of a binder group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinderKind {
    /// `( )`
    Explicit,
    /// `{ }` (also `⦃ ⦄`)
    Implicit,
    /// `[ ]`
    Instance,
}

/// Placeholder name for anonymous instance binders such as `[CommRing R]`.
pub const ANONYMOUS: &str = "_";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinderGroup {
    pub names: Vec<String>,
    pub kind: BinderKind,
    /// Absent for untyped expression binders (`∀ x, ...`).
    pub ty: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ident(String),
    Num(String),
    Paren(Box<Expr>),
    /// `(a, b, ...)`, at least two components.
    Tuple(Vec<Expr>),
    /// `⟨a, b, ...⟩`
    AnonCtor(Vec<Expr>),
    /// `(e : T)`
    Ascription(Box<Expr>, Box<Expr>),
    /// `e.1`, `e.name`; the field is stored without the dot.
    Proj(Box<Expr>, String),
    App(Box<Expr>, Vec<Expr>),
    Unary(&'static str, Box<Expr>),
    Binary(&'static str, Box<Expr>, Box<Expr>),
    Binder(BinderExpr),
    Let {
        name: String,
        ty: Option<Box<Expr>>,
        value: Box<Expr>,
        body: Box<Expr>,
    },
}

/// `∀ ∃ λ ∑ ∏` with their binder list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinderExpr {
    pub op: &'static str,
    pub groups: Vec<BinderGroup>,
    /// Binder predicate such as `∈ s` in `∀ x ∈ s, P`.
    pub pred: Option<(&'static str, Box<Expr>)>,
    pub body: Box<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatementAst {
    /// Declaration name; `None` for `example` and bare expressions.
    pub name: Option<String>,
    pub binders: Vec<BinderGroup>,
    pub body: Expr,
}

impl Expr {
    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_string())
    }

    /// Strips any number of enclosing parentheses.
    pub fn unparen(&self) -> &Expr {
        let mut e = self;
        while let Expr::Paren(inner) = e {
            e = inner;
        }
        e
    }
}
