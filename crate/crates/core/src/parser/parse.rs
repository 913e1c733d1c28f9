use thiserror::Error;

use super::ast::{BinderExpr, BinderGroup, BinderKind, Expr, StatementAst, ANONYMOUS};
use super::grammar::{self, BINDER_PREDICATES, NEG_BP, NOT_BP};
use super::lexer::{tokenize, tokenize_partial, LexError, Span, Token, TokenKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("expected {} at {span}, found {}", .expected.join(" or "), .found.as_deref().unwrap_or("end of input"))]
pub struct ParseError {
    pub span: Span,
    pub expected: Vec<&'static str>,
    pub found: Option<String>,
}

/// Either stage of statement parsing failing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => e.span,
            SyntaxError::Parse(e) => e.span,
        }
    }
}

/// Parses a `theorem`/`lemma`/`example` declaration or a bare type
/// expression. Anything after a top-level `:=` is discarded.
pub fn parse_statement(source: &str) -> Result<StatementAst, SyntaxError> {
    let (mut tokens, err) = tokenize_partial(source);
    if let Some(err) = err {
        // characters inside a discarded proof are not our concern
        match tokens.iter().position(|t| t.is(TokenKind::Punctuation, ":=") && !inside_let(&tokens, t)) {
            Some(cut) => tokens.truncate(cut + 1),
            None => return Err(err.into()),
        }
    }
    let mut p = Parser::new(&tokens, source.len());
    Ok(p.statement()?)
}

/// Parses a single expression spanning the whole input.
pub fn parse_expr(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut p = Parser::new(&tokens, source.len());
    let e = p.expr(0)?;
    p.expect_end()?;
    Ok(e)
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    eof: usize,
    /// Inside a `let` value a line break ends the expression.
    newline_stops: bool,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], eof: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            eof,
            newline_stops: false,
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_is(&self, kind: TokenKind, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(kind, text))
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                span: t.span,
                expected,
                found: Some(t.text.clone()),
            },
            None => ParseError {
                span: Span::new(self.eof, self.eof),
                expected,
                found: None,
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, text: &'static str) -> PResult<&'a Token> {
        if self.peek_is(kind, text) {
            Ok(self.bump())
        } else {
            Err(self.error(vec![text]))
        }
    }

    fn eat(&mut self, kind: TokenKind, text: &str) -> bool {
        if self.peek_is(kind, text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error(vec!["end of input"])),
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            _ => Err(self.error(vec!["identifier"])),
        }
    }

    fn at_stop(&self) -> bool {
        match self.peek() {
            None => true,
            Some(t) => self.newline_stops && t.newline_before,
        }
    }

    fn statement(&mut self) -> PResult<StatementAst> {
        let name = if self.eat(TokenKind::Keyword, "theorem") || self.eat(TokenKind::Keyword, "lemma")
        {
            Some(self.ident()?)
        } else if self.eat(TokenKind::Keyword, "example") {
            None
        } else {
            let body = self.expr(0)?;
            self.proof_tail()?;
            return Ok(StatementAst {
                name: None,
                binders: Vec::new(),
                body,
            });
        };
        let mut binders = Vec::new();
        while let Some(kind) = self.peek().and_then(open_binder) {
            self.pos += 1;
            binders.push(self.bracketed_group(kind)?);
        }
        self.expect(TokenKind::Punctuation, ":")?;
        let body = self.expr(0)?;
        self.proof_tail()?;
        Ok(StatementAst {
            name,
            binders,
            body,
        })
    }

    fn proof_tail(&mut self) -> PResult<()> {
        if self.eat(TokenKind::Punctuation, ":=") {
            self.pos = self.tokens.len();
        }
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error(vec![":=", "end of input"])),
        }
    }

    /// Parses the inside of a bracketed binder group; the opening bracket has
    /// been consumed.
    fn bracketed_group(&mut self, (kind, close): (BinderKind, &'static str)) -> PResult<BinderGroup> {
        let group = if kind == BinderKind::Instance {
            // `[inst : C R]` or anonymous `[C R]`
            let named = matches!(
                (self.tokens.get(self.pos), self.tokens.get(self.pos + 1)),
                (Some(a), Some(b)) if a.kind == TokenKind::Identifier && b.is(TokenKind::Punctuation, ":")
            );
            let names = if named {
                let n = self.ident()?;
                self.pos += 1;
                vec![n]
            } else {
                vec![ANONYMOUS.to_string()]
            };
            let ty = self.nested(|p| p.expr(0))?;
            BinderGroup {
                names,
                kind,
                ty: Some(ty),
            }
        } else {
            let names = self.names()?;
            self.expect(TokenKind::Punctuation, ":")?;
            let ty = self.nested(|p| p.expr(0))?;
            BinderGroup {
                names,
                kind,
                ty: Some(ty),
            }
        };
        self.expect(TokenKind::Bracket, close)?;
        Ok(group)
    }

    fn names(&mut self) -> PResult<Vec<String>> {
        let mut names = vec![self.ident()?];
        while self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) {
            names.push(self.ident()?);
        }
        Ok(names)
    }

    /// Runs `f` with newline termination switched off (inside brackets).
    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let saved = std::mem::replace(&mut self.newline_stops, false);
        let out = f(self);
        self.newline_stops = saved;
        out
    }

    pub(crate) fn expr(&mut self, min_bp: u8) -> PResult<Expr> {
        let mut lhs = self.prefix()?;
        loop {
            if self.at_stop() {
                break;
            }
            let t = self.peek().expect("not at end");
            if t.kind != TokenKind::Operator {
                break;
            }
            let Some(op) = grammar::infix(&t.text) else {
                break;
            };
            let (l_bp, r_bp) = op.binding_power();
            if l_bp < min_bp {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(r_bp)?;
            lhs = Expr::Binary(op.head, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> PResult<Expr> {
        let Some(t) = self.peek() else {
            return Err(self.error(vec!["expression"]));
        };
        match (t.kind, t.text.as_str()) {
            (TokenKind::Operator, "¬") => {
                self.pos += 1;
                Ok(Expr::Unary("¬", Box::new(self.expr(NOT_BP)?)))
            }
            (TokenKind::Operator, "-") => {
                self.pos += 1;
                Ok(Expr::Unary("-", Box::new(self.expr(NEG_BP)?)))
            }
            (TokenKind::Operator, "∀") => self.binder_expr("∀"),
            (TokenKind::Operator, "∃") => self.binder_expr("∃"),
            (TokenKind::Operator, "∑") => self.binder_expr("∑"),
            (TokenKind::Operator, "∏") => self.binder_expr("∏"),
            (TokenKind::Operator, "λ") | (TokenKind::BinderKeyword, "fun") => {
                self.binder_expr("λ")
            }
            (TokenKind::BinderKeyword, "let") => self.let_expr(),
            _ => self.application(),
        }
    }

    fn binder_expr(&mut self, op: &'static str) -> PResult<Expr> {
        self.pos += 1;
        let mut groups = Vec::new();
        let mut pred = None;
        if self.peek().and_then(open_binder).is_some() {
            while let Some(kind) = self.peek().and_then(open_binder) {
                self.pos += 1;
                groups.push(self.bracketed_group(kind)?);
            }
        } else {
            let names = self.names()?;
            let mut ty = None;
            if self.eat(TokenKind::Punctuation, ":") {
                ty = Some(self.expr(0)?);
            } else if let Some(p) = self.binder_predicate(op) {
                self.pos += 1;
                pred = Some((p, Box::new(self.expr(0)?)));
            }
            groups.push(BinderGroup {
                names,
                kind: BinderKind::Explicit,
                ty,
            });
        }
        let lambda = op == "λ";
        let sep_ok = self.eat(TokenKind::Punctuation, ",")
            || (lambda
                && (self.eat(TokenKind::Punctuation, "=>") || self.eat(TokenKind::Punctuation, "↦")));
        if !sep_ok {
            return Err(self.error(if lambda { vec!["=>", "↦", ","] } else { vec![","] }));
        }
        let body = self.expr(0)?;
        Ok(Expr::Binder(BinderExpr {
            op,
            groups,
            pred,
            body: Box::new(body),
        }))
    }

    /// Predicate operator allowed after the bound names of `op`.
    fn binder_predicate(&self, op: &str) -> Option<&'static str> {
        let t = self.peek()?;
        if op == "∑" || op == "∏" {
            return (t.is(TokenKind::Operator, "∈") || t.is(TokenKind::Keyword, "in")).then_some("∈");
        }
        if op == "λ" || t.kind != TokenKind::Operator {
            return None;
        }
        let head = grammar::infix(&t.text)?.head;
        BINDER_PREDICATES.iter().find(|&&p| p == head).copied()
    }

    fn let_expr(&mut self) -> PResult<Expr> {
        self.pos += 1;
        let name = self.ident()?;
        let ty = if self.eat(TokenKind::Punctuation, ":") {
            Some(Box::new(self.expr(0)?))
        } else {
            None
        };
        self.expect(TokenKind::Punctuation, ":=")?;
        let saved = std::mem::replace(&mut self.newline_stops, true);
        let value = self.expr(0);
        self.newline_stops = saved;
        let value = value?;
        if !self.eat(TokenKind::Punctuation, ";") && !self.peek().is_some_and(|t| t.newline_before) {
            return Err(self.error(vec![";", "line break"]));
        }
        let body = self.expr(0)?;
        Ok(Expr::Let {
            name,
            ty,
            value: Box::new(value),
            body: Box::new(body),
        })
    }

    fn application(&mut self) -> PResult<Expr> {
        let head = self.argument()?;
        if matches!(head, Expr::Num(_)) {
            return Ok(head);
        }
        let mut args = Vec::new();
        while !self.at_stop() && starts_argument(self.peek().expect("not at end")) {
            args.push(self.argument()?);
        }
        Ok(if args.is_empty() {
            head
        } else {
            Expr::App(Box::new(head), args)
        })
    }

    /// An application argument: atom with postfix projections, or `↑arg`.
    fn argument(&mut self) -> PResult<Expr> {
        if self.eat(TokenKind::Operator, "↑") {
            return Ok(Expr::Unary("↑", Box::new(self.argument()?)));
        }
        let mut e = self.atom()?;
        while let Some(t) = self.peek() {
            let adjacent = self.tokens[self.pos - 1].span.end == t.span.start;
            if t.kind == TokenKind::Punctuation && t.text.starts_with('.') && adjacent {
                self.pos += 1;
                e = Expr::Proj(Box::new(e), t.text[1..].to_string());
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let Some(t) = self.peek() else {
            return Err(self.error(vec!["expression"]));
        };
        match t.kind {
            TokenKind::Identifier => {
                self.pos += 1;
                Ok(Expr::Ident(t.text.clone()))
            }
            TokenKind::Numeral => {
                self.pos += 1;
                Ok(Expr::Num(t.text.clone()))
            }
            TokenKind::Bracket if t.text == "(" => {
                self.pos += 1;
                self.nested(|p| {
                    let first = p.expr(0)?;
                    if p.eat(TokenKind::Punctuation, ",") {
                        let mut items = vec![first, p.expr(0)?];
                        while p.eat(TokenKind::Punctuation, ",") {
                            items.push(p.expr(0)?);
                        }
                        p.expect(TokenKind::Bracket, ")")?;
                        Ok(Expr::Tuple(items))
                    } else if p.eat(TokenKind::Punctuation, ":") {
                        let ty = p.expr(0)?;
                        p.expect(TokenKind::Bracket, ")")?;
                        Ok(Expr::Ascription(Box::new(first), Box::new(ty)))
                    } else if p.peek_is(TokenKind::Bracket, ")") {
                        p.pos += 1;
                        Ok(Expr::Paren(Box::new(first)))
                    } else {
                        Err(p.error(vec![")", ",", ":", "operator"]))
                    }
                })
            }
            TokenKind::Bracket if t.text == "⟨" => {
                self.pos += 1;
                self.nested(|p| {
                    let mut items = vec![p.expr(0)?];
                    while p.eat(TokenKind::Punctuation, ",") {
                        items.push(p.expr(0)?);
                    }
                    p.expect(TokenKind::Bracket, "⟩")?;
                    Ok(Expr::AnonCtor(items))
                })
            }
            _ => Err(self.error(vec!["expression"])),
        }
    }
}

/// True if the `:=` token `t` belongs to a `let` rather than the declaration.
fn inside_let(tokens: &[Token], t: &Token) -> bool {
    let idx = tokens.iter().position(|x| std::ptr::eq(x, t)).expect("token from slice");
    let mut depth = 0i32;
    for prev in tokens[..idx].iter().rev() {
        match (prev.kind, prev.text.as_str()) {
            (TokenKind::Bracket, ")" | "}" | "]" | "⟩" | "⦄") => depth += 1,
            (TokenKind::Bracket, _) => depth -= 1,
            (TokenKind::BinderKeyword, "let") if depth == 0 => return true,
            (TokenKind::Punctuation, ":=" | ";") if depth == 0 => return false,
            _ => {}
        }
    }
    false
}

fn open_binder(t: &Token) -> Option<(BinderKind, &'static str)> {
    if t.kind != TokenKind::Bracket {
        return None;
    }
    match t.text.as_str() {
        "(" => Some((BinderKind::Explicit, ")")),
        "{" => Some((BinderKind::Implicit, "}")),
        "⦃" => Some((BinderKind::Implicit, "⦄")),
        "[" => Some((BinderKind::Instance, "]")),
        _ => None,
    }
}

fn starts_argument(t: &Token) -> bool {
    match t.kind {
        TokenKind::Identifier | TokenKind::Numeral => true,
        TokenKind::Bracket => t.text == "(" || t.text == "⟨",
        TokenKind::Operator => t.text == "↑",
        _ => false,
    }
}
