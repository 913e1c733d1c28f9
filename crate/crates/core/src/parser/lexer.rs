use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Identifier,
    Numeral,
    Operator,
    BinderKeyword,
    Bracket,
    Punctuation,
    Keyword,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
    /// Whether a line break separates this token from the previous one.
    #[serde(skip)]
    pub newline_before: bool,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unrecognized character {found:?} at {span}")]
pub struct LexError {
    pub found: char,
    pub span: Span,
}

const KEYWORDS: [&str; 6] = ["theorem", "lemma", "example", "by", "sorry", "in"];
const BINDER_KEYWORDS: [&str; 2] = ["fun", "let"];

/// Multi-character ASCII spellings, longest first.
const MULTI: [(&str, TokenKind); 7] = [
    ("<->", TokenKind::Operator),
    (":=", TokenKind::Punctuation),
    ("->", TokenKind::Operator),
    ("<=", TokenKind::Operator),
    (">=", TokenKind::Operator),
    ("!=", TokenKind::Operator),
    ("=>", TokenKind::Punctuation),
];

fn single_kind(c: char) -> Option<TokenKind> {
    match c {
        '+' | '-' | '*' | '/' | '^' | '%' | '=' | '<' | '>' | '¬' | '∀' | '∃' | '→' | '↔'
        | '∧' | '∨' | '≠' | '≤' | '≥' | '∈' | '∉' | '∑' | '∏' | '×' | '↑' | 'λ' | '∣' => {
            Some(TokenKind::Operator)
        }
        '(' | ')' | '{' | '}' | '[' | ']' | '⟨' | '⟩' | '⦃' | '⦄' => Some(TokenKind::Bracket),
        ',' | ':' | ';' | '↦' => Some(TokenKind::Punctuation),
        _ => None,
    }
}

fn ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && c != 'λ'
}

fn ident_continue(c: char) -> bool {
    (c.is_alphanumeric() || matches!(c, '_' | '\'' | '!' | '?')) && c != 'λ'
}

/// Splits `source` into tokens. Whitespace and `--` line comments separate
/// tokens and are otherwise dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    match tokenize_partial(source) {
        (tokens, None) => Ok(tokens),
        (_, Some(err)) => Err(err),
    }
}

/// Like [`tokenize`], but returns the tokens read before the first error.
pub fn tokenize_partial(source: &str) -> (Vec<Token>, Option<LexError>) {
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let offset = |i: usize| chars.get(i).map_or(source.len(), |&(o, _)| o);

    let mut tokens = Vec::new();
    let mut i = 0;
    let mut newline = false;
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            newline |= c == '\n';
            i += 1;
            continue;
        }
        if c == '-' && at(i + 1) == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let kind;
        if ident_start(c) {
            i += 1;
            loop {
                match at(i) {
                    Some(c) if ident_continue(c) => i += 1,
                    Some('.') if at(i + 1).is_some_and(ident_start) => i += 2,
                    _ => break,
                }
            }
            let word = &source[offset(start)..offset(i)];
            if matches!(word, "Type" | "Sort") && at(i) == Some('*') {
                i += 1;
            }
            kind = if KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else if BINDER_KEYWORDS.contains(&word) {
                TokenKind::BinderKeyword
            } else {
                TokenKind::Identifier
            };
        } else if c.is_ascii_digit() {
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            if at(i) == Some('.') && at(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
                while at(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
            }
            kind = TokenKind::Numeral;
        } else if c == '.' {
            // projection: `.1`, `.2`, or `.name` after a closing bracket
            i += 1;
            match at(i) {
                Some(d) if d.is_ascii_digit() => {
                    while at(i).is_some_and(|c| c.is_ascii_digit()) {
                        i += 1;
                    }
                }
                Some(d) if ident_start(d) => {
                    while at(i).is_some_and(ident_continue) {
                        i += 1;
                    }
                }
                _ => {
                    let err = LexError {
                        found: '.',
                        span: Span::new(offset(start), offset(start + 1)),
                    };
                    return (tokens, Some(err));
                }
            }
            kind = TokenKind::Punctuation;
        } else if let Some((text, k)) = MULTI
            .iter()
            .find(|(text, _)| source[offset(i)..].starts_with(text))
        {
            i += text.chars().count();
            kind = *k;
        } else if let Some(k) = single_kind(c) {
            i += 1;
            kind = k;
        } else {
            let err = LexError {
                found: c,
                span: Span::new(offset(i), offset(i + 1)),
            };
            return (tokens, Some(err));
        }

        let span = Span::new(offset(start), offset(i));
        tokens.push(Token {
            kind,
            text: source[span.start..span.end].to_string(),
            span,
            newline_before: newline,
        });
        newline = false;
    }
    (tokens, None)
}
