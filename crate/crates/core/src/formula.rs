//! Propositional formulas: AST, parser, canonical rendering and the
//! canonical total order used wherever a deterministic representative is
//! needed.
//!
//! Text syntax (highest to lowest precedence):
//!
//! | connective    | token  | associativity |
//! |---------------|--------|---------------|
//! | negation      | `!`    | prefix        |
//! | conjunction   | `&`    | left          |
//! | disjunction   | `\|`   | left          |
//! | implication   | `->`   | right         |
//! | biconditional | `<->`  | right         |
//!
//! `F` and `T` are the falsity and truth constants. Atoms match
//! `[a-z][A-Za-z0-9_]*`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Falsity,
    Truth,
}

impl Formula {
    /// Builds an atom, checking the identifier against the atom alphabet.
    pub fn atom(name: impl Into<String>) -> Result<Formula, ParseError> {
        let name = name.into();
        if is_atom_name(&name) {
            Ok(Formula::Atom(name))
        } else {
            Err(ParseError {
                offset: 0,
                expected: vec!["atom"],
                found: Some(name),
            })
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction of `parts` folded left after sorting them canonically.
    /// Returns `None` for an empty input.
    pub fn conjoin<'a, I>(parts: I) -> Option<Formula>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        let mut parts: Vec<&Formula> = parts.into_iter().collect();
        parts.sort();
        parts.dedup();
        let mut iter = parts.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, f| Formula::and(acc, f.clone())))
    }

    /// Names of all atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Neg(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Falsity | Formula::Truth => {}
        }
    }

    /// Canonical text; `parse_formula(&f.render()) == Ok(f)`.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.rendered_len());
        self.write_to(&mut out);
        out
    }

    /// Byte length of [`Formula::render`] without allocating.
    pub fn rendered_len(&self) -> usize {
        match self {
            Formula::Atom(name) => name.len(),
            Formula::Neg(f) => 1 + f.rendered_len(),
            Formula::And(a, b) | Formula::Or(a, b) => 2 + 3 + a.rendered_len() + b.rendered_len(),
            Formula::Imp(a, b) => 2 + 4 + a.rendered_len() + b.rendered_len(),
            Formula::Iff(a, b) => 2 + 5 + a.rendered_len() + b.rendered_len(),
            Formula::Falsity | Formula::Truth => 1,
        }
    }

    fn write_to(&self, out: &mut String) {
        let binary = |out: &mut String, a: &Formula, op: &str, b: &Formula| {
            out.push('(');
            a.write_to(out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            b.write_to(out);
            out.push(')');
        };
        match self {
            Formula::Atom(name) => out.push_str(name),
            Formula::Neg(f) => {
                out.push('!');
                f.write_to(out);
            }
            Formula::And(a, b) => binary(out, a, "&", b),
            Formula::Or(a, b) => binary(out, a, "|", b),
            Formula::Imp(a, b) => binary(out, a, "->", b),
            Formula::Iff(a, b) => binary(out, a, "<->", b),
            Formula::Falsity => out.push('F'),
            Formula::Truth => out.push('T'),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Canonical order: shorter rendering first, then bytewise on the rendering.
pub fn formula_order(a: &Formula, b: &Formula) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    a.rendered_len()
        .cmp(&b.rendered_len())
        .then_with(|| a.render().cmp(&b.render()))
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        formula_order(self, other)
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}{}", .expected.join(" or "), found_suffix(.found))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: Option<String>,
}

fn found_suffix(found: &Option<String>) -> String {
    match found {
        Some(tok) => format!(", found `{tok}`"),
        None => ", found end of input".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    Falsity,
    Truth,
    LParen,
    RParen,
}

impl Token {
    fn text(&self) -> String {
        match self {
            Token::Ident(name) => name.clone(),
            Token::Not => "!".into(),
            Token::And => "&".into(),
            Token::Or => "|".into(),
            Token::Imp => "->".into(),
            Token::Iff => "<->".into(),
            Token::Falsity => "F".into(),
            Token::Truth => "T".into(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Token::Iff
            }
            b'F' | b'T' if !bytes.get(i + 1).is_some_and(|b| is_ident_continue(*b)) => {
                if c == b'F' {
                    Token::Falsity
                } else {
                    Token::Truth
                }
            }
            b'a'..=b'z' => {
                let mut end = i + 1;
                while end < bytes.len() && is_ident_continue(bytes[end]) {
                    end += 1;
                }
                let name = text[i..end].to_string();
                i = end - 1;
                Token::Ident(name)
            }
            _ => {
                let found = text[i..].chars().next().map(|ch| ch.to_string());
                return Err(ParseError {
                    offset: i,
                    expected: vec!["atom", "`F`", "`T`", "`!`", "`(`", "binary operator", "`)`"],
                    found,
                });
            }
        };
        i += 1;
        tokens.push((start, tok));
    }
    Ok(tokens)
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

const OPERAND_START: [&str; 5] = ["atom", "`F`", "`T`", "`!`", "`(`"];

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected,
            found: self.peek().map(Token::text),
        }
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.eat(&Token::Iff) {
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error(OPERAND_START.to_vec()));
        };
        match tok {
            Token::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Token::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Token::Falsity => {
                self.pos += 1;
                Ok(Formula::Falsity)
            }
            Token::Truth => {
                self.pos += 1;
                Ok(Formula::Truth)
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error(vec!["binary operator", "`)`"]));
                }
                Ok(inner)
            }
            _ => Err(self.error(OPERAND_START.to_vec())),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let formula = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error(vec!["binary operator", "end of input"]));
    }
    Ok(formula)
}
