//! Quantifier-free formula trees, their lexer, a precedence-climbing parser
//! shared by the propositional and clausal languages, and a printer that
//! emits the minimal parenthesization needed to parse back the same tree.
//!
//! Precedence, tightest first: `~`, `&`, `|`, `->` (right associative),
//! `<->` (left associative).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula<A> {
    True,
    False,
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Iff(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    pub fn atom(a: A) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Self>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Self>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Rebuilds the tree with every atom transformed by `f`.
    pub fn try_map<B, E>(&self, f: &mut impl FnMut(&A) -> Result<B, E>) -> Result<Formula<B>, E> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(f(a)?),
            Formula::Not(x) => Formula::not(x.try_map(f)?),
            Formula::And(x, y) => Formula::and(x.try_map(f)?, y.try_map(f)?),
            Formula::Or(x, y) => Formula::or(x.try_map(f)?, y.try_map(f)?),
            Formula::Implies(x, y) => Formula::implies(x.try_map(f)?, y.try_map(f)?),
            Formula::Iff(x, y) => Formula::iff(x.try_map(f)?, y.try_map(f)?),
        })
    }

    /// Visits every atom occurrence, left to right.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(x) => x.for_each_atom(f),
            Formula::And(x, y) | Formula::Or(x, y) | Formula::Implies(x, y) | Formula::Iff(x, y) => {
                x.for_each_atom(f);
                y.for_each_atom(f);
            }
        }
    }

    /// Truth value under the valuation `value`.
    pub fn eval<E>(&self, value: &mut impl FnMut(&A) -> Result<bool, E>) -> Result<bool, E> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => value(a)?,
            Formula::Not(x) => !x.eval(value)?,
            Formula::And(x, y) => x.eval(value)? & y.eval(value)?,
            Formula::Or(x, y) => x.eval(value)? | y.eval(value)?,
            Formula::Implies(x, y) => !x.eval(value)? | y.eval(value)?,
            Formula::Iff(x, y) => x.eval(value)? == y.eval(value)?,
        })
    }

    /// `Some((atom, positive))` when the formula is an atom or a negated atom.
    pub fn as_literal(&self) -> Option<(&A, bool)> {
        match self {
            Formula::Atom(a) => Some((a, true)),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => Some((a, false)),
                _ => None,
            },
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }
}

impl<A: fmt::Display> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child<A: fmt::Display>(
            f: &mut fmt::Formatter<'_>,
            x: &Formula<A>,
            parens: bool,
        ) -> fmt::Result {
            if parens {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        let p = self.precedence();
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => {
                write!(f, "~")?;
                child(f, x, x.precedence() < 5)
            }
            Formula::Implies(x, y) => {
                child(f, x, x.precedence() <= p)?;
                write!(f, " -> ")?;
                child(f, y, y.precedence() < p)
            }
            Formula::And(x, y) | Formula::Or(x, y) | Formula::Iff(x, y) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    _ => "<->",
                };
                child(f, x, x.precedence() < p)?;
                write!(f, " {op} ")?;
                child(f, y, y.precedence() <= p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Not,
    And,
    Or,
    Implies,
    Iff,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Not => write!(f, "`~`"),
            Tok::And => write!(f, "`&`"),
            Tok::Or => write!(f, "`|`"),
            Tok::Implies => write!(f, "`->`"),
            Tok::Iff => write!(f, "`<->`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

pub(crate) fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

/// Splits `text` into tokens tagged with their 0-based character column.
/// The final `End` token sits one past the last character.
pub(crate) fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '~' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(parse_error(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Tokens {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Tokens {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Ok(Self {
            toks: lex(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub(crate) fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn next(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> Error {
        parse_error(self.column(), format!("expected {expected}, found {}", self.peek()))
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// `a, b, c` inside parentheses; the opening `(` is already consumed.
    pub(crate) fn ident_list_until_rparen(&mut self) -> Result<Vec<String>> {
        let mut items = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            items.push(self.ident()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(items)
    }

    /// Parses a formula, delegating atom positions to `atom`.
    pub(crate) fn formula<A>(&mut self, atom: &mut impl FnMut(&mut Tokens) -> Result<A>) -> Result<Formula<A>> {
        let mut left = self.implication(atom)?;
        while self.eat(&Tok::Iff) {
            let right = self.implication(atom)?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication<A>(&mut self, atom: &mut impl FnMut(&mut Tokens) -> Result<A>) -> Result<Formula<A>> {
        let left = self.disjunction(atom)?;
        if self.eat(&Tok::Implies) {
            let right = self.implication(atom)?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction<A>(&mut self, atom: &mut impl FnMut(&mut Tokens) -> Result<A>) -> Result<Formula<A>> {
        let mut left = self.conjunction(atom)?;
        while self.eat(&Tok::Or) {
            let right = self.conjunction(atom)?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction<A>(&mut self, atom: &mut impl FnMut(&mut Tokens) -> Result<A>) -> Result<Formula<A>> {
        let mut left = self.unary(atom)?;
        while self.eat(&Tok::And) {
            let right = self.unary(atom)?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary<A>(&mut self, atom: &mut impl FnMut(&mut Tokens) -> Result<A>) -> Result<Formula<A>> {
        match self.peek() {
            Tok::Not => {
                self.next();
                Ok(Formula::not(self.unary(atom)?))
            }
            Tok::LParen => {
                self.next();
                let inner = self.formula(atom)?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(s) if s == "true" => {
                self.next();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.next();
                Ok(Formula::False)
            }
            Tok::Ident(_) => Ok(Formula::Atom(atom(self)?)),
            _ => Err(self.unexpected("formula")),
        }
    }
}
