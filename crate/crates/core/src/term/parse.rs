//! Concrete syntax.
//!
//! ```text
//! program    := (definition | term ';')* term?
//! definition := IDENT ':=' term ';'
//! term       := juxta ('>' juxta)*
//! juxta      := count ('/' count)*
//! count      := INT '*' count | postfix
//! postfix    := primary ('^' INT)*
//! primary    := IDENT ('.' INT)? | '(' term ')' | ('tl' | 'tr') '(' term ')'
//! ```
//!
//! `*` and `^` bind tighter than `/`, which binds tighter than `>`. Both
//! binary operators associate to the left. `#` starts a line comment.

use std::fmt;

use thiserror::Error;

use super::ast::{Atom, Rotation, Term};
use super::registry::{AtomRegistry, ConcealError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("count {0} is out of range")]
    BadCount(String),
    #[error("negative count {0}")]
    NegativeCount(i64),
    #[error("term vanishes entirely after removing zero counts")]
    EmptyTerm,
    #[error("no program term in source")]
    NoProgram,
    #[error(transparent)]
    Conceal(#[from] ConcealError),
}

/// Surface expression before count and tilt desugaring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom),
    Next(Box<Expr>, Box<Expr>),
    Juxta(Box<Expr>, Box<Expr>),
    /// `n * x`
    NextCount(i64, Box<Expr>),
    /// `x ^ n`
    JuxtaCount(Box<Expr>, i64),
    /// `tl(x)` (negative) or `tr(x)` (positive) quarter turns.
    Tilt(i32, Box<Expr>),
}

/// Removes every count node. `Ok(None)` means the whole expression vanished
/// (for example `0*Link`).
pub fn desugar_counts(e: &Expr) -> Result<Option<Term>, ParseErrorKind> {
    Ok(match e {
        Expr::Atom(a) => Some(Term::Atom(a.clone())),
        Expr::Next(x, y) => join(desugar_counts(x)?, desugar_counts(y)?, Term::next),
        Expr::Juxta(x, y) => join(desugar_counts(x)?, desugar_counts(y)?, Term::juxta),
        Expr::NextCount(n, x) => repeat(*n, desugar_counts(x)?, Term::next)?,
        Expr::JuxtaCount(x, n) => repeat(*n, desugar_counts(x)?, Term::juxta)?,
        Expr::Tilt(q, x) => desugar_counts(x)?.map(|t| {
            let r = Rotation::quarters(*q);
            t.map_atoms(&mut |a| Atom { rot: a.rot.compose(r), ..a.clone() })
        }),
    })
}

fn join(x: Option<Term>, y: Option<Term>, f: fn(Term, Term) -> Term) -> Option<Term> {
    match (x, y) {
        (Some(x), Some(y)) => Some(f(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

// n*x = x > (n-1)*x, so the result nests to the right.
fn repeat(
    n: i64,
    x: Option<Term>,
    f: fn(Term, Term) -> Term,
) -> Result<Option<Term>, ParseErrorKind> {
    if n < 0 {
        return Err(ParseErrorKind::NegativeCount(n));
    }
    let Some(x) = x else { return Ok(None) };
    if n == 0 {
        return Ok(None);
    }
    let mut acc = x.clone();
    for _ in 1..n {
        acc = f(x.clone(), acc);
    }
    Ok(Some(acc))
}

/// Parses a single term (no definitions) against `reg`.
pub fn parse(src: &str, reg: &AtomRegistry) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.term(reg)?;
    p.expect(Tok::Eof, "end of input")?;
    let pos = p.toks[0].pos;
    lower(&e, pos)
}

/// A parsed source file: the registry extended by its definitions and every
/// top-level term in order. The last term is the program.
#[derive(Clone, Debug)]
pub struct Program {
    pub registry: AtomRegistry,
    pub terms: Vec<Term>,
    /// Names from a `#! inputs: a b` comment, one per Entry in order.
    pub inputs: Vec<String>,
    /// Names from a `#! outputs: s c` comment, one per Exit in order.
    pub outputs: Vec<String>,
}

impl Program {
    pub fn main(&self) -> &Term {
        self.terms.last().expect("program has at least one term")
    }
}

pub fn parse_program(src: &str, reg: &AtomRegistry) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    let mut reg = reg.clone();
    let mut terms = Vec::new();
    loop {
        if p.peek() == &Tok::Eof {
            break;
        }
        if p.peek() == &Tok::Semi {
            p.bump();
            continue;
        }
        let start = p.cur().pos;
        if let (Tok::Ident(name), Tok::Assign) = (p.peek().clone(), p.peek_at(1).clone()) {
            p.bump();
            p.bump();
            let e = p.term(&reg)?;
            let body = lower(&e, start)?;
            reg = reg
                .conceal(&name, body)
                .map_err(|err| ParseError { line: start.0, col: start.1, kind: err.into() })?;
        } else {
            let e = p.term(&reg)?;
            terms.push(lower(&e, start)?);
        }
        match p.peek() {
            Tok::Semi => p.bump(),
            Tok::Eof => break,
            _ => {
                let found = p.cur().clone();
                return Err(found.err(ParseErrorKind::Unexpected {
                    expected: "`;`".into(),
                    found: found.tok.to_string(),
                }));
            }
        }
    }
    if terms.is_empty() {
        let (line, col) = p.cur().pos;
        return Err(ParseError { line, col, kind: ParseErrorKind::NoProgram });
    }
    let pragma = |key: &str| -> Vec<String> {
        src.lines()
            .filter_map(|l| l.trim().strip_prefix("#!")?.trim().strip_prefix(key)?.strip_prefix(':').map(str::to_owned))
            .flat_map(|rest| rest.split_whitespace().map(str::to_owned).collect::<Vec<_>>())
            .collect()
    };
    Ok(Program { registry: reg, terms, inputs: pragma("inputs"), outputs: pragma("outputs") })
}

fn lower(e: &Expr, pos: (usize, usize)) -> Result<Term, ParseError> {
    let err = |kind| ParseError { line: pos.0, col: pos.1, kind };
    desugar_counts(e).map_err(err)?.ok_or_else(|| err(ParseErrorKind::EmptyTerm))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Gt,
    Slash,
    Star,
    Caret,
    LParen,
    RParen,
    Dot,
    Assign,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    pos: (usize, usize),
}

impl Spanned {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.pos.0, col: self.pos.1, kind }
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = (line, col);
        let single = |tok| Spanned { tok, pos };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '>' => out.push(single(Tok::Gt)),
            '/' => out.push(single(Tok::Slash)),
            '*' => out.push(single(Tok::Star)),
            '^' => out.push(single(Tok::Caret)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            '.' => out.push(single(Tok::Dot)),
            ';' => out.push(single(Tok::Semi)),
            ':' if chars.get(i + 1) == Some(&'=') => {
                out.push(single(Tok::Assign));
                i += 2;
                col += 2;
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned { tok: Tok::Int(s), pos });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned { tok: Tok::Ident(s), pos });
                continue;
            }
            other => {
                return Err(ParseError { line, col, kind: ParseErrorKind::BadChar(other) });
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned { tok: Tok::Eof, pos: (line, col) });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn cur(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) {
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let cur = self.cur();
            Err(cur.err(ParseErrorKind::Unexpected {
                expected: what.to_string(),
                found: cur.tok.to_string(),
            }))
        }
    }

    fn term(&mut self, reg: &AtomRegistry) -> Result<Expr, ParseError> {
        let mut lhs = self.juxta(reg)?;
        while *self.peek() == Tok::Gt {
            self.bump();
            let rhs = self.juxta(reg)?;
            lhs = Expr::Next(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn juxta(&mut self, reg: &AtomRegistry) -> Result<Expr, ParseError> {
        let mut lhs = self.count(reg)?;
        while *self.peek() == Tok::Slash {
            self.bump();
            let rhs = self.count(reg)?;
            lhs = Expr::Juxta(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn count(&mut self, reg: &AtomRegistry) -> Result<Expr, ParseError> {
        if let Tok::Int(s) = self.peek().clone() {
            let n = self.int(&s)?;
            self.bump();
            self.expect(Tok::Star, "`*` after a count")?;
            let inner = self.count(reg)?;
            return Ok(Expr::NextCount(n, Box::new(inner)));
        }
        self.postfix(reg)
    }

    fn int(&self, s: &str) -> Result<i64, ParseError> {
        s.parse::<i64>().map_err(|_| self.cur().err(ParseErrorKind::BadCount(s.to_string())))
    }

    fn postfix(&mut self, reg: &AtomRegistry) -> Result<Expr, ParseError> {
        let mut e = self.primary(reg)?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let Tok::Int(s) = self.peek().clone() else {
                let cur = self.cur();
                return Err(cur.err(ParseErrorKind::Unexpected {
                    expected: "a count after `^`".into(),
                    found: cur.tok.to_string(),
                }));
            };
            let n = self.int(&s)?;
            self.bump();
            e = Expr::JuxtaCount(Box::new(e), n);
        }
        Ok(e)
    }

    fn primary(&mut self, reg: &AtomRegistry) -> Result<Expr, ParseError> {
        let cur = self.cur().clone();
        match cur.tok {
            Tok::LParen => {
                self.bump();
                let e = self.term(reg)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(ref name)
                if (name == "tl" || name == "tr") && *self.peek_at(1) == Tok::LParen =>
            {
                let q = if name == "tl" { -1 } else { 1 };
                self.bump();
                self.bump();
                let e = self.term(reg)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Tilt(q, Box::new(e)))
            }
            Tok::Ident(ref name) => {
                let name = name.clone();
                if !reg.contains(&name) {
                    return Err(cur.err(ParseErrorKind::UnknownAtom(name)));
                }
                self.bump();
                let mut atom = Atom::new(name);
                if *self.peek() == Tok::Dot {
                    if let Tok::Int(s) = self.peek_at(1).clone() {
                        self.bump();
                        let k = s.parse::<u32>().map_err(|_| {
                            self.cur().err(ParseErrorKind::BadCount(s.clone()))
                        })?;
                        self.bump();
                        atom.label = Some(k);
                    }
                }
                Ok(Expr::Atom(atom))
            }
            ref other => Err(cur.err(ParseErrorKind::Unexpected {
                expected: "an atom or `(`".into(),
                found: other.to_string(),
            })),
        }
    }
}
