//! Dependency-preserving replacements and the multiple Link/Fork/Join
//! builders.

mod multiple;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use multiple::{multiple_fork, multiple_join, multiple_link, Hand, MultipleError};

use crate::sort::{self, Interface, Sort, Violation};
use crate::term::{AtomClass, AtomRegistry, Path, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// `x <-> y > x`
    LinkPre,
    /// `x <-> x > y`
    LinkPost,
    /// `x <-> y / x`
    ExpandAbove,
    /// `x <-> x / y`
    ExpandBelow,
    AssocNext,
    AssocJuxta,
    /// `(w > x)/(y > z) -> w/y > x/z`
    DistJuxta,
    /// `w/y > x/z -> (w > x)/(y > z)`
    DistNext,
    /// `(w > x)/(y > z) <-> w > x/y > z`
    Conn1,
    /// `(w > x)/(y > z) <-> y > w/z > x`
    Conn2,
}

impl RuleKind {
    pub const ALL: [RuleKind; 10] = [
        RuleKind::LinkPre,
        RuleKind::LinkPost,
        RuleKind::ExpandAbove,
        RuleKind::ExpandBelow,
        RuleKind::AssocNext,
        RuleKind::AssocJuxta,
        RuleKind::DistJuxta,
        RuleKind::DistNext,
        RuleKind::Conn1,
        RuleKind::Conn2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::LinkPre => "link-pre",
            RuleKind::LinkPost => "link-post",
            RuleKind::ExpandAbove => "expand-above",
            RuleKind::ExpandBelow => "expand-below",
            RuleKind::AssocNext => "assoc-next",
            RuleKind::AssocJuxta => "assoc-juxta",
            RuleKind::DistJuxta => "dist-juxta",
            RuleKind::DistNext => "dist-next",
            RuleKind::Conn1 => "conn-1",
            RuleKind::Conn2 => "conn-2",
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            RuleKind::LinkPre | RuleKind::LinkPost => "link",
            RuleKind::ExpandAbove | RuleKind::ExpandBelow => "expansion",
            RuleKind::AssocNext | RuleKind::AssocJuxta => "associativity",
            RuleKind::DistJuxta | RuleKind::DistNext => "distributivity",
            RuleKind::Conn1 | RuleKind::Conn2 => "connectivity",
        }
    }

    pub fn reversible(self) -> bool {
        !matches!(self, RuleKind::DistJuxta | RuleKind::DistNext)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub kind: RuleKind,
    pub dir: Direction,
}

impl Rule {
    pub fn fwd(kind: RuleKind) -> Rule {
        Rule { kind, dir: Direction::Forward }
    }

    pub fn bwd(kind: RuleKind) -> Rule {
        Rule { kind, dir: Direction::Backward }
    }

    /// Every rule with every legal direction.
    pub fn all() -> Vec<Rule> {
        RuleKind::ALL
            .iter()
            .flat_map(|&k| {
                let mut v = vec![Rule::fwd(k)];
                if k.reversible() {
                    v.push(Rule::bwd(k));
                }
                v
            })
            .collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dir {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        };
        write!(f, "{}:{d}", self.kind.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    /// `name[:fwd|bwd]`; a family name picks its first rule.
    fn from_str(s: &str) -> Result<Rule, String> {
        let (name, dir) = s.split_once(':').unwrap_or((s, "fwd"));
        let dir = match dir {
            "fwd" | "forward" => Direction::Forward,
            "bwd" | "backward" => Direction::Backward,
            other => return Err(format!("unknown direction `{other}`")),
        };
        let kind = RuleKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .or_else(|| RuleKind::ALL.iter().copied().find(|k| k.family() == name))
            .ok_or_else(|| format!("unknown rule `{name}`"))?;
        Ok(Rule { kind, dir })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("path {0} is not in the term")]
    BadPath(String),
    #[error("{rule} does not match the subterm at {path}")]
    NoMatch { rule: Rule, path: String },
    #[error("{rule}: constraint {constraint} fails ({left} vs {right})")]
    ConstraintViolated { rule: Rule, constraint: &'static str, left: String, right: String },
    #[error("{} has no backward direction", .0.name())]
    NoBackward(RuleKind),
    #[error("{rule}: operand `{operand}` is not {want}")]
    BadOperand { rule: Rule, operand: String, want: &'static str },
    #[error("{rule} at {path} would make the term ill-formed: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormedResult { rule: Rule, path: String, violations: Vec<Violation> },
}

/// Applies `rule` at `path`. `operand` is the inserted neutral term for the
/// forward link and expansion rules (a Link column or `CS` by default).
pub fn apply(
    rule: Rule,
    t: &Term,
    path: &Path,
    reg: &AtomRegistry,
    operand: Option<&Term>,
) -> Result<Term, RewriteError> {
    let sub = t.get(path).ok_or_else(|| RewriteError::BadPath(path.to_string()))?;
    let replaced = rewrite_at(rule, sub, path, reg, operand)?;
    let out = t.replace(path, replaced).expect("path checked");
    if sort::check(t, reg).is_well_formed() {
        let after = sort::check(&out, reg);
        if !after.is_well_formed() {
            return Err(RewriteError::IllFormedResult {
                rule,
                path: path.to_string(),
                violations: after.violations,
            });
        }
    }
    Ok(out)
}

fn iface_eq(rule: Rule, constraint: &'static str, a: Interface, b: Interface) -> Result<(), RewriteError> {
    if a == b {
        Ok(())
    } else {
        Err(RewriteError::ConstraintViolated { rule, constraint, left: a.to_string(), right: b.to_string() })
    }
}

/// Neutral filler of a given width.
pub fn neutral(width: usize) -> Term {
    if width == 0 {
        Term::atom("CS")
    } else {
        multiple_link(width).expect("width is positive")
    }
}

fn is_neutral(t: &Term, reg: &AtomRegistry) -> bool {
    t.atoms().iter().all(|a| {
        matches!(reg.class_of(&a.name), Some(AtomClass::Link | AtomClass::Wire | AtomClass::Cs)) && a.rot.get() == 0
    })
}

fn rewrite_at(
    rule: Rule,
    x: &Term,
    path: &Path,
    reg: &AtomRegistry,
    operand: Option<&Term>,
) -> Result<Term, RewriteError> {
    use Direction::*;
    use RuleKind::*;
    let no_match = || RewriteError::NoMatch { rule, path: path.to_string() };
    let (i, o) = (|t: &Term| sort::in_of(t, reg), |t: &Term| sort::out_of(t, reg));
    match (rule.kind, rule.dir) {
        (DistJuxta | DistNext, Backward) => Err(RewriteError::NoBackward(rule.kind)),
        (LinkPre, Forward) => {
            let y = operand.cloned().unwrap_or_else(|| neutral(i(x).len()));
            check_neutral(rule, &y, reg)?;
            iface_eq(rule, "in(y) = in(x)", i(&y), i(x))?;
            Ok(Term::next(y, x.clone()))
        }
        (LinkPost, Forward) => {
            let y = operand.cloned().unwrap_or_else(|| neutral(o(x).len()));
            check_neutral(rule, &y, reg)?;
            iface_eq(rule, "out(y) = out(x)", o(&y), o(x))?;
            Ok(Term::next(x.clone(), y))
        }
        (LinkPre, Backward) => match x {
            Term::Next(y, x) if is_neutral(y, reg) => {
                iface_eq(rule, "in(y) = in(x)", i(y), i(x))?;
                Ok((**x).clone())
            }
            _ => Err(no_match()),
        },
        (LinkPost, Backward) => match x {
            Term::Next(x, y) if is_neutral(y, reg) => {
                iface_eq(rule, "out(y) = out(x)", o(y), o(x))?;
                Ok((**x).clone())
            }
            _ => Err(no_match()),
        },
        (ExpandAbove | ExpandBelow, Forward) => {
            let y = operand.cloned().unwrap_or_else(|| Term::atom("CS"));
            check_dead(rule, &y, reg)?;
            Ok(if rule.kind == ExpandAbove { Term::juxta(y, x.clone()) } else { Term::juxta(x.clone(), y) })
        }
        (ExpandAbove, Backward) => match x {
            Term::Juxta(y, x) => {
                check_dead(rule, y, reg)?;
                Ok((**x).clone())
            }
            _ => Err(no_match()),
        },
        (ExpandBelow, Backward) => match x {
            Term::Juxta(x, y) => {
                check_dead(rule, y, reg)?;
                Ok((**x).clone())
            }
            _ => Err(no_match()),
        },
        (AssocNext, Forward) => match x {
            Term::Next(l, z) => match &**l {
                Term::Next(x, y) => Ok(Term::next((**x).clone(), Term::next((**y).clone(), (**z).clone()))),
                _ => Err(no_match()),
            },
            _ => Err(no_match()),
        },
        (AssocNext, Backward) => match x {
            Term::Next(x, r) => match &**r {
                Term::Next(y, z) => Ok(Term::next(Term::next((**x).clone(), (**y).clone()), (**z).clone())),
                _ => Err(no_match()),
            },
            _ => Err(no_match()),
        },
        (AssocJuxta, Forward) => match x {
            Term::Juxta(l, z) => match &**l {
                Term::Juxta(x, y) => Ok(Term::juxta((**x).clone(), Term::juxta((**y).clone(), (**z).clone()))),
                _ => Err(no_match()),
            },
            _ => Err(no_match()),
        },
        (AssocJuxta, Backward) => match x {
            Term::Juxta(x, r) => match &**r {
                Term::Juxta(y, z) => Ok(Term::juxta(Term::juxta((**x).clone(), (**y).clone()), (**z).clone())),
                _ => Err(no_match()),
            },
            _ => Err(no_match()),
        },
        (DistJuxta, Forward) => {
            let [w, x, y, z] = juxta_of_nexts(x).ok_or_else(no_match)?;
            Ok(Term::next(Term::juxta(w, y), Term::juxta(x, z)))
        }
        (DistNext, Forward) => match x {
            Term::Next(l, r) => match (&**l, &**r) {
                (Term::Juxta(w, y), Term::Juxta(x, z)) => {
                    iface_eq(rule, "out(w) = in(x)", o(w), i(x))?;
                    Ok(Term::juxta(
                        Term::next((**w).clone(), (**x).clone()),
                        Term::next((**y).clone(), (**z).clone()),
                    ))
                }
                _ => Err(no_match()),
            },
            _ => Err(no_match()),
        },
        (Conn1, Forward) => {
            let [w, x, y, z] = juxta_of_nexts(x).ok_or_else(no_match)?;
            iface_eq(rule, "out(x) = ε", o(&x), Interface::EMPTY)?;
            iface_eq(rule, "in(y) = ε", i(&y), Interface::EMPTY)?;
            Ok(Term::next(Term::next(w, Term::juxta(x, y)), z))
        }
        (Conn1, Backward) => {
            let [w, x, y, z] = chain_around_juxta(x).ok_or_else(no_match)?;
            iface_eq(rule, "out(x) = ε", o(&x), Interface::EMPTY)?;
            iface_eq(rule, "in(y) = ε", i(&y), Interface::EMPTY)?;
            Ok(Term::juxta(Term::next(w, x), Term::next(y, z)))
        }
        (Conn2, Forward) => {
            let [w, x, y, z] = juxta_of_nexts(x).ok_or_else(no_match)?;
            iface_eq(rule, "in(w) = ε", i(&w), Interface::EMPTY)?;
            iface_eq(rule, "out(z) = ε", o(&z), Interface::EMPTY)?;
            Ok(Term::next(Term::next(y, Term::juxta(w, z)), x))
        }
        (Conn2, Backward) => {
            // y > w/z > x
            let [y, w, z, x] = chain_around_juxta(x).ok_or_else(no_match)?;
            iface_eq(rule, "in(w) = ε", i(&w), Interface::EMPTY)?;
            iface_eq(rule, "out(z) = ε", o(&z), Interface::EMPTY)?;
            Ok(Term::juxta(Term::next(w, x), Term::next(y, z)))
        }
    }
}

fn check_neutral(rule: Rule, y: &Term, reg: &AtomRegistry) -> Result<(), RewriteError> {
    if is_neutral(y, reg) {
        Ok(())
    } else {
        Err(RewriteError::BadOperand { rule, operand: y.to_string(), want: "built from Link, Wire and CS" })
    }
}

fn check_dead(rule: Rule, y: &Term, reg: &AtomRegistry) -> Result<(), RewriteError> {
    if sort::sort_of(y, reg) == Ok(Sort::CS) && y.atoms().iter().all(|a| reg.class_of(&a.name) == Some(AtomClass::Cs)) {
        Ok(())
    } else {
        Err(RewriteError::BadOperand { rule, operand: y.to_string(), want: "built from CS atoms only" })
    }
}

/// `(w > x)/(y > z)`
fn juxta_of_nexts(t: &Term) -> Option<[Term; 4]> {
    match t {
        Term::Juxta(a, b) => match (&**a, &**b) {
            (Term::Next(w, x), Term::Next(y, z)) => {
                Some([(**w).clone(), (**x).clone(), (**y).clone(), (**z).clone()])
            }
            _ => None,
        },
        _ => None,
    }
}

/// `a > b/c > d`, parsed as `(a > (b/c)) > d`.
fn chain_around_juxta(t: &Term) -> Option<[Term; 4]> {
    match t {
        Term::Next(l, d) => match &**l {
            Term::Next(a, m) => match &**m {
                Term::Juxta(b, c) => Some([(**a).clone(), (**b).clone(), (**c).clone(), (**d).clone()]),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Right-nests every Next and Juxta chain.
pub fn normalize_assoc(t: &Term) -> Term {
    match t {
        Term::Atom(_) => t.clone(),
        Term::Next(l, z) => match &**l {
            Term::Next(x, y) => normalize_assoc(&Term::next((**x).clone(), Term::next((**y).clone(), (**z).clone()))),
            _ => Term::next(normalize_assoc(l), normalize_assoc(z)),
        },
        Term::Juxta(l, z) => match &**l {
            Term::Juxta(x, y) => {
                normalize_assoc(&Term::juxta((**x).clone(), Term::juxta((**y).clone(), (**z).clone())))
            }
            _ => Term::juxta(normalize_assoc(l), normalize_assoc(z)),
        },
    }
}
