//! Sort inference, interfaces and well-formedness.

mod cuts;
mod kinds;
mod tables;

use serde::Serialize;
use thiserror::Error;

pub use cuts::{bind_cuts, analyze_cuts, CutAnalysis, CutBindings, CutError, CutFamily, CutPair, Twist};
pub use kinds::{Interface, Sort};
pub use tables::{compose, tables, Cell, Grid, Relation, TableId, Tables};

use crate::term::{AtomRegistry, Path, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SortError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("no production rule defines {left} {relation} {right}")]
    UndefinedComposition { left: Sort, right: Sort, relation: Relation },
}

pub fn sort_of(t: &Term, reg: &AtomRegistry) -> Result<Sort, SortError> {
    match t {
        Term::Atom(a) => reg.get(&a.name).map(|d| d.sort).ok_or_else(|| SortError::UnknownAtom(a.name.clone())),
        Term::Next(x, y) => compose_err(Relation::Next, sort_of(x, reg)?, sort_of(y, reg)?),
        Term::Juxta(x, y) => compose_err(Relation::Juxta, sort_of(x, reg)?, sort_of(y, reg)?),
    }
}

fn compose_err(relation: Relation, left: Sort, right: Sort) -> Result<Sort, SortError> {
    compose(relation, left, right)
        .map(|c| c.result)
        .ok_or(SortError::UndefinedComposition { left, right, relation })
}

pub fn in_of(t: &Term, reg: &AtomRegistry) -> Interface {
    match t {
        Term::Atom(a) => reg.get(&a.name).map_or(Interface::EMPTY, |d| d.input),
        Term::Next(x, _) => in_of(x, reg),
        Term::Juxta(x, y) => in_of(x, reg).juxta(in_of(y, reg)),
    }
}

pub fn out_of(t: &Term, reg: &AtomRegistry) -> Interface {
    match t {
        Term::Atom(a) => reg.get(&a.name).map_or(Interface::EMPTY, |d| d.output),
        Term::Next(_, y) => out_of(y, reg),
        Term::Juxta(x, y) => out_of(x, reg).juxta(out_of(y, reg)),
    }
}

/// Coarse sort on the head/body/tail layer.
pub fn fundamental_sort(t: &Term, reg: &AtomRegistry) -> Result<Sort, SortError> {
    let rel_sort = |rel, l, r| {
        tables()
            .lookup_fundamental(rel, l, r)
            .ok_or(SortError::UndefinedComposition { left: l, right: r, relation: rel })
    };
    match t {
        Term::Atom(a) => {
            let s = reg.get(&a.name).map(|d| d.sort).ok_or_else(|| SortError::UnknownAtom(a.name.clone()))?;
            Ok(match s {
                Sort::E | Sort::U | Sort::S | Sort::H => Sort::H,
                Sort::X | Sort::D | Sort::O | Sort::T => Sort::T,
                Sort::CS => Sort::CS,
                _ => Sort::B,
            })
        }
        Term::Next(x, y) => rel_sort(Relation::Next, fundamental_sort(x, reg)?, fundamental_sort(y, reg)?),
        Term::Juxta(x, y) => rel_sort(Relation::Juxta, fundamental_sort(x, reg)?, fundamental_sort(y, reg)?),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    #[error("at {path}: unknown atom `{name}`")]
    UnknownAtom { path: String, name: String },
    #[error("at {path}: Next needs out(x) = in(y), got {out} and {input}")]
    InterfaceMismatch {
        path: String,
        #[serde(serialize_with = "ser_display")]
        out: Interface,
        #[serde(serialize_with = "ser_display")]
        input: Interface,
    },
    #[error("at {path}: no production rule defines {left} {relation} {right}")]
    UndefinedComposition { path: String, left: Sort, right: Sort, relation: Relation },
    #[error("{0}")]
    Cut(#[serde(serialize_with = "ser_display")] CutError),
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct WellFormedReport {
    pub sort: Option<Sort>,
    #[serde(serialize_with = "ser_display")]
    pub input: Interface,
    #[serde(serialize_with = "ser_display")]
    pub output: Interface,
    pub violations: Vec<Violation>,
    pub cuts: Vec<CutPair>,
}

impl WellFormedReport {
    pub fn is_well_formed(&self) -> bool {
        self.sort.is_some() && self.violations.is_empty()
    }
}

pub fn check(t: &Term, reg: &AtomRegistry) -> WellFormedReport {
    let mut violations = Vec::new();
    let sort = walk(t, reg, &Path::root(), &mut violations);
    let mut cuts = Vec::new();
    if violations.iter().all(|v| !matches!(v, Violation::UnknownAtom { .. })) {
        let a = analyze_cuts(&reg.expand_all(t), reg);
        violations.extend(a.errors.into_iter().map(Violation::Cut));
        cuts = a.bindings.pairs;
    }
    WellFormedReport { sort, input: in_of(t, reg), output: out_of(t, reg), violations, cuts }
}

fn walk(t: &Term, reg: &AtomRegistry, path: &Path, out: &mut Vec<Violation>) -> Option<Sort> {
    let (rel, x, y) = match t {
        Term::Atom(a) => {
            let s = reg.get(&a.name).map(|d| d.sort);
            if s.is_none() {
                out.push(Violation::UnknownAtom { path: path.to_string(), name: a.name.clone() });
            }
            return s;
        }
        Term::Next(x, y) => (Relation::Next, x, y),
        Term::Juxta(x, y) => (Relation::Juxta, x, y),
    };
    let sx = walk(x, reg, &path.child(0), out);
    let sy = walk(y, reg, &path.child(1), out);
    if rel == Relation::Next {
        let (o, i) = (out_of(x, reg), in_of(y, reg));
        if o != i {
            out.push(Violation::InterfaceMismatch { path: path.to_string(), out: o, input: i });
        }
    }
    let (sx, sy) = (sx?, sy?);
    let r = compose(rel, sx, sy).map(|c| c.result);
    if r.is_none() {
        out.push(Violation::UndefinedComposition { path: path.to_string(), left: sx, right: sy, relation: rel });
    }
    r
}
