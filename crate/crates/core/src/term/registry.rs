use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::ast::{Atom, Term};
use crate::sort::{self, Interface, Sort};

/// Behavioural class of an atom, shared by every module that interprets atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomClass {
    Entry,
    Exit,
    Up,
    Down,
    Set,
    Off,
    Fork,
    Join,
    Link,
    Cs,
    And,
    Or,
    Not,
    Wire,
    MetricFork,
    MetricJoin,
    MetricLink,
    /// Unit-square metric junction (`F_ld`, `F_rd`, `J_lu`, `J_ru`).
    Junction,
    /// User-defined concealment.
    Concealed,
}

impl AtomClass {
    pub fn is_head(self) -> bool {
        matches!(self, AtomClass::Entry | AtomClass::Up | AtomClass::Set)
    }

    pub fn is_tail(self) -> bool {
        matches!(self, AtomClass::Exit | AtomClass::Down | AtomClass::Off)
    }

    pub fn is_cut(self) -> bool {
        matches!(self, AtomClass::Up | AtomClass::Down | AtomClass::Set | AtomClass::Off)
    }

    /// Pass-through body with one input and one output that only carries a value.
    pub fn is_link_like(self) -> bool {
        matches!(self, AtomClass::Link | AtomClass::Wire | AtomClass::MetricLink)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Builtin,
    Concealed(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomDef {
    pub class: AtomClass,
    pub sort: Sort,
    pub input: Interface,
    pub output: Interface,
    pub origin: Origin,
    /// Built-in entries can never be replaced or shadowed.
    pub builtin: bool,
}

impl AtomDef {
    fn builtin(class: AtomClass, sort: Sort, input: usize, output: usize) -> AtomDef {
        AtomDef {
            class,
            sort,
            input: Interface(input),
            output: Interface(output),
            origin: Origin::Builtin,
            builtin: true,
        }
    }

    pub fn body(&self) -> Option<&Term> {
        match &self.origin {
            Origin::Concealed(t) => Some(t),
            Origin::Builtin => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConcealError {
    #[error("atom `{0}` is already registered")]
    Duplicate(String),
    #[error("`{0}` is not a valid atom name")]
    BadName(String),
    #[error("the body of `{0}` is a single atom; only composite terms can be concealed")]
    AtomBody(String),
    #[error("the body of `{name}` is ill-formed: {reason}")]
    IllFormed { name: String, reason: String },
}

pub const BUILTIN_NAMES: &[&str] = &[
    "Entry", "Exit", "Up", "Down", "Set", "Off", "Fork", "Join", "Link", "CS", "And", "Or", "Not",
    "Wire", "F_lr", "F_ls", "F_sr", "J_lr", "J_ls", "J_sr", "L_s", "L_l", "L_r", "F_ld", "F_rd",
    "J_lu", "J_ru",
];

/// Bodies of the four metric junctions. They are concealed built-ins.
pub const JUNCTION_BODIES: &[(&str, &str)] = &[
    ("F_ld", "F_ls > tl(Down)/(L_l > tl(L_s))"),
    ("F_rd", "F_sr > (L_r > tr(L_s))/tr(Down)"),
    ("J_lu", "tr(Up/(L_s > L_l)) > J_ls"),
    ("J_ru", "tl((L_s > L_r)/Up) > J_sr"),
];

/// Atom table. Cloning is cheap; extending returns a new registry and leaves
/// the original untouched.
#[derive(Clone, Debug)]
pub struct AtomRegistry {
    entries: Arc<BTreeMap<String, AtomDef>>,
}

impl Default for AtomRegistry {
    fn default() -> Self {
        AtomRegistry::new()
    }
}

impl AtomRegistry {
    pub fn new() -> AtomRegistry {
        static BUILTINS: OnceLock<AtomRegistry> = OnceLock::new();
        BUILTINS.get_or_init(AtomRegistry::build_builtins).clone()
    }

    fn build_builtins() -> AtomRegistry {
        use AtomClass::*;
        let mut m = BTreeMap::new();
        let mut put = |name: &str, def: AtomDef| {
            m.insert(name.to_string(), def);
        };
        put("Entry", AtomDef::builtin(Entry, Sort::E, 0, 1));
        put("Up", AtomDef::builtin(Up, Sort::U, 0, 1));
        put("Set", AtomDef::builtin(Set, Sort::S, 0, 1));
        put("Exit", AtomDef::builtin(Exit, Sort::X, 1, 0));
        put("Down", AtomDef::builtin(Down, Sort::D, 1, 0));
        put("Off", AtomDef::builtin(Off, Sort::O, 1, 0));
        put("Fork", AtomDef::builtin(Fork, Sort::B, 1, 2));
        put("Join", AtomDef::builtin(Join, Sort::B, 2, 1));
        put("Link", AtomDef::builtin(Link, Sort::B, 1, 1));
        put("CS", AtomDef::builtin(Cs, Sort::CS, 0, 0));
        put("And", AtomDef::builtin(And, Sort::B, 2, 1));
        put("Or", AtomDef::builtin(Or, Sort::B, 2, 1));
        put("Not", AtomDef::builtin(Not, Sort::B, 1, 1));
        put("Wire", AtomDef::builtin(Wire, Sort::B, 1, 1));
        for f in ["F_lr", "F_ls", "F_sr"] {
            put(f, AtomDef::builtin(MetricFork, Sort::B, 1, 2));
        }
        for j in ["J_lr", "J_ls", "J_sr"] {
            put(j, AtomDef::builtin(MetricJoin, Sort::B, 2, 1));
        }
        for l in ["L_s", "L_l", "L_r"] {
            put(l, AtomDef::builtin(MetricLink, Sort::B, 1, 1));
        }
        let base = AtomRegistry { entries: Arc::new(m) };

        // Junction interfaces and sorts are computed from their bodies.
        let mut m = (*base.entries).clone();
        for (name, src) in JUNCTION_BODIES {
            let body = super::parse(src, &base).expect("junction body parses");
            let sort = sort::sort_of(&body, &base).expect("junction body has a sort");
            m.insert(
                name.to_string(),
                AtomDef {
                    class: Junction,
                    sort,
                    input: sort::in_of(&body, &base),
                    output: sort::out_of(&body, &base),
                    origin: Origin::Concealed(body),
                    builtin: true,
                },
            );
        }
        AtomRegistry { entries: Arc::new(m) }
    }

    pub fn get(&self, name: &str) -> Option<&AtomDef> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn class_of(&self, name: &str) -> Option<AtomClass> {
        self.get(name).map(|d| d.class)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Hides `body` behind a new atom `name` with the body's sort and interfaces.
    pub fn conceal(&self, name: &str, body: Term) -> Result<AtomRegistry, ConcealError> {
        if self.contains(name) {
            return Err(ConcealError::Duplicate(name.to_string()));
        }
        if !valid_name(name) || name == "tl" || name == "tr" {
            return Err(ConcealError::BadName(name.to_string()));
        }
        if body.is_atom() {
            return Err(ConcealError::AtomBody(name.to_string()));
        }
        let report = sort::check(&body, self);
        if let Some(v) = report.violations.first() {
            return Err(ConcealError::IllFormed { name: name.to_string(), reason: v.to_string() });
        }
        let sort = report.sort.ok_or_else(|| ConcealError::IllFormed {
            name: name.to_string(),
            reason: "no sort".into(),
        })?;
        let mut m = (*self.entries).clone();
        m.insert(
            name.to_string(),
            AtomDef {
                class: AtomClass::Concealed,
                sort,
                input: report.input,
                output: report.output,
                origin: Origin::Concealed(body),
                builtin: false,
            },
        );
        Ok(AtomRegistry { entries: Arc::new(m) })
    }

    /// Replaces user-concealed atoms by their bodies, recursively. Built-in
    /// junctions stay opaque.
    pub fn expand(&self, t: &Term) -> Term {
        self.expand_where(t, false)
    }

    /// Like [`expand`](Self::expand) but opens the metric junctions too.
    pub fn expand_all(&self, t: &Term) -> Term {
        self.expand_where(t, true)
    }

    fn expand_where(&self, t: &Term, junctions: bool) -> Term {
        t.substitute(&mut |a: &Atom| match self.get(&a.name) {
            Some(AtomDef { class, origin: Origin::Concealed(body), .. })
                if *class == AtomClass::Concealed || junctions =>
            {
                let inner = self.expand_where(body, junctions);
                if a.rot.get() == 0 {
                    inner
                } else {
                    inner.map_atoms(&mut |b| Atom { rot: b.rot.compose(a.rot), ..b.clone() })
                }
            }
            _ => Term::Atom(a.clone()),
        })
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
