use thiserror::Error;

use crate::term::{Atom, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("`{0}` is not a Next term")]
pub struct NotANextTerm(pub String);

/// Swaps Up with Down and Set with Off.
pub fn complement(t: &Term) -> Term {
    t.map_atoms(&mut |a| {
        let name = match a.name.as_str() {
            "Up" => "Down",
            "Down" => "Up",
            "Set" => "Off",
            "Off" => "Set",
            other => other,
        };
        Atom { name: name.to_string(), ..a.clone() }
    })
}

pub fn pre(t: &Term) -> Result<&Term, NotANextTerm> {
    match t {
        Term::Next(x, _) => Ok(x),
        other => Err(NotANextTerm(other.to_string())),
    }
}

pub fn suc(t: &Term) -> Result<&Term, NotANextTerm> {
    match t {
        Term::Next(_, y) => Ok(y),
        other => Err(NotANextTerm(other.to_string())),
    }
}
