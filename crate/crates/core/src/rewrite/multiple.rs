use thiserror::Error;

use crate::network::{pre, suc};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hand {
    Left,
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultipleError {
    #[error("multiple structures need at least one lane")]
    ZeroLanes,
}

fn a(name: &str) -> Term {
    Term::atom(name)
}

fn j(x: Term, y: Term) -> Term {
    Term::juxta(x, y)
}

fn n(x: Term, y: Term) -> Term {
    Term::next(x, y)
}

/// `Link/(Link/(...))` with `lanes` Links.
pub fn multiple_link(lanes: usize) -> Result<Term, MultipleError> {
    match lanes {
        0 => Err(MultipleError::ZeroLanes),
        1 => Ok(a("Link")),
        k => Ok(j(a("Link"), multiple_link(k - 1)?)),
    }
}

/// Duplicates `lanes` signals: the result maps `x1..xn` to `x1..xn x1..xn`.
pub fn multiple_fork(lanes: usize, hand: Hand) -> Result<Term, MultipleError> {
    let fork = |h: Hand| match h {
        Hand::Left => n(a("Fork"), j(a("Down"), a("Link"))),
        Hand::Right => n(a("Fork"), j(a("Link"), a("Down"))),
    };
    match lanes {
        0 => Err(MultipleError::ZeroLanes),
        1 => Ok(match hand {
            Hand::Left => n(fork(hand), j(a("Link"), a("Up"))),
            Hand::Right => n(fork(hand), j(a("Up"), a("Link"))),
        }),
        k => {
            let x = multiple_fork(k - 1, hand)?;
            let (p, s) = (pre(&x).expect("Next").clone(), suc(&x).expect("Next").clone());
            Ok(match hand {
                Hand::Left => n(j(p, fork(hand)), j(j(a("Link"), s), a("Up"))),
                Hand::Right => n(j(p, fork(hand)), j(j(a("Up"), s), a("Link"))),
            })
        }
    }
}

/// Merges `2n` signals pairwise: lane `i` is joined with lane `n + i`.
pub fn multiple_join(lanes: usize, hand: Hand) -> Result<Term, MultipleError> {
    let join = |h: Hand| match h {
        Hand::Left => n(j(a("Link"), a("Up")), a("Join")),
        Hand::Right => n(j(a("Up"), a("Link")), a("Join")),
    };
    match lanes {
        0 => Err(MultipleError::ZeroLanes),
        1 => Ok(match hand {
            Hand::Left => n(j(a("Down"), a("Link")), join(hand)),
            Hand::Right => n(j(a("Link"), a("Down")), join(hand)),
        }),
        k => {
            let x = multiple_join(k - 1, hand)?;
            let (p, s) = (pre(&x).expect("Next").clone(), suc(&x).expect("Next").clone());
            Ok(match hand {
                Hand::Left => n(j(j(a("Down"), p), a("Link")), j(s, join(hand))),
                Hand::Right => n(j(j(a("Link"), p), a("Down")), j(s, join(hand))),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sort::{check, Interface, Sort};
    use crate::term::{parse, AtomRegistry};

    #[test]
    fn base_cases() {
        let r = AtomRegistry::new();
        assert_eq!(multiple_fork(1, Hand::Left).unwrap(), parse("(Fork > Down/Link) > (Link/Up)", &r).unwrap());
        assert_eq!(multiple_join(1, Hand::Right).unwrap(), parse("(Link/Down) > (Up/Link > Join)", &r).unwrap());
        assert_eq!(multiple_link(3).unwrap(), parse("Link/(Link/Link)", &r).unwrap());
        assert_eq!(multiple_link(0), Err(MultipleError::ZeroLanes));
    }

    #[test]
    fn interfaces_and_sorts() {
        let r = AtomRegistry::new();
        for k in 1..6 {
            for h in [Hand::Left, Hand::Right] {
                let f = check(&multiple_fork(k, h).unwrap(), &r);
                assert!(f.is_well_formed(), "{:?}", f.violations);
                assert_eq!((f.sort, f.input, f.output), (Some(Sort::B), Interface(k), Interface(2 * k)));
                let g = check(&multiple_join(k, h).unwrap(), &r);
                assert!(g.is_well_formed(), "{:?}", g.violations);
                assert_eq!((g.sort, g.input, g.output), (Some(Sort::B), Interface(2 * k), Interface(k)));
            }
        }
    }
}
