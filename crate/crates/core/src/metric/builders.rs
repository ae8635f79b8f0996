use super::MetricError;
use crate::term::{Atom, Rotation, Term};

/// Direction of a metric multiple Link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Turn {
    Straight,
    Left,
    Right,
}

/// Output pair of a metric multiple Fork or Join.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lane {
    Ls,
    Sr,
    Lr,
}

fn a(name: &str) -> Term {
    Term::atom(name)
}

fn rot(t: Term, q: i32) -> Term {
    t.map_atoms(&mut |x| Atom { rot: x.rot.compose(Rotation::quarters(q)), ..x.clone() })
}

fn tl(t: Term) -> Term {
    rot(t, -1)
}

fn tr(t: Term) -> Term {
    rot(t, 1)
}

fn n(x: Term, y: Term) -> Term {
    Term::next(x, y)
}

fn j(x: Term, y: Term) -> Term {
    Term::juxta(x, y)
}

/// `k * x`, nested like the parser's count sugar; `k > 0`.
fn times(k: usize, x: Term) -> Term {
    (1..k).fold(x.clone(), |acc, _| n(x.clone(), acc))
}

/// `x ^ k`; `k > 0`.
fn power(x: Term, k: usize) -> Term {
    (1..k).fold(x.clone(), |acc, _| j(x.clone(), acc))
}

pub fn metric_multiple_link(i: usize, turn: Turn) -> Term {
    match (i, turn) {
        (0, Turn::Straight) => a("L_s"),
        (0, Turn::Left) => a("L_l"),
        (0, Turn::Right) => a("L_r"),
        (i, Turn::Straight) => j(metric_multiple_link(i - 1, turn), a("L_s")),
        (i, Turn::Left) => j(
            metric_multiple_link(i - 1, turn),
            n(n(times(i, a("L_s")), a("L_l")), tl(times(i, a("L_s")))),
        ),
        (i, Turn::Right) => j(
            n(n(times(i, a("L_s")), a("L_r")), tr(times(i, a("L_s")))),
            metric_multiple_link(i - 1, turn),
        ),
    }
}

fn fork_pre(i: usize, lane: Lane) -> Term {
    match (i, lane) {
        (0, Lane::Ls) => a("F_ld"),
        (0, _) => a("F_rd"),
        (i, Lane::Ls) => j(fork_pre(i - 1, lane), n(n(times(i, a("L_s")), a("F_ld")), tl(times(i, a("L_s"))))),
        (i, _) => j(n(n(times(i, a("L_s")), a("F_rd")), tr(times(i, a("L_s")))), fork_pre(i - 1, lane)),
    }
}

fn fork_suc(i: usize, lane: Lane) -> Term {
    match lane {
        Lane::Ls => j(tl(j(power(a("L_s"), i + 1), a("CS"))), power(a("Up"), i + 1)),
        _ => j(power(a("Up"), i + 1), tr(j(a("CS"), power(a("L_s"), i + 1)))),
    }
}

fn join_pre(i: usize, lane: Lane) -> Term {
    match lane {
        Lane::Ls => j(tr(j(power(a("L_s"), i + 1), a("CS"))), power(a("Down"), i + 1)),
        _ => j(power(a("Down"), i + 1), tl(j(a("CS"), power(a("L_s"), i + 1)))),
    }
}

fn join_suc(i: usize, lane: Lane) -> Term {
    match (i, lane) {
        (0, Lane::Ls) => a("J_lu"),
        (0, _) => a("J_ru"),
        (i, Lane::Ls) => j(join_suc(i - 1, lane), n(n(tr(times(i, a("L_s"))), a("J_lu")), times(i, a("L_s")))),
        (i, _) => j(n(n(tl(times(i, a("L_s"))), a("J_ru")), times(i, a("L_s"))), join_suc(i - 1, lane)),
    }
}

/// `pre > suc` with `i + 1` lanes, each forked straight and to one side.
pub fn metric_multiple_fork(i: usize, lane: Lane) -> Result<Term, MetricError> {
    if lane == Lane::Lr {
        return Err(MetricError::NoLrStructure);
    }
    Ok(n(fork_pre(i, lane), fork_suc(i, lane)))
}

pub fn metric_multiple_join(i: usize, lane: Lane) -> Result<Term, MetricError> {
    if lane == Lane::Lr {
        return Err(MetricError::NoLrStructure);
    }
    Ok(n(join_pre(i, lane), join_suc(i, lane)))
}
