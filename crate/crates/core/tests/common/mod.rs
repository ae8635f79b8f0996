#![allow(dead_code)]

use std::collections::BTreeSet;

use akton::network::{Edge, EdgeKind, Network, Node};
use akton::term::{Atom, AtomRegistry, Rotation, Term, BUILTIN_NAMES};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random pin-complete network: a DAG of gates fed by entries, closed by
/// exits, with up to `max_feedback` inputs wired to later outputs.
pub fn random_network<R: Rng>(rng: &mut R, max_nodes: usize, max_feedback: usize) -> Network {
    let reg = AtomRegistry::new();
    let mut net = Network::default();
    let mut open: Vec<(usize, usize)> = Vec::new();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let add = |net: &mut Network, atom: &str| -> usize {
        let d = reg.get(atom).unwrap();
        let id = net.nodes.len();
        net.nodes.push(Node {
            id,
            atom: atom.to_string(),
            sort: d.sort,
            label: None,
            inputs: d.input.len(),
            outputs: d.output.len(),
        });
        id
    };
    let link = |net: &mut Network, from: (usize, usize), to: (usize, usize)| {
        net.edges.push(Edge { from, to, kind: EdgeKind::Normal });
    };
    let feedback = rng.gen_range(0..=max_feedback);
    let budget = max_nodes.saturating_sub(2 + feedback * 2).max(3);
    for _ in 0..rng.gen_range(1..=3) {
        let id = add(&mut net, "Entry");
        open.push((id, 0));
    }
    let gates = ["Fork", "Join", "Link", "And", "Or", "Not", "Wire"];
    while net.nodes.len() + open.len() < budget {
        let mut g = *gates.choose(rng).unwrap();
        let want = reg.get(g).unwrap().input.len();
        if want > open.len() {
            g = "Fork";
        }
        let id = add(&mut net, g);
        for pin in 0..reg.get(g).unwrap().input.len() {
            if pending.len() < feedback && pin == 1 {
                pending.push((id, pin));
                continue;
            }
            let k = rng.gen_range(0..open.len());
            let src = open.swap_remove(k);
            link(&mut net, src, (id, pin));
        }
        for o in 0..reg.get(g).unwrap().output.len() {
            open.push((id, o));
        }
        if open.is_empty() {
            let id = add(&mut net, "Entry");
            open.push((id, 0));
        }
    }
    while open.len() < pending.len() + 1 {
        let k = rng.gen_range(0..open.len());
        let src = open.swap_remove(k);
        let id = add(&mut net, "Fork");
        link(&mut net, src, (id, 0));
        open.push((id, 0));
        open.push((id, 1));
    }
    for dst in std::mem::take(&mut pending) {
        let k = rng.gen_range(0..open.len());
        let src = open.swap_remove(k);
        link(&mut net, src, dst);
    }
    open.shuffle(rng);
    for src in open {
        let id = add(&mut net, "Exit");
        link(&mut net, src, (id, 0));
    }
    net
}

/// One column item: (term, inputs, outputs).
fn item<R: Rng>(rng: &mut R, room: usize, wide: bool) -> (Term, usize, usize) {
    let crossing = || Term::next(Term::juxta(Term::atom("Down"), Term::atom("Link")), Term::juxta(Term::atom("Link"), Term::atom("Up")));
    let pick = rng.gen_range(0..10);
    match pick {
        0..=2 if room >= 2 => (Term::atom("Join"), 2, 1),
        3 if room >= 2 => (crossing(), 2, 2),
        4 | 5 if !wide => (Term::atom("Fork"), 1, 2),
        _ => (Term::atom("Link"), 1, 1),
    }
}

/// Random well-formed body of sort B with `width` inputs. Returns the term
/// and its output width.
pub fn random_body<R: Rng>(rng: &mut R, width: usize, columns: usize) -> (Term, usize) {
    let mut cols = Vec::new();
    let mut w = width;
    for _ in 0..columns.max(1) {
        if w >= 2 && columns > 1 && rng.gen_bool(0.3) {
            let top = rng.gen_range(1..w);
            let (a, wa) = random_body(rng, top, 2);
            let (b, wb) = random_body(rng, w - top, 2);
            cols.push(Term::juxta(a, b));
            w = wa + wb;
            continue;
        }
        let mut items = Vec::new();
        let mut left = w;
        let mut out = 0;
        while left > 0 {
            let (t, i, o) = item(rng, left, w >= 5);
            items.push(t);
            left -= i;
            out += o;
        }
        cols.push(Term::column(items));
        w = out;
    }
    (Term::chain(cols), w)
}

/// Closed program `Entry.1/.. > body > Exit.1/..` with labeled ends,
/// sometimes two of them side by side.
pub fn random_program<R: Rng>(rng: &mut R) -> Term {
    if rng.gen_bool(0.25) {
        return Term::juxta(closed(rng, 0), closed(rng, 10));
    }
    closed(rng, 0)
}

fn closed<R: Rng>(rng: &mut R, base: u32) -> Term {
    let width = rng.gen_range(1..=3);
    let columns = rng.gen_range(1..=4);
    let (body, out) = random_body(rng, width, columns);
    let entries = Term::column((1..=width as u32).map(|k| Term::labeled("Entry", base + k)));
    let exits = Term::column((1..=out as u32).map(|k| Term::labeled("Exit", base + k)));
    Term::chain([entries, body, exits])
}

/// Random term over every built-in atom, well-formed or not.
pub fn random_term<R: Rng>(rng: &mut R, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return Term::atom(BUILTIN_NAMES.choose(rng).unwrap());
    }
    let x = random_term(rng, depth - 1);
    let y = random_term(rng, depth - 1);
    if rng.gen_bool(0.5) {
        Term::next(x, y)
    } else {
        Term::juxta(x, y)
    }
}

/// Random term over metric atoms with random rotations.
pub fn random_metric_term<R: Rng>(rng: &mut R, depth: usize) -> Term {
    const METRIC: &[&str] = &[
        "Entry", "Exit", "Up", "Down", "Set", "Off", "CS", "F_lr", "F_ls", "F_sr", "J_lr", "J_ls", "J_sr",
        "L_s", "L_l", "L_r", "F_ld", "F_rd", "J_lu", "J_ru",
    ];
    if depth == 0 || rng.gen_bool(0.3) {
        let mut a = Atom::new(*METRIC.choose(rng).unwrap());
        a.rot = Rotation::quarters(rng.gen_range(0..4));
        return Term::Atom(a);
    }
    let x = random_metric_term(rng, depth - 1);
    let y = random_metric_term(rng, depth - 1);
    if rng.gen_bool(0.5) {
        Term::next(x, y)
    } else {
        Term::juxta(x, y)
    }
}

/// Pairs (entry label, exit label) joined by a directed path.
pub fn reachability(net: &Network) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for start in net.nodes.iter().filter(|n| n.atom == "Entry") {
        let mut seen = vec![false; net.nodes.len()];
        let mut stack = vec![start.id];
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n], true) {
                continue;
            }
            if net.nodes[n].atom == "Exit" {
                out.insert((start.label.unwrap_or(0), net.nodes[n].label.unwrap_or(0)));
            }
            stack.extend(net.edges.iter().filter(|e| e.from.0 == n).map(|e| e.to.0));
        }
    }
    out
}
