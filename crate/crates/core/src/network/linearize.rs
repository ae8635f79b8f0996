//! Network to term.
//!
//! Feedback edges (DFS back edges) become `Off.k`/`Set.k` pairs, the rest is
//! layered by longest path. Adjacent layers are joined directly where an
//! order-preserving choice of wires allows it; every other edge is cut with
//! a labeled `Down.k`/`Up.k` pair. Columns are chained with Next.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::{Edge, Network, NetworkError, Port};
use crate::term::{AtomClass, AtomRegistry, Term};

#[derive(Debug, Error)]
pub enum LinearizeError {
    #[error("network has no node to orient from")]
    NotOrientable,
    #[error(transparent)]
    Invalid(#[from] NetworkError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Wire {
    Direct(usize, usize),
    Down(usize),
    Up(usize),
}

pub fn linearize(n: &Network, reg: &AtomRegistry) -> Result<Term, LinearizeError> {
    let net = if n.edges.iter().any(|e| e.kind.is_cut()) { n.healed() } else { n.clone() };
    if net.nodes.is_empty() {
        return Err(LinearizeError::NotOrientable);
    }
    net.validate()?;
    let size = net.nodes.len();
    let mut edges: Vec<Edge> = net.edges.clone();
    edges.sort();

    let feedback = feedback_edges(&net, reg, &edges);
    let dag: Vec<&Edge> = edges.iter().filter(|e| !feedback.contains(e)).collect();

    // longest-path layers
    let mut indeg = vec![0usize; size];
    for e in &dag {
        indeg[e.to.0] += 1;
    }
    let mut layer = vec![0usize; size];
    let mut ready: BTreeSet<usize> = (0..size).filter(|&i| indeg[i] == 0).collect();
    while let Some(u) = ready.pop_first() {
        for e in dag.iter().filter(|e| e.from.0 == u) {
            let v = e.to.0;
            layer[v] = layer[v].max(layer[u] + 1);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    let depth = layer.iter().copied().max().unwrap_or(0);

    // columns: 0 and depth+2 hold only cut cells
    let ncols = depth + 3;
    let col = |id: usize| layer[id] + 1;
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut pos = vec![0f64; size];
    for l in 0..=depth {
        let mut members: Vec<usize> = (0..size).filter(|&i| layer[i] == l).collect();
        if l > 0 {
            let bary = |v: usize| {
                let preds: Vec<f64> = dag
                    .iter()
                    .filter(|e| e.to.0 == v)
                    .map(|e| pos[e.from.0] + e.from.1 as f64 / (net.nodes[e.from.0].outputs + 1) as f64)
                    .collect();
                preds.iter().sum::<f64>() / preds.len().max(1) as f64
            };
            let keys: HashMap<usize, f64> = members.iter().map(|&v| (v, bary(v))).collect();
            members.sort_by(|a, b| keys[a].total_cmp(&keys[b]).then(a.cmp(b)));
        }
        for (i, &v) in members.iter().enumerate() {
            pos[v] = i as f64;
        }
        columns[l + 1] = members;
    }

    // labels for every cut edge, ordered by source port
    let mut next_label = net.nodes.iter().filter_map(|n| n.label).max().map_or(1, |m| m + 1);
    let mut tail_cell: HashMap<Port, Term> = HashMap::new();
    let mut head_cell: HashMap<Port, Term> = HashMap::new();
    let mut cut = |e: &Edge, planar: bool, tail_cell: &mut HashMap<Port, Term>, head_cell: &mut HashMap<Port, Term>| {
        let k = next_label;
        next_label += 1;
        let (t, h) = if planar { ("Off", "Set") } else { ("Down", "Up") };
        tail_cell.insert(e.from, Term::labeled(t, k));
        head_cell.insert(e.to, Term::labeled(h, k));
    };

    let mut gaps: Vec<Vec<Wire>> = Vec::new();
    let mut p_lists: Vec<Vec<Port>> = Vec::new();
    let mut q_lists: Vec<Vec<Port>> = Vec::new();
    for g in 0..ncols - 1 {
        let p: Vec<Port> =
            columns[g].iter().flat_map(|&u| (0..net.nodes[u].outputs).map(move |i| (u, i))).collect();
        let q: Vec<Port> =
            columns[g + 1].iter().flat_map(|&v| (0..net.nodes[v].inputs).map(move |i| (v, i))).collect();
        let p_at: HashMap<Port, usize> = p.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let q_at: HashMap<Port, usize> = q.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut cands: Vec<(usize, usize)> = dag
            .iter()
            .filter(|e| col(e.from.0) == g && col(e.to.0) == g + 1)
            .map(|e| (p_at[&e.from], q_at[&e.to]))
            .collect();
        cands.sort();
        let mut chosen = longest_increasing(&cands);
        let wires = loop {
            let w = merge(&chosen, &p, &q);
            match first_violation(&w, &p, &q) {
                None => break w,
                Some((side, node)) => {
                    let at = chosen
                        .iter()
                        .position(|&(pi, qi)| if side == 0 { p[pi].0 == node } else { q[qi].0 == node })
                        .expect("violating node owns a direct wire");
                    chosen.remove(at);
                }
            }
        };
        gaps.push(wires);
        p_lists.push(p);
        q_lists.push(q);
    }

    for e in &edges {
        let planar = feedback.contains(e);
        let direct = gaps.iter().enumerate().any(|(g, w)| {
            w.iter().any(|x| matches!(x, Wire::Direct(pi, qi) if p_lists[g][*pi] == e.from && q_lists[g][*qi] == e.to))
        });
        if !direct {
            cut(e, planar, &mut tail_cell, &mut head_cell);
        }
    }

    let atom_of = |id: usize| {
        let n = &net.nodes[id];
        match n.label {
            Some(k) => Term::labeled(&n.atom, k),
            None => Term::atom(&n.atom),
        }
    };

    let mut terms = Vec::new();
    for (c, nodes) in columns.iter().enumerate() {
        // input side: nodes interleaved with tail cells of the previous gap
        let input_side: Vec<Item> = if c == 0 {
            nodes.iter().map(|&v| Item::Node(v)).collect()
        } else {
            side_items(&gaps[c - 1], nodes, |w| match *w {
                Wire::Direct(_, qi) => Some(Item::Pin(q_lists[c - 1][qi].0)),
                Wire::Up(qi) => Some(Item::Pin(q_lists[c - 1][qi].0)),
                Wire::Down(pi) => Some(Item::Cell(tail_cell[&p_lists[c - 1][pi]].clone())),
            }, |v| net.nodes[v].inputs)
        };
        let output_side: Vec<Item> = if c + 1 == ncols {
            nodes.iter().map(|&v| Item::Node(v)).collect()
        } else {
            side_items(&gaps[c], nodes, |w| match *w {
                Wire::Direct(pi, _) => Some(Item::Pin(p_lists[c][pi].0)),
                Wire::Down(pi) => Some(Item::Pin(p_lists[c][pi].0)),
                Wire::Up(qi) => Some(Item::Cell(head_cell[&q_lists[c][qi]].clone())),
            }, |v| net.nodes[v].outputs)
        };
        let cells = interleave(input_side, output_side, &atom_of);
        if !cells.is_empty() {
            terms.push(Term::column(cells));
        }
    }
    Ok(Term::chain(terms))
}

enum Item {
    Node(usize),
    Pin(usize),
    Cell(Term),
}

/// Collapses one side of a gap into nodes and cut cells in order; nodes
/// without pins on this side follow their predecessor.
fn side_items(
    wires: &[Wire],
    nodes: &[usize],
    f: impl Fn(&Wire) -> Option<Item>,
    pins: impl Fn(usize) -> usize,
) -> Vec<Item> {
    let mut seen = BTreeSet::new();
    let mut raw = Vec::new();
    for w in wires {
        match f(w) {
            Some(Item::Pin(v)) => {
                if seen.insert(v) {
                    raw.push(Item::Node(v));
                }
            }
            Some(other) => raw.push(other),
            None => {}
        }
    }
    let mut out = Vec::new();
    let mut pending: Vec<usize> = Vec::new();
    let mut ni = 0;
    // emit pinless nodes as soon as their predecessor is out
    let flush = |out: &mut Vec<Item>, ni: &mut usize, pending: &mut Vec<usize>| {
        while *ni < nodes.len() && pins(nodes[*ni]) == 0 {
            pending.push(nodes[*ni]);
            *ni += 1;
        }
        for v in pending.drain(..) {
            out.push(Item::Node(v));
        }
    };
    flush(&mut out, &mut ni, &mut pending);
    for item in raw {
        match item {
            Item::Node(v) => {
                out.push(Item::Node(v));
                debug_assert_eq!(nodes.get(ni), Some(&v));
                ni += 1;
                flush(&mut out, &mut ni, &mut pending);
            }
            other => out.push(other),
        }
    }
    flush(&mut out, &mut ni, &mut pending);
    out
}

fn interleave(input: Vec<Item>, output: Vec<Item>, atom_of: &impl Fn(usize) -> Term) -> Vec<Term> {
    let mut cells = Vec::new();
    let mut a = input.into_iter().peekable();
    let mut b = output.into_iter().peekable();
    loop {
        while let Some(Item::Cell(_)) = a.peek() {
            if let Some(Item::Cell(t)) = a.next() {
                cells.push(t);
            }
        }
        while let Some(Item::Cell(_)) = b.peek() {
            if let Some(Item::Cell(t)) = b.next() {
                cells.push(t);
            }
        }
        match (a.next(), b.next()) {
            (Some(Item::Node(x)), Some(Item::Node(y))) => {
                debug_assert_eq!(x, y);
                cells.push(atom_of(x));
            }
            (None, None) => break,
            _ => unreachable!("column sides disagree on node order"),
        }
    }
    cells
}

fn merge(chosen: &[(usize, usize)], p: &[Port], q: &[Port]) -> Vec<Wire> {
    let mut out = Vec::new();
    let (mut pp, mut pq) = (0, 0);
    let mut prev: Option<(usize, usize)> = None;
    for &(pi, qi) in chosen.iter().chain([(p.len(), q.len())].iter()) {
        let downs: Vec<Wire> = (pp..pi).map(Wire::Down).collect();
        let ups: Vec<Wire> = (pq..qi).map(Wire::Up).collect();
        let p_prev_cont = prev.is_some_and(|(a, _)| !downs.is_empty() && p[a].0 == p[pp].0);
        let q_prev_cont = prev.is_some_and(|(_, b)| !ups.is_empty() && q[b].0 == q[pq].0);
        let p_next_cont = pi < p.len() && pi > pp && p[pi].0 == p[pi - 1].0;
        let q_next_cont = qi < q.len() && qi > pq && q[qi].0 == q[qi - 1].0;
        let ups_first = (q_prev_cont || p_next_cont) && !(p_prev_cont || q_next_cont);
        if ups_first {
            out.extend(ups);
            out.extend(downs);
        } else {
            out.extend(downs);
            out.extend(ups);
        }
        if pi < p.len() {
            out.push(Wire::Direct(pi, qi));
        }
        pp = pi + 1;
        pq = qi + 1;
        prev = Some((pi, qi));
    }
    out
}

/// A node whose pins on one side are split by a cut cell: `(0, id)` for the
/// left column, `(1, id)` for the right one.
fn first_violation(w: &[Wire], p: &[Port], q: &[Port]) -> Option<(u8, usize)> {
    let mut left: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut right: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (i, x) in w.iter().enumerate() {
        let note = |m: &mut BTreeMap<usize, (usize, usize)>, id: usize| {
            let e = m.entry(id).or_insert((i, i));
            e.1 = i;
        };
        match *x {
            Wire::Direct(pi, qi) => {
                note(&mut left, p[pi].0);
                note(&mut right, q[qi].0);
            }
            Wire::Down(pi) => note(&mut left, p[pi].0),
            Wire::Up(qi) => note(&mut right, q[qi].0),
        }
    }
    for (&id, &(a, b)) in &left {
        if w[a..=b].iter().any(|x| matches!(x, Wire::Up(_))) {
            return Some((0, id));
        }
    }
    for (&id, &(a, b)) in &right {
        if w[a..=b].iter().any(|x| matches!(x, Wire::Down(_))) {
            return Some((1, id));
        }
    }
    None
}

/// Largest subset increasing in both coordinates (input sorted by the first).
fn longest_increasing(c: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let n = c.len();
    let mut best = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if c[j].0 < c[i].0 && c[j].1 < c[i].1 && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(mut i) = (0..n).max_by_key(|&i| (best[i], std::cmp::Reverse(i))) else { return Vec::new() };
    let mut out = vec![c[i]];
    while prev[i] != usize::MAX {
        i = prev[i];
        out.push(c[i]);
    }
    out.reverse();
    out
}

fn feedback_edges(net: &Network, reg: &AtomRegistry, edges: &[Edge]) -> BTreeSet<Edge> {
    let size = net.nodes.len();
    let mut state = vec![0u8; size];
    let mut back = BTreeSet::new();
    let mut roots: Vec<usize> =
        (0..size).filter(|&i| reg.class_of(&net.nodes[i].atom) == Some(AtomClass::Entry)).collect();
    roots.extend(0..size);
    let outs: Vec<Vec<&Edge>> = (0..size)
        .map(|u| {
            let mut v: Vec<&Edge> = edges.iter().filter(|e| e.from.0 == u).collect();
            v.sort_by_key(|e| e.from.1);
            v
        })
        .collect();
    for r in roots {
        if state[r] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(r, 0)];
        state[r] = 1;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < outs[u].len() {
                let e = outs[u][*i];
                *i += 1;
                let v = e.to.0;
                match state[v] {
                    0 => {
                        state[v] = 1;
                        stack.push((v, 0));
                    }
                    1 => {
                        back.insert(*e);
                    }
                    _ => {}
                }
            } else {
                state[u] = 2;
                stack.pop();
            }
        }
    }
    back
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{is_isomorphic, reconstruct, Mode};
    use crate::term::parse;

    fn round(src: &str) -> (Term, bool) {
        let r = AtomRegistry::new();
        let g = reconstruct(&parse(src, &r).unwrap(), &r, Mode::Heal).unwrap();
        let t = linearize(&g, &r).unwrap();
        let back = reconstruct(&t, &r, Mode::Heal).unwrap();
        (t, is_isomorphic(&g, &back))
    }

    #[test]
    fn diamond_is_recovered() {
        let (t, iso) = round("Entry > Fork > Link/Link > Join > Exit");
        assert!(iso);
        assert_eq!(t.to_string(), "Entry > Fork > Link/Link > Join > Exit");
    }

    #[test]
    fn entry_exit() {
        let (t, iso) = round("Entry > Exit");
        assert!(iso);
        assert_eq!(t.to_string(), "Entry > Exit");
    }

    #[test]
    fn cycle_gets_one_planar_pair() {
        let (t, iso) = round("Entry > (Set/Wire > And > Not > Fork > Off/Wire) > Exit");
        assert!(iso);
        assert_eq!(t.count_atom("Off"), 1);
        assert_eq!(t.count_atom("Set"), 1);
    }

    #[test]
    fn crossing_and_long_edges() {
        let (_, iso) = round("Entry/Entry > (Down/Link > Link/Up) > Exit/Exit");
        assert!(iso);
        let (_, iso) = round("Entry > Fork > Link/(Link > Link > Link) > Join > Exit");
        assert!(iso);
        let (_, iso) = round("Set > Fork > Fork/Link > Link/(Down/Link > Link/Up) > Join/Link > Join > Off");
        assert!(iso);
    }

    #[test]
    fn empty_network_is_not_orientable() {
        let r = AtomRegistry::new();
        assert!(matches!(linearize(&Network::default(), &r), Err(LinearizeError::NotOrientable)));
    }
}
