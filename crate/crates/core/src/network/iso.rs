//! Pin-preserving isomorphism. Pin order fixes every neighbour, so one
//! anchor per weakly connected component determines the whole mapping.

use std::collections::{HashMap, VecDeque};

use super::{EdgeKind, Network, Port};

struct Index {
    out: HashMap<Port, (Port, EdgeKind)>,
    inn: HashMap<Port, (Port, EdgeKind)>,
}

impl Index {
    fn new(n: &Network) -> Index {
        let mut out = HashMap::new();
        let mut inn = HashMap::new();
        for e in &n.edges {
            // cut edges use virtual pins, keyed apart from normal ones
            let tag = if e.kind.is_cut() { usize::MAX } else { 0 };
            out.insert((e.from.0, e.from.1 ^ tag), (e.to, e.kind));
            inn.insert((e.to.0, e.to.1 ^ tag), (e.from, e.kind));
        }
        Index { out, inn }
    }

    fn neighbours(&self, id: usize, n: &Network) -> Vec<(u8, usize, usize, EdgeKind)> {
        let node = &n.nodes[id];
        let mut v = Vec::new();
        for p in (0..node.outputs).chain([usize::MAX]) {
            if let Some(&(to, k)) = self.out.get(&(id, p)) {
                v.push((0, p, to.0, k));
            }
        }
        for p in (0..node.inputs).chain([usize::MAX]) {
            if let Some(&(from, k)) = self.inn.get(&(id, p)) {
                v.push((1, p, from.0, k));
            }
        }
        v
    }
}

fn same_node(a: &Network, i: usize, b: &Network, j: usize) -> bool {
    let (x, y) = (&a.nodes[i], &b.nodes[j]);
    x.atom == y.atom && x.sort == y.sort && x.inputs == y.inputs && x.outputs == y.outputs
}

/// Mapping from node ids of `a` to node ids of `b`, if one exists.
pub fn isomorphism(a: &Network, b: &Network) -> Option<Vec<usize>> {
    if a.nodes.len() != b.nodes.len() || a.edges.len() != b.edges.len() {
        return None;
    }
    let (ia, ib) = (Index::new(a), Index::new(b));
    let n = a.nodes.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for anchor in 0..n {
        if map[anchor] != usize::MAX {
            continue;
        }
        let mut found = false;
        for cand in 0..n {
            if used[cand] || !same_node(a, anchor, b, cand) {
                continue;
            }
            if let Some(assigned) = extend(a, b, &ia, &ib, anchor, cand, &map, &used) {
                for (x, y) in assigned {
                    map[x] = y;
                    used[y] = true;
                }
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(map)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Network,
    b: &Network,
    ia: &Index,
    ib: &Index,
    anchor: usize,
    cand: usize,
    map: &[usize],
    used: &[bool],
) -> Option<Vec<(usize, usize)>> {
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut local_used: HashMap<usize, usize> = HashMap::new();
    local.insert(anchor, cand);
    local_used.insert(cand, anchor);
    let mut queue = VecDeque::from([anchor]);
    while let Some(x) = queue.pop_front() {
        let y = local[&x];
        let (nx, ny) = (ia.neighbours(x, a), ib.neighbours(y, b));
        if nx.len() != ny.len() {
            return None;
        }
        for (p, q) in nx.iter().zip(&ny) {
            if (p.0, p.1, p.3) != (q.0, q.1, q.3) {
                return None;
            }
            let (xn, yn) = (p.2, q.2);
            match (local.get(&xn), local_used.get(&yn)) {
                (Some(&m), _) if m != yn => return None,
                (_, Some(&m)) if m != xn => return None,
                (Some(_), _) => {}
                _ => {
                    if map[xn] != usize::MAX || used[yn] || !same_node(a, xn, b, yn) {
                        return None;
                    }
                    local.insert(xn, yn);
                    local_used.insert(yn, xn);
                    queue.push_back(xn);
                }
            }
        }
    }
    // the far pin of every edge must agree as well
    for (&x, &y) in &local {
        for (p, q) in ia.neighbours(x, a).iter().zip(ib.neighbours(y, b).iter()) {
            let far_a = if p.0 == 0 { ia.out[&(x, key(p))].0 .1 } else { ia.inn[&(x, key(p))].0 .1 };
            let far_b = if q.0 == 0 { ib.out[&(y, key(q))].0 .1 } else { ib.inn[&(y, key(q))].0 .1 };
            if far_a != far_b {
                return None;
            }
        }
    }
    Some(local.into_iter().collect())
}

fn key(p: &(u8, usize, usize, EdgeKind)) -> usize {
    p.1
}

pub fn is_isomorphic(a: &Network, b: &Network) -> bool {
    isomorphism(a, b).is_some()
}
