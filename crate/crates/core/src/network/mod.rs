//! Nodal networks: reconstruction from terms, linearization back into terms,
//! isomorphism and interchange formats.

mod iso;
mod linearize;
mod ops;
mod reconstruct;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use iso::{is_isomorphic, isomorphism};
pub use linearize::{linearize, LinearizeError};
pub use ops::{complement, pre, suc, NotANextTerm};
pub use reconstruct::{reconstruct, Mode, ReconstructError};

pub use crate::sort::{bind_cuts, CutBindings, CutError, CutFamily, CutPair, Twist};
use crate::sort::Sort;
use crate::term::{AtomClass, AtomRegistry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub atom: String,
    pub sort: Sort,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
    #[serde(skip)]
    pub inputs: usize,
    #[serde(skip)]
    pub outputs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Normal,
    CutSpatial,
    CutPlanar,
}

impl EdgeKind {
    pub fn is_cut(self) -> bool {
        self != EdgeKind::Normal
    }
}

/// Endpoint `(node id, pin index)`.
pub type Port = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: Port,
    pub to: Port,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("invalid network JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("node {id}: unknown atom `{atom}`")]
    UnknownAtom { id: usize, atom: String },
    #[error("node ids must be 0..n in order")]
    BadIds,
    #[error("edge {from:?} -> {to:?} refers to a missing node or pin")]
    DanglingEdge { from: Port, to: Port },
    #[error("in-pin {0:?} has {1} incoming edges, expected 1")]
    InPin(Port, usize),
    #[error("out-pin {0:?} has {1} outgoing edges, expected 1")]
    OutPin(Port, usize),
}

impl Network {
    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn class_of(&self, id: usize, reg: &AtomRegistry) -> Option<AtomClass> {
        reg.class_of(&self.nodes[id].atom)
    }

    fn ids_of(&self, class: AtomClass, reg: &AtomRegistry) -> Vec<usize> {
        self.nodes.iter().filter(|n| reg.class_of(&n.atom) == Some(class)).map(|n| n.id).collect()
    }

    pub fn entries(&self, reg: &AtomRegistry) -> Vec<usize> {
        self.ids_of(AtomClass::Entry, reg)
    }

    pub fn exits(&self, reg: &AtomRegistry) -> Vec<usize> {
        self.ids_of(AtomClass::Exit, reg)
    }

    pub fn count_kind(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// Normal edges leaving `id`, indexed by out-pin.
    pub fn out_edges(&self, id: usize) -> Vec<&Edge> {
        let mut v: Vec<&Edge> = self.edges.iter().filter(|e| e.from.0 == id && !e.kind.is_cut()).collect();
        v.sort_by_key(|e| e.from.1);
        v
    }

    pub fn in_edges(&self, id: usize) -> Vec<&Edge> {
        let mut v: Vec<&Edge> = self.edges.iter().filter(|e| e.to.0 == id && !e.kind.is_cut()).collect();
        v.sort_by_key(|e| e.to.1);
        v
    }

    /// Every in-pin and out-pin carries exactly one normal edge.
    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.nodes.iter().enumerate().any(|(i, n)| n.id != i) {
            return Err(NetworkError::BadIds);
        }
        let mut ins: BTreeMap<Port, usize> = BTreeMap::new();
        let mut outs: BTreeMap<Port, usize> = BTreeMap::new();
        for e in &self.edges {
            let ok = |p: Port| p.0 < self.nodes.len();
            if !ok(e.from) || !ok(e.to) {
                return Err(NetworkError::DanglingEdge { from: e.from, to: e.to });
            }
            if e.kind.is_cut() {
                continue;
            }
            if e.from.1 >= self.nodes[e.from.0].outputs || e.to.1 >= self.nodes[e.to.0].inputs {
                return Err(NetworkError::DanglingEdge { from: e.from, to: e.to });
            }
            *outs.entry(e.from).or_default() += 1;
            *ins.entry(e.to).or_default() += 1;
        }
        for n in &self.nodes {
            for p in 0..n.inputs {
                let c = ins.get(&(n.id, p)).copied().unwrap_or(0);
                if c != 1 {
                    return Err(NetworkError::InPin((n.id, p), c));
                }
            }
            for p in 0..n.outputs {
                let c = outs.get(&(n.id, p)).copied().unwrap_or(0);
                if c != 1 {
                    return Err(NetworkError::OutPin((n.id, p), c));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    /// Reads the interchange JSON; pin counts come from the registry.
    pub fn from_json(src: &str, reg: &AtomRegistry) -> Result<Network, NetworkError> {
        let mut n: Network = serde_json::from_str(src)?;
        for node in &mut n.nodes {
            let def = reg
                .get(&node.atom)
                .ok_or_else(|| NetworkError::UnknownAtom { id: node.id, atom: node.atom.clone() })?;
            node.inputs = def.input.len();
            node.outputs = def.output.len();
        }
        n.validate()?;
        Ok(n)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph akton {\n  rankdir=LR;\n  node [shape=box];\n");
        for n in &self.nodes {
            let label = match n.label {
                Some(k) => format!("{}.{k}", n.atom),
                None => n.atom.clone(),
            };
            let _ = writeln!(s, "  n{} [label=\"{}\\n#{}\"];", n.id, label, n.id);
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Normal => "",
                EdgeKind::CutSpatial => ", style=dashed",
                EdgeKind::CutPlanar => ", style=dotted",
            };
            let _ = writeln!(
                s,
                "  n{} -> n{} [taillabel=\"{}\", headlabel=\"{}\"{style}];",
                e.from.0, e.to.0, e.from.1, e.to.1
            );
        }
        s.push_str("}\n");
        s
    }

    /// Removes `drop` nodes and renumbers the rest densely in order.
    fn without(&self, drop: &[bool]) -> Network {
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !drop[i] {
                map[i] = nodes.len();
                nodes.push(Node { id: nodes.len(), ..n.clone() });
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| !drop[e.from.0] && !drop[e.to.0])
            .map(|e| Edge { from: (map[e.from.0], e.from.1), to: (map[e.to.0], e.to.1), kind: e.kind })
            .collect();
        Network { nodes, edges }
    }

    /// Replaces every cut pair (joined by a cut edge) with a direct edge and
    /// drops the cut nodes. Chains of cuts collapse into one edge.
    pub fn healed(&self) -> Network {
        let mut edges = self.edges.clone();
        let cuts: Vec<Edge> = edges.iter().filter(|e| e.kind.is_cut()).copied().collect();
        let mut drop = vec![false; self.nodes.len()];
        for c in cuts {
            let (tail, head) = (c.from.0, c.to.0);
            drop[tail] = true;
            drop[head] = true;
            let into = edges.iter().position(|e| !e.kind.is_cut() && e.to.0 == tail);
            let from = edges.iter().position(|e| !e.kind.is_cut() && e.from.0 == head);
            if let (Some(a), Some(b)) = (into, from) {
                let src = edges[a].from;
                edges[b].from = src;
                edges.remove(a);
            }
        }
        edges.retain(|e| !e.kind.is_cut());
        Network { nodes: self.nodes.clone(), edges }.without(&drop)
    }

    /// Undirected multigraph over non-link nodes: chains of link-like nodes
    /// collapse into single connections.
    pub fn junction_graph(&self, reg: &AtomRegistry) -> (Vec<usize>, Vec<(usize, usize)>) {
        let link = |id: usize| reg.class_of(&self.nodes[id].atom).is_some_and(AtomClass::is_link_like);
        let keep: Vec<usize> = (0..self.nodes.len()).filter(|&i| !link(i)).collect();
        let mut out = Vec::new();
        for e in self.edges.iter().filter(|e| !e.kind.is_cut()) {
            if link(e.from.0) {
                continue;
            }
            let mut cur = e.to.0;
            let mut guard = 0;
            while link(cur) && guard <= self.nodes.len() {
                cur = match self.out_edges(cur).first() {
                    Some(next) => next.to.0,
                    None => break,
                };
                guard += 1;
            }
            if !link(cur) {
                out.push((e.from.0, cur));
            }
        }
        (keep, out)
    }
}
