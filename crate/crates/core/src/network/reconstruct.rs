use thiserror::Error;

use super::{Edge, EdgeKind, Network, Node, Port};
use crate::sort::{self, CutError, Violation};
use crate::term::{AtomClass, AtomRegistry, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Cut pairs become direct edges (spatial network).
    Heal,
    /// Cut nodes stay, joined by cut edges (planar version).
    KeepCuts,
}

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("term is ill-formed: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<Violation>),
    #[error(transparent)]
    Cut(#[from] CutError),
}

/// Builds the network of `t`. Undefined sort compositions are tolerated;
/// interface mismatches, unknown atoms and unpaired cuts are not.
pub fn reconstruct(t: &Term, reg: &AtomRegistry, mode: Mode) -> Result<Network, ReconstructError> {
    let report = sort::check(t, reg);
    let fatal: Vec<Violation> = report
        .violations
        .into_iter()
        .filter(|v| matches!(v, Violation::UnknownAtom { .. } | Violation::InterfaceMismatch { .. }))
        .collect();
    if !fatal.is_empty() {
        return Err(ReconstructError::IllFormed(fatal));
    }
    let full = reg.expand_all(t);
    let bindings = sort::bind_cuts(&full, reg)?;

    let mut b = Builder { reg, nodes: Vec::new(), edges: Vec::new(), node_of_atom: Vec::new() };
    b.build(&full);
    let mut net = Network { nodes: b.nodes, edges: b.edges };
    for p in &bindings.pairs {
        let (Some(tail), Some(head)) = (b.node_of_atom[p.tail], b.node_of_atom[p.head]) else { continue };
        let kind = if reg.class_of(&net.nodes[tail].atom) == Some(AtomClass::Down) {
            EdgeKind::CutSpatial
        } else {
            EdgeKind::CutPlanar
        };
        net.edges.push(Edge { from: (tail, 0), to: (head, 0), kind });
    }
    Ok(match mode {
        Mode::KeepCuts => net,
        Mode::Heal => net.healed(),
    })
}

struct Builder<'a> {
    reg: &'a AtomRegistry,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_of_atom: Vec<Option<usize>>,
}

impl Builder<'_> {
    /// Returns the open in-ports and out-ports of `t`, top to bottom.
    fn build(&mut self, t: &Term) -> (Vec<Port>, Vec<Port>) {
        match t {
            Term::Atom(a) => {
                let def = self.reg.get(&a.name).expect("checked atom");
                if def.class == AtomClass::Cs {
                    self.node_of_atom.push(None);
                    return (Vec::new(), Vec::new());
                }
                let id = self.nodes.len();
                self.node_of_atom.push(Some(id));
                let (i, o) = (def.input.len(), def.output.len());
                self.nodes.push(Node { id, atom: a.name.clone(), sort: def.sort, label: a.label, inputs: i, outputs: o });
                ((0..i).map(|p| (id, p)).collect(), (0..o).map(|p| (id, p)).collect())
            }
            Term::Next(x, y) => {
                let (xi, xo) = self.build(x);
                let (yi, yo) = self.build(y);
                for (from, to) in xo.into_iter().zip(yi) {
                    self.edges.push(Edge { from, to, kind: EdgeKind::Normal });
                }
                (xi, yo)
            }
            Term::Juxta(x, y) => {
                let (mut xi, mut xo) = self.build(x);
                let (yi, yo) = self.build(y);
                xi.extend(yi);
                xo.extend(yo);
                (xi, xo)
            }
        }
    }
}
