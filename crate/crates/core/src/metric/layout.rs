use std::collections::BTreeMap;

use serde::Serialize;

use super::{atom_profile, shape, trim, Elem, MetricError, MetricInterface, SideProfile};
use crate::term::{AtomRegistry, Term};

/// Unit offsets of the four sides, `(row, col)`.
const DIRS: [(i64, i64); 4] = [(0, -1), (-1, 0), (0, 1), (1, 0)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placed {
    pub atom: String,
    /// Clockwise degrees.
    pub rotation: u16,
    #[serde(skip)]
    pub profile: SideProfile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PortRef {
    pub row: i64,
    pub col: i64,
    pub side: usize,
}

impl PortRef {
    fn shifted(self, (dr, dc): (i64, i64)) -> PortRef {
        PortRef { row: self.row + dr, col: self.col + dc, ..self }
    }

    /// Position along the side, top-to-bottom or left-to-right.
    fn slot(self) -> i64 {
        if self.side.is_multiple_of(2) {
            self.row
        } else {
            self.col
        }
    }
}

/// Cells on the unit grid with the term's open ports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutGrid {
    pub cells: BTreeMap<(i64, i64), Placed>,
    pub inputs: Vec<PortRef>,
    pub outputs: Vec<PortRef>,
}

#[derive(Serialize)]
struct CellJson<'a> {
    row: i64,
    col: i64,
    atom: &'a str,
    rotation: u16,
}

#[derive(Serialize)]
struct GridJson<'a> {
    rows: usize,
    cols: usize,
    cells: Vec<CellJson<'a>>,
    inputs: &'a [PortRef],
    outputs: &'a [PortRef],
}

impl LayoutGrid {
    /// `(min_row, min_col, max_row, max_col)`.
    pub fn bounds(&self) -> (i64, i64, i64, i64) {
        let rows = self.cells.keys().map(|k| k.0);
        let cols = self.cells.keys().map(|k| k.1);
        (
            rows.clone().min().unwrap_or(0),
            cols.clone().min().unwrap_or(0),
            rows.max().unwrap_or(-1),
            cols.max().unwrap_or(-1),
        )
    }

    /// `(rows, cols)` of the bounding box.
    pub fn size(&self) -> (usize, usize) {
        let (r0, c0, r1, c1) = self.bounds();
        ((r1 - r0 + 1).max(0) as usize, (c1 - c0 + 1).max(0) as usize)
    }

    /// Moves the top-left corner of the bounding box to `(0, 0)`.
    pub fn normalized(&self) -> LayoutGrid {
        let (r0, c0, _, _) = self.bounds();
        self.shifted((-r0, -c0))
    }

    fn shifted(&self, d: (i64, i64)) -> LayoutGrid {
        LayoutGrid {
            cells: self.cells.iter().map(|(&(r, c), p)| ((r + d.0, c + d.1), p.clone())).collect(),
            inputs: self.inputs.iter().map(|p| p.shifted(d)).collect(),
            outputs: self.outputs.iter().map(|p| p.shifted(d)).collect(),
        }
    }

    fn overlap(&self, other: &LayoutGrid) -> Option<(i64, i64)> {
        other.cells.keys().find(|k| self.cells.contains_key(k)).copied()
    }

    fn merge(mut self, other: LayoutGrid, inputs: Vec<PortRef>, outputs: Vec<PortRef>) -> LayoutGrid {
        self.cells.extend(other.cells);
        LayoutGrid { cells: self.cells, inputs, outputs }
    }

    fn elem(&self, at: (i64, i64), side: usize) -> Option<Elem> {
        self.cells.get(&at).map(|p| p.profile.sides[side].0[0])
    }

    /// Touching sides of neighbouring cells carry the same element.
    pub fn check_adjacency(&self) -> Result<(), MetricError> {
        for &(r, c) in self.cells.keys() {
            for side in [2, 3] {
                let (dr, dc) = DIRS[side];
                if let Some(theirs) = self.elem((r + dr, c + dc), side - 2) {
                    if self.elem((r, c), side) != Some(theirs) {
                        return Err(MetricError::PinClash { row: r, col: c, side });
                    }
                }
            }
        }
        Ok(())
    }

    /// Outline of the bounding box, one slot per cell edge.
    pub fn profile(&self) -> SideProfile {
        let (r0, c0, r1, c1) = self.bounds();
        let side = |s: usize| {
            let slots: Vec<(i64, i64)> = match s {
                0 => (r0..=r1).map(|r| (r, c0)).collect(),
                1 => (c0..=c1).map(|c| (r0, c)).collect(),
                2 => (r0..=r1).map(|r| (r, c1)).collect(),
                _ => (c0..=c1).map(|c| (r1, c)).collect(),
            };
            MetricInterface(slots.into_iter().map(|at| self.elem(at, s).unwrap_or(Elem::Gap)).collect())
        };
        SideProfile { sides: [side(0), side(1), side(2), side(3)] }
    }

    pub fn to_json(&self) -> String {
        let g = self.normalized();
        let (rows, cols) = g.size();
        let cells = g
            .cells
            .iter()
            .map(|(&(row, col), p)| CellJson { row, col, atom: &p.atom, rotation: p.rotation })
            .collect();
        let j = GridJson { rows, cols, cells, inputs: &g.inputs, outputs: &g.outputs };
        serde_json::to_string_pretty(&j).expect("grid serializes")
    }
}

/// Interface seen through a list of ports; Gaps fill holes on a shared side.
fn interface_of(ports: &[PortRef]) -> MetricInterface {
    if ports.is_empty() {
        return MetricInterface::default();
    }
    if ports.iter().all(|p| p.side == ports[0].side) {
        let lo = ports.iter().map(|p| p.slot()).min().unwrap();
        let hi = ports.iter().map(|p| p.slot()).max().unwrap();
        let v = (lo..=hi)
            .map(|s| if ports.iter().any(|p| p.slot() == s) { Elem::Pin } else { Elem::Gap })
            .collect();
        return MetricInterface(v);
    }
    MetricInterface(vec![Elem::Pin; ports.len()])
}

fn mismatch(out: &[PortRef], input: &[PortRef]) -> MetricError {
    MetricError::PlugMismatch { out: trim(&interface_of(out)), input: trim(&interface_of(input)) }
}

/// Places `t` on the unit grid: Next plugs ports together, Juxta stacks.
/// A Juxta whose atoms share one rotation stacks in that frame, others in
/// the frame of the whole term, the first of the four quarter turns that
/// lays it out.
pub fn layout(t: &Term, reg: &AtomRegistry) -> Result<LayoutGrid, MetricError> {
    let mut first = None;
    for frame in 0..4 {
        match place(t, reg, frame).and_then(|g| g.check_adjacency().map(|_| g)) {
            Ok(g) => return Ok(g.normalized()),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    Err(first.unwrap())
}

fn place(t: &Term, reg: &AtomRegistry, frame: usize) -> Result<LayoutGrid, MetricError> {
    match t {
        Term::Atom(a) => {
            let (_, ins, outs) = shape(&a.name, reg)?;
            let k = a.rot.get() as usize;
            let port = |s: &usize| PortRef { row: 0, col: 0, side: (s + k) % 4 };
            let mut cells = BTreeMap::new();
            cells.insert(
                (0, 0),
                Placed { atom: a.name.clone(), rotation: a.rot.degrees(), profile: atom_profile(&a.name, a.rot, reg)? },
            );
            Ok(LayoutGrid { cells, inputs: ins.iter().map(port).collect(), outputs: outs.iter().map(port).collect() })
        }
        Term::Next(x, y) => {
            let gx = place(x, reg, frame)?;
            let gy = place(y, reg, frame)?;
            if gx.outputs.len() != gy.inputs.len() {
                return Err(mismatch(&gx.outputs, &gy.inputs));
            }
            let d = if gx.outputs.is_empty() {
                // Nothing to plug: abut to the right, tops level.
                let (xr0, _, _, xc1) = gx.bounds();
                let (yr0, yc0, _, _) = gy.bounds();
                (xr0 - yr0, xc1 + 1 - yc0)
            } else {
                let mut d = None;
                for (o, i) in gx.outputs.iter().zip(&gy.inputs) {
                    if i.side != (o.side + 2) % 4 {
                        return Err(mismatch(&gx.outputs, &gy.inputs));
                    }
                    let (dr, dc) = DIRS[o.side];
                    let here = (o.row + dr - i.row, o.col + dc - i.col);
                    if d.is_some_and(|d| d != here) {
                        return Err(mismatch(&gx.outputs, &gy.inputs));
                    }
                    d = Some(here);
                }
                d.unwrap()
            };
            let gy = gy.shifted(d);
            if let Some((row, col)) = gx.overlap(&gy) {
                return Err(MetricError::OverlapDetected { row, col });
            }
            let (ins, outs) = (gx.inputs.clone(), gy.outputs.clone());
            Ok(gx.merge(gy, ins, outs))
        }
        Term::Juxta(x, y) => {
            let gx = place(x, reg, frame)?;
            let gy = place(y, reg, frame)?;
            let gy = stack(&gx, &gy, common_rotation(t).unwrap_or(frame));
            let ins = gx.inputs.iter().chain(&gy.inputs).copied().collect();
            let outs = gx.outputs.iter().chain(&gy.outputs).copied().collect();
            Ok(gx.merge(gy, ins, outs))
        }
    }
}

/// Quarter turns shared by every atom.
fn common_rotation(t: &Term) -> Option<usize> {
    let atoms = t.atoms();
    let r = atoms[0].rot;
    atoms.iter().all(|a| a.rot == r).then_some(r.get() as usize)
}

fn dot((r, c): (i64, i64), (dr, dc): (i64, i64)) -> i64 {
    r * dr + c * dc
}

fn extent(g: &LayoutGrid, v: (i64, i64)) -> (i64, i64) {
    let ds = g.cells.keys().map(|&k| dot(k, v));
    (ds.clone().min().unwrap(), ds.max().unwrap())
}

/// Puts `y` after `x` along the stacking direction of frame `rot`, as close
/// as it fits.
fn stack(x: &LayoutGrid, y: &LayoutGrid, rot: usize) -> LayoutGrid {
    let sv = DIRS[(3 + rot) % 4];
    let fv = DIRS[(2 + rot) % 4];
    let source = |g: &LayoutGrid| g.inputs.is_empty() && !g.outputs.is_empty();
    let sink = |g: &LayoutGrid| g.outputs.is_empty() && !g.inputs.is_empty();
    let candidates: Vec<bool> = if source(x) || source(y) {
        vec![true]
    } else if sink(x) || sink(y) {
        vec![false]
    } else {
        vec![false, true]
    };
    let (xs, _) = extent(x, sv);
    let (ys, _) = extent(y, sv);
    let (xf0, xf1) = extent(x, fv);
    let (yf0, yf1) = extent(y, fv);
    let mut best: Option<(usize, LayoutGrid)> = None;
    for at_end in candidates {
        let flow = if at_end { xf1 - yf1 } else { xf0 - yf0 };
        let base = (sv.0 * (xs - ys) + fv.0 * flow, sv.1 * (xs - ys) + fv.1 * flow);
        let placed = (0..)
            .map(|k| y.shifted((base.0 + sv.0 * k, base.1 + sv.1 * k)))
            .find(|g| x.overlap(g).is_none())
            .expect("stacking terminates past the far edge");
        let mut both = x.clone();
        both.cells.extend(placed.cells.clone());
        let (r, c) = both.size();
        if best.as_ref().is_none_or(|(a, _)| r * c < *a) {
            best = Some((r * c, placed));
        }
    }
    best.unwrap().1
}
