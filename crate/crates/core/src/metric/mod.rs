//! Planar rectangular metric: side profiles, trimming, tilting, the metric
//! multiple structures and unit-grid layout.

mod builders;
mod layout;
mod render;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use builders::{metric_multiple_fork, metric_multiple_join, metric_multiple_link, Lane, Turn};
pub use layout::{layout, LayoutGrid, Placed, PortRef};
pub use render::{render_ascii, render_svg, CELL};

use crate::term::{AtomClass, AtomRegistry, Rotation, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Pin,
    Gap,
}

/// Slots of one side, top to bottom or left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MetricInterface(pub Vec<Elem>);

impl MetricInterface {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_pin(&self) -> Option<usize> {
        self.0.iter().position(|&e| e == Elem::Pin)
    }

    pub fn pins(&self) -> usize {
        self.0.iter().filter(|&&e| e == Elem::Pin).count()
    }
}

impl fmt::Display for MetricInterface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<&str> = self.0.iter().map(|e| if *e == Elem::Pin { "Pin" } else { "Gap" }).collect();
        f.write_str(&parts.join("/"))
    }
}

impl FromStr for MetricInterface {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(MetricInterface::default());
        }
        s.split('/')
            .map(|p| match p.trim() {
                "Pin" => Ok(Elem::Pin),
                "Gap" => Ok(Elem::Gap),
                other => Err(format!("`{other}` is neither Pin nor Gap")),
            })
            .collect::<Result<_, _>>()
            .map(MetricInterface)
    }
}

impl Serialize for MetricInterface {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Clockwise sides: 0 left, 1 top, 2 right, 3 bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SideProfile {
    pub sides: [MetricInterface; 4],
}

impl SideProfile {
    fn atom(e: [Elem; 4]) -> SideProfile {
        SideProfile { sides: e.map(|x| MetricInterface(vec![x])) }
    }

    /// Side `s` moves to `s + k` for `k` clockwise quarter turns.
    pub fn rotated(&self, k: u8) -> SideProfile {
        let mut sides: [MetricInterface; 4] = Default::default();
        for s in 0..4 {
            sides[(s + k as usize) % 4] = self.sides[s].clone();
        }
        SideProfile { sides }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("`{0}` has no metric shape")]
    NonMetric(String),
    #[error("plug mismatch: trim(out(x)) = {out} but trim(in(y)) = {input}")]
    PlugMismatch { out: MetricInterface, input: MetricInterface },
    #[error("layout overlap at row {row}, column {col}")]
    OverlapDetected { row: i64, col: i64 },
    #[error("touching sides disagree at row {row}, column {col}, side {side}")]
    PinClash { row: i64, col: i64, side: usize },
    #[error("there is no metric multiple structure that turns both left and right")]
    NoLrStructure,
}

use Elem::{Gap as G, Pin as P};

/// Unrotated profile, input sides and output sides of a metric atom.
type Shape = ([Elem; 4], &'static [usize], &'static [usize]);

pub(crate) fn shape(name: &str, reg: &AtomRegistry) -> Result<Shape, MetricError> {
    let class = reg.class_of(name).ok_or_else(|| MetricError::NonMetric(name.to_string()))?;
    Ok(match (class, name) {
        (AtomClass::Entry | AtomClass::Up | AtomClass::Set, _) => ([G, G, P, G], &[], &[2]),
        (AtomClass::Exit | AtomClass::Down | AtomClass::Off, _) => ([P, G, G, G], &[0], &[]),
        (AtomClass::Cs, _) => ([G, G, G, G], &[], &[]),
        (_, "F_lr") => ([P, P, G, P], &[0], &[1, 3]),
        (_, "F_ls") => ([P, P, P, G], &[0], &[1, 2]),
        (_, "F_sr") => ([P, G, P, P], &[0], &[2, 3]),
        (_, "J_lr") => ([G, P, P, P], &[1, 3], &[2]),
        (_, "J_ls") => ([P, P, P, G], &[1, 0], &[2]),
        (_, "J_sr") => ([P, G, P, P], &[0, 3], &[2]),
        (_, "L_s") => ([P, G, P, G], &[0], &[2]),
        (_, "L_l") => ([P, P, G, G], &[0], &[1]),
        (_, "L_r") => ([P, G, G, P], &[0], &[3]),
        (AtomClass::Junction, "F_ld") => ([P, P, G, G], &[0], &[1]),
        (AtomClass::Junction, "F_rd") => ([P, G, G, P], &[0], &[3]),
        (AtomClass::Junction, "J_lu") => ([G, P, P, G], &[1], &[2]),
        (AtomClass::Junction, "J_ru") => ([G, G, P, P], &[3], &[2]),
        _ => return Err(MetricError::NonMetric(name.to_string())),
    })
}

pub fn sides(name: &str, reg: &AtomRegistry) -> Result<SideProfile, MetricError> {
    shape(name, reg).map(|(p, _, _)| SideProfile::atom(p))
}

pub fn atrim(i: &MetricInterface) -> MetricInterface {
    MetricInterface(i.0.iter().copied().skip_while(|&e| e == Elem::Gap).collect())
}

pub fn btrim(i: &MetricInterface) -> MetricInterface {
    let end = i.0.iter().rposition(|&e| e == Elem::Pin).map_or(0, |p| p + 1);
    MetricInterface(i.0[..end].to_vec())
}

pub fn trim(i: &MetricInterface) -> MetricInterface {
    atrim(&btrim(i))
}

/// Gates `x > y`: accepted iff the trimmed interfaces agree. Returns the
/// slot offset that puts the first Pin of `in(y)` opposite that of `out(x)`.
pub fn metric_check(out: &MetricInterface, input: &MetricInterface) -> Result<i64, MetricError> {
    let (a, b) = (trim(out), trim(input));
    if a != b {
        return Err(MetricError::PlugMismatch { out: a, input: b });
    }
    Ok(match (out.first_pin(), input.first_pin()) {
        (Some(x), Some(y)) => x as i64 - y as i64,
        _ => 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tilt {
    /// Anticlockwise.
    Left,
    /// Clockwise.
    Right,
}

pub fn tilt(t: &Term, dir: Tilt, reg: &AtomRegistry) -> Result<Term, MetricError> {
    for a in t.atoms() {
        shape(&a.name, reg)?;
    }
    let q = match dir {
        Tilt::Left => Rotation::quarters(-1),
        Tilt::Right => Rotation::quarters(1),
    };
    Ok(t.map_atoms(&mut |a| {
        let mut a = a.clone();
        a.rot = a.rot.compose(q);
        a
    }))
}

/// Profile of an atom carrying a rotation.
pub fn atom_profile(name: &str, rot: Rotation, reg: &AtomRegistry) -> Result<SideProfile, MetricError> {
    Ok(sides(name, reg)?.rotated(rot.get()))
}
