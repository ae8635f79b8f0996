//! Implicit cut pairing.
//!
//! Each subterm carries its open cut occurrences. At a composition the sort
//! tells how many cuts of each letter stay open; the surplus is closed by
//! pairing tails with heads across the two operands, top before bottom.
//! Atom indices are pre-order positions in the fully expanded term.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::tables::{compose, Relation};
use super::Sort;
use crate::term::{AtomClass, AtomRegistry, Path, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutFamily {
    Crossing,
    Cycle,
    Crosslink,
    TwinCut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Left,
    Right,
    None,
}

/// A tail cut (`Down`/`Off`) whose input reappears at a head cut (`Up`/`Set`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CutPair {
    pub tail: usize,
    pub head: usize,
    pub family: CutFamily,
    pub twist: Twist,
    pub labeled: bool,
}

impl CutPair {
    pub fn is_spatial(&self, t: &Term, reg: &AtomRegistry) -> bool {
        let atoms = t.atoms();
        reg.class_of(&atoms[self.tail].name) == Some(AtomClass::Down)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CutBindings {
    pub pairs: Vec<CutPair>,
}

impl CutBindings {
    pub fn partner_of_tail(&self, tail: usize) -> Option<&CutPair> {
        self.pairs.iter().find(|p| p.tail == tail)
    }

    pub fn partner_of_head(&self, head: usize) -> Option<&CutPair> {
        self.pairs.iter().find(|p| p.head == head)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("cut `{atom}` (atom #{index}) has no partner")]
    UnmatchedCut { atom: String, index: usize },
    #[error("at {path}: {family} cuts pair in both directions")]
    AmbiguousCut { path: String, family: &'static str },
    #[error("label {label} does not name exactly one tail/head pair")]
    DuplicateLabel { label: u32 },
}

#[derive(Clone, Debug, Default)]
pub struct CutAnalysis {
    pub bindings: CutBindings,
    pub errors: Vec<CutError>,
}

/// Pairs every cut of a fully expanded term or returns the first problem.
pub fn bind_cuts(t: &Term, reg: &AtomRegistry) -> Result<CutBindings, CutError> {
    let full = reg.expand_all(t);
    let mut a = analyze(&full, reg, true);
    if a.errors.is_empty() {
        Ok(a.bindings)
    } else {
        Err(a.errors.swap_remove(0))
    }
}

/// Pairing with every problem collected. Cuts that the root sort itself
/// accounts for (such as the open `Up` of `Link/Up`) are not errors.
pub fn analyze_cuts(full: &Term, reg: &AtomRegistry) -> CutAnalysis {
    analyze(full, reg, false)
}

#[derive(Clone, Copy, Debug)]
struct Open {
    index: usize,
    letter: char,
    label: Option<u32>,
}

const FAMILIES: [(char, char, &str); 2] = [('D', 'U', "spatial"), ('O', 'S', "planar")];

fn letter_of(class: Option<AtomClass>) -> Option<char> {
    match class? {
        AtomClass::Up => Some('U'),
        AtomClass::Down => Some('D'),
        AtomClass::Set => Some('S'),
        AtomClass::Off => Some('O'),
        _ => None,
    }
}

fn analyze(full: &Term, reg: &AtomRegistry, strict: bool) -> CutAnalysis {
    let mut out = CutAnalysis::default();
    let atoms = full.atoms();

    let mut by_label: BTreeMap<u32, Vec<(usize, char)>> = BTreeMap::new();
    for (i, a) in atoms.iter().enumerate() {
        if let (Some(l), Some(c)) = (a.label, letter_of(reg.class_of(&a.name))) {
            by_label.entry(l).or_default().push((i, c));
        }
    }
    let mut bad_labels = Vec::new();
    for (&l, occ) in &by_label {
        let ok = occ.len() == 2 && FAMILIES.iter().any(|&(t, h, _)| {
            let mut cs = [occ[0].1, occ[1].1];
            cs.sort_unstable();
            let mut want = [t, h];
            want.sort_unstable();
            cs == want
        });
        if !ok && occ.len() != 1 {
            out.errors.push(CutError::DuplicateLabel { label: l });
            bad_labels.push(l);
        }
    }

    let mut idx = 0;
    let (sort, open) = go(full, reg, &Path::root(), &mut idx, &mut out, &bad_labels);
    let mut counts: BTreeMap<char, usize> = BTreeMap::new();
    for o in &open {
        *counts.entry(o.letter).or_default() += 1;
    }
    for o in &open {
        if o.label.is_some_and(|l| bad_labels.contains(&l)) {
            continue;
        }
        let allowed = match (strict, sort) {
            (false, Some(s)) => s.cut_letters(o.letter),
            _ => 0,
        };
        if counts[&o.letter] > allowed {
            out.errors.push(CutError::UnmatchedCut { atom: atoms[o.index].name.clone(), index: o.index });
        }
    }
    out.bindings.pairs.sort_by_key(|p| (p.tail, p.head));
    out
}

fn go(
    t: &Term,
    reg: &AtomRegistry,
    path: &Path,
    idx: &mut usize,
    out: &mut CutAnalysis,
    bad_labels: &[u32],
) -> (Option<Sort>, Vec<Open>) {
    let (rel, x, y) = match t {
        Term::Atom(a) => {
            let i = *idx;
            *idx += 1;
            let sort = reg.get(&a.name).map(|d| d.sort);
            let open = letter_of(reg.class_of(&a.name))
                .map(|letter| Open { index: i, letter, label: a.label })
                .into_iter()
                .collect();
            return (sort, open);
        }
        Term::Next(x, y) => (Relation::Next, x, y),
        Term::Juxta(x, y) => (Relation::Juxta, x, y),
    };
    let (sx, mut ox) = go(x, reg, &path.child(0), idx, out, bad_labels);
    let (sy, mut oy) = go(y, reg, &path.child(1), idx, out, bad_labels);
    let cell = match (sx, sy) {
        (Some(a), Some(b)) => compose(rel, a, b),
        _ => None,
    };
    let result = cell.map(|c| c.result);
    let twin = cell.is_some_and(|c| c.table() == Some(super::TableId::TwinCut));
    let twist = match cell.and_then(|c| c.tag().map(str::to_string)).as_deref() {
        Some("left") if twin => Twist::Left,
        Some("right") if twin => Twist::Right,
        _ => Twist::None,
    };

    // explicit labels first
    let labeled: Vec<(Open, Open)> = ox
        .iter()
        .filter_map(|a| {
            let l = a.label?;
            if bad_labels.contains(&l) {
                return None;
            }
            oy.iter().find(|b| b.label == Some(l)).map(|b| (*a, *b))
        })
        .collect();
    for (a, b) in labeled {
        let (tail, head) = if a.letter == 'D' || a.letter == 'O' { (a, b) } else { (b, a) };
        let family = classify(tail.letter, rel, twin);
        out.bindings.pairs.push(CutPair {
            tail: tail.index,
            head: head.index,
            family,
            twist: if family == CutFamily::TwinCut { twist } else { Twist::None },
            labeled: true,
        });
        ox.retain(|o| o.index != a.index);
        oy.retain(|o| o.index != b.index);
    }

    for (tl, hl, fam_name) in FAMILIES {
        let free = |v: &Vec<Open>, c: char| -> Vec<Open> {
            v.iter().filter(|o| o.letter == c && o.label.is_none()).copied().collect()
        };
        // orientation A: tail above/before head; B: head above/before tail
        let (tx, hy, hx, ty) = (free(&ox, tl), free(&oy, hl), free(&ox, hl), free(&oy, tl));
        let (k, pairs): (usize, Vec<(Open, Open)>) = match result {
            Some(r) => {
                let count = |c: char| ox.iter().chain(&oy).filter(|o| o.letter == c).count();
                let dec_t = count(tl).saturating_sub(r.cut_letters(tl));
                let dec_h = count(hl).saturating_sub(r.cut_letters(hl));
                let k = dec_t.min(dec_h);
                if k == 0 {
                    continue;
                }
                let a_ok = !tx.is_empty() && !hy.is_empty();
                let b_ok = !hx.is_empty() && !ty.is_empty();
                if a_ok && b_ok {
                    out.errors.push(CutError::AmbiguousCut { path: path.to_string(), family: fam_name });
                    continue;
                }
                if a_ok {
                    (k, tx.into_iter().zip(hy).collect())
                } else {
                    (k, ty.into_iter().zip(hx).collect())
                }
            }
            None if rel == Relation::Next => {
                if tl == 'D' {
                    (usize::MAX, tx.into_iter().zip(hy).collect())
                } else {
                    (usize::MAX, ty.into_iter().zip(hx).collect())
                }
            }
            None => continue,
        };
        for (tail, head) in pairs.into_iter().take(k) {
            let family = classify(tl, rel, twin);
            out.bindings.pairs.push(CutPair {
                tail: tail.index,
                head: head.index,
                family,
                twist: if family == CutFamily::TwinCut { twist } else { Twist::None },
                labeled: false,
            });
            ox.retain(|o| o.index != tail.index && o.index != head.index);
            oy.retain(|o| o.index != tail.index && o.index != head.index);
        }
    }
    ox.extend(oy);
    (result, ox)
}

fn classify(tail_letter: char, rel: Relation, twin: bool) -> CutFamily {
    match (tail_letter, rel) {
        _ if twin && rel == Relation::Juxta => CutFamily::TwinCut,
        ('D', _) => CutFamily::Crossing,
        (_, Relation::Next) => CutFamily::Cycle,
        _ => CutFamily::Crosslink,
    }
}
