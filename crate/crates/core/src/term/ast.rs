use std::fmt;

/// Quarter turns clockwise applied to an atom by `tl`/`tr`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation(u8);

impl Rotation {
    pub const ZERO: Rotation = Rotation(0);

    pub fn quarters(q: i32) -> Rotation {
        Rotation(q.rem_euclid(4) as u8)
    }

    /// Number of clockwise quarter turns, in `0..4`.
    pub fn get(self) -> u8 {
        self.0
    }

    pub fn degrees(self) -> u16 {
        self.0 as u16 * 90
    }

    pub fn cw(self) -> Rotation {
        Rotation((self.0 + 1) % 4)
    }

    pub fn ccw(self) -> Rotation {
        Rotation((self.0 + 3) % 4)
    }

    pub fn compose(self, other: Rotation) -> Rotation {
        Rotation((self.0 + other.0) % 4)
    }
}

/// Leaf of a term. `label` pairs cut atoms explicitly (`Up.3` ... `Down.3`)
/// and otherwise only tags the occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub name: String,
    pub label: Option<u32>,
    pub rot: Rotation,
}

impl Atom {
    pub fn new(name: impl Into<String>) -> Atom {
        Atom { name: name.into(), label: None, rot: Rotation::ZERO }
    }

    pub fn labeled(name: impl Into<String>, label: u32) -> Atom {
        Atom { name: name.into(), label: Some(label), rot: Rotation::ZERO }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Atom(Atom),
    /// `x > y`: x precedes y.
    Next(Box<Term>, Box<Term>),
    /// `x / y`: x lies above y.
    Juxta(Box<Term>, Box<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    pub fn labeled(name: &str, label: u32) -> Term {
        Term::Atom(Atom::labeled(name, label))
    }

    pub fn next(x: Term, y: Term) -> Term {
        Term::Next(Box::new(x), Box::new(y))
    }

    pub fn juxta(x: Term, y: Term) -> Term {
        Term::Juxta(Box::new(x), Box::new(y))
    }

    /// Left-nested Next chain. Panics on an empty iterator.
    pub fn chain<I: IntoIterator<Item = Term>>(items: I) -> Term {
        let mut it = items.into_iter();
        let first = it.next().expect("chain of zero terms");
        it.fold(first, Term::next)
    }

    /// Left-nested Juxta column. Panics on an empty iterator.
    pub fn column<I: IntoIterator<Item = Term>>(items: I) -> Term {
        let mut it = items.into_iter();
        let first = it.next().expect("column of zero terms");
        it.fold(first, Term::juxta)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Term::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Term::Atom(_))
    }

    /// Number of atom occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) => 1,
            Term::Next(x, y) | Term::Juxta(x, y) => x.size() + y.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Atom(_) => 1,
            Term::Next(x, y) | Term::Juxta(x, y) => 1 + x.depth().max(y.depth()),
        }
    }

    /// Atom occurrences in pre-order (upper/earlier first).
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Term::Atom(a) => out.push(a),
            Term::Next(x, y) | Term::Juxta(x, y) => {
                x.collect_atoms(out);
                y.collect_atoms(out);
            }
        }
    }

    pub fn count_atom(&self, name: &str) -> usize {
        self.atoms().iter().filter(|a| a.name == name).count()
    }

    /// Applies `f` to every atom, rebuilding the tree.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Term {
        match self {
            Term::Atom(a) => Term::Atom(f(a)),
            Term::Next(x, y) => Term::next(x.map_atoms(f), y.map_atoms(f)),
            Term::Juxta(x, y) => Term::juxta(x.map_atoms(f), y.map_atoms(f)),
        }
    }

    /// Replaces every atom by a term.
    pub fn substitute(&self, f: &mut impl FnMut(&Atom) -> Term) -> Term {
        match self {
            Term::Atom(a) => f(a),
            Term::Next(x, y) => Term::next(x.substitute(f), y.substitute(f)),
            Term::Juxta(x, y) => Term::juxta(x.substitute(f), y.substitute(f)),
        }
    }

    pub fn get(&self, path: &Path) -> Option<&Term> {
        let mut cur = self;
        for &step in &path.0 {
            cur = match cur {
                Term::Atom(_) => return None,
                Term::Next(x, y) | Term::Juxta(x, y) => {
                    if step == 0 {
                        x
                    } else {
                        y
                    }
                }
            };
        }
        Some(cur)
    }

    /// Returns a copy with the subterm at `path` replaced, or `None` if the path
    /// leaves the tree.
    pub fn replace(&self, path: &Path, with: Term) -> Option<Term> {
        self.replace_at(&path.0, with)
    }

    fn replace_at(&self, steps: &[u8], with: Term) -> Option<Term> {
        let Some((&step, rest)) = steps.split_first() else {
            return Some(with);
        };
        match self {
            Term::Atom(_) => None,
            Term::Next(x, y) => Some(if step == 0 {
                Term::next(x.replace_at(rest, with)?, (**y).clone())
            } else {
                Term::next((**x).clone(), y.replace_at(rest, with)?)
            }),
            Term::Juxta(x, y) => Some(if step == 0 {
                Term::juxta(x.replace_at(rest, with)?, (**y).clone())
            } else {
                Term::juxta((**x).clone(), y.replace_at(rest, with)?)
            }),
        }
    }

    /// All paths in pre-order, root first.
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, p)) = stack.pop() {
            if let Term::Next(x, y) | Term::Juxta(x, y) = t {
                let mut py = p.clone();
                py.push(1);
                stack.push((y, py));
                let mut px = p.clone();
                px.push(0);
                stack.push((x, px));
            }
            out.push(Path(p));
        }
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print(self))
    }
}

/// Position in a term tree: `0` selects the left/upper operand, `1` the
/// right/lower one. Written as a dot-separated string, empty for the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, step: u8) -> Path {
        let mut v = self.0.clone();
        v.push(step);
        Path(v)
    }
}

impl std::str::FromStr for Path {
    type Err = String;

    fn from_str(s: &str) -> Result<Path, String> {
        let s = s.trim();
        if s.is_empty() || s == "." {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|part| match part {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(format!("path step `{other}` is not 0 or 1")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replace_and_get_agree() {
        let t = Term::next(Term::atom("Entry"), Term::juxta(Term::atom("Link"), Term::atom("Up")));
        let p: Path = "1.0".parse().unwrap();
        assert_eq!(t.get(&p), Some(&Term::atom("Link")));
        let r = t.replace(&p, Term::atom("Wire")).unwrap();
        assert_eq!(r.get(&p), Some(&Term::atom("Wire")));
        assert!(t.replace(&"0.0".parse().unwrap(), Term::atom("CS")).is_none());
    }

    #[test]
    fn paths_are_preorder() {
        let t = Term::next(Term::atom("A"), Term::atom("B"));
        let ps: Vec<String> = t.paths().iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, vec![".", "0", "1"]);
    }

    #[test]
    fn rotation_wraps() {
        assert_eq!(Rotation::ZERO.ccw().get(), 3);
        assert_eq!(Rotation::ZERO.ccw().cw(), Rotation::ZERO);
        assert_eq!(Rotation::quarters(-5).get(), 3);
    }
}
