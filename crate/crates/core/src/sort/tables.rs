//! Production tables loaded from the bundled `.tbl` data files.
//!
//! File format: `grid <rel> <tag> rows .. cols ..` opens a grid, each
//! following `<rel> <row> <col> <result>` line fills one cell. Cells that
//! are never filled are blank.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Next,
    Juxta,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Next => ">",
            Relation::Juxta => "/",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Next => "Next",
            Relation::Juxta => "Juxta",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Fundamental,
    Spatial,
    Planarizing,
    Linearizing,
    TwinCut,
}

impl TableId {
    /// Structural tables in lookup order.
    pub const STRUCTURAL: [TableId; 4] =
        [TableId::Spatial, TableId::Planarizing, TableId::Linearizing, TableId::TwinCut];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Fundamental => "fundamental",
            TableId::Spatial => "spatial",
            TableId::Planarizing => "planarizing",
            TableId::Linearizing => "linearizing",
            TableId::TwinCut => "twin_cut",
        }
    }

    fn source(self) -> &'static str {
        match self {
            TableId::Fundamental => include_str!("../../tables/fundamental.tbl"),
            TableId::Spatial => include_str!("../../tables/spatial.tbl"),
            TableId::Planarizing => include_str!("../../tables/planarizing.tbl"),
            TableId::Linearizing => include_str!("../../tables/linearizing.tbl"),
            TableId::TwinCut => include_str!("../../tables/twin_cut.tbl"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub table: TableId,
    pub relation: Relation,
    /// `main`, or `left`/`right` for the twisted halves.
    pub tag: String,
    pub rows: Vec<Sort>,
    pub cols: Vec<Sort>,
    pub cells: HashMap<(Sort, Sort), Sort>,
}

impl Grid {
    pub fn get(&self, row: Sort, col: Sort) -> Option<Sort> {
        self.cells.get(&(row, col)).copied()
    }
}

/// A defined cell together with where it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell<'a> {
    pub result: Sort,
    pub grid: Option<&'a Grid>,
}

impl Cell<'_> {
    pub fn table(&self) -> Option<TableId> {
        self.grid.map(|g| g.table)
    }

    pub fn tag(&self) -> Option<&str> {
        self.grid.map(|g| g.tag.as_str())
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Grid) -> bool {
        self.table == other.table && self.relation == other.relation && self.tag == other.tag
    }
}

impl Eq for Grid {}

#[derive(Debug)]
pub struct Tables {
    pub grids: Vec<Grid>,
}

pub fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| Tables::load().unwrap_or_else(|e| panic!("bundled table: {e}")))
}

impl Tables {
    fn load() -> Result<Tables, String> {
        let mut grids = Vec::new();
        for id in [TableId::Fundamental].into_iter().chain(TableId::STRUCTURAL) {
            grids.extend(parse_table(id, id.source())?);
        }
        let t = Tables { grids };
        t.assert_agreement()?;
        Ok(t)
    }

    fn assert_agreement(&self) -> Result<(), String> {
        let mut seen: HashMap<(Relation, Sort, Sort), (Sort, TableId)> = HashMap::new();
        for g in &self.grids {
            for (&(r, c), &v) in &g.cells {
                if let Some(&(w, other)) = seen.get(&(g.relation, r, c)) {
                    if w != v {
                        return Err(format!(
                            "{r}{}{c} is {w} in {} but {v} in {}",
                            g.relation.symbol(),
                            other.name(),
                            g.table.name()
                        ));
                    }
                } else {
                    seen.insert((g.relation, r, c), (v, g.table));
                }
            }
        }
        Ok(())
    }

    pub fn grids_of(&self, table: TableId) -> impl Iterator<Item = &Grid> {
        self.grids.iter().filter(move |g| g.table == table)
    }

    /// First defined cell in the structural tables.
    pub fn lookup(&self, rel: Relation, x: Sort, y: Sort) -> Option<Cell<'_>> {
        self.grids
            .iter()
            .filter(|g| g.table != TableId::Fundamental && g.relation == rel)
            .find_map(|g| g.get(x, y).map(|result| Cell { result, grid: Some(g) }))
    }

    pub fn lookup_fundamental(&self, rel: Relation, x: Sort, y: Sort) -> Option<Sort> {
        self.grids_of(TableId::Fundamental)
            .filter(|g| g.relation == rel)
            .find_map(|g| g.get(x, y))
    }
}

/// Structural composition including the B-neutral Next rule: a Next pair
/// absent from every table composes as `B > z = z` and `z > B = z`.
pub fn compose(rel: Relation, x: Sort, y: Sort) -> Option<Cell<'static>> {
    let t = tables();
    if let Some(c) = t.lookup(rel, x, y) {
        return Some(c);
    }
    match (rel, x, y) {
        (Relation::Next, Sort::B, z) | (Relation::Next, z, Sort::B) => {
            Some(Cell { result: z, grid: None })
        }
        _ => None,
    }
}

fn parse_table(id: TableId, src: &str) -> Result<Vec<Grid>, String> {
    let mut grids: Vec<Grid> = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| format!("{}:{}: {m}", id.name(), n + 1);
        let words: Vec<&str> = line.split_whitespace().collect();
        let rel = |w: &str| match w {
            "next" => Ok(Relation::Next),
            "juxta" => Ok(Relation::Juxta),
            other => Err(err(format!("unknown relation `{other}`"))),
        };
        let sort = |w: &str| w.parse::<Sort>().map_err(&err);
        if words[0] == "grid" {
            let rows_at = words.iter().position(|w| *w == "rows").ok_or_else(|| err("no rows".into()))?;
            let cols_at = words.iter().position(|w| *w == "cols").ok_or_else(|| err("no cols".into()))?;
            if rows_at != 3 || cols_at < rows_at {
                return Err(err("malformed grid header".into()));
            }
            grids.push(Grid {
                table: id,
                relation: rel(words[1])?,
                tag: words[2].to_string(),
                rows: words[rows_at + 1..cols_at].iter().map(|w| sort(w)).collect::<Result<_, _>>()?,
                cols: words[cols_at + 1..].iter().map(|w| sort(w)).collect::<Result<_, _>>()?,
                cells: HashMap::new(),
            });
            continue;
        }
        if words.len() != 4 {
            return Err(err("expected `<rel> <row> <col> <result>`".into()));
        }
        let (r, x, y, v) = (rel(words[0])?, sort(words[1])?, sort(words[2])?, sort(words[3])?);
        let g = grids.last_mut().ok_or_else(|| err("cell before any grid".into()))?;
        if g.relation != r {
            return Err(err("cell relation differs from its grid".into()));
        }
        if !g.rows.contains(&x) || !g.cols.contains(&y) {
            return Err(err(format!("{x}{}{y} lies outside the grid", r.symbol())));
        }
        if g.cells.insert((x, y), v).is_some() {
            return Err(err(format!("{x}{}{y} filled twice", r.symbol())));
        }
    }
    Ok(grids)
}
