use std::fmt::Write as _;

use super::{Elem, LayoutGrid, Placed};

/// SVG cell edge length.
pub const CELL: i64 = 32;

fn glyph(p: &Placed) -> char {
    match p.atom.as_str() {
        "Entry" => 'E',
        "Exit" => 'X',
        "Up" => 'U',
        "Down" => 'D',
        "Set" => 'S',
        "Off" => 'O',
        "CS" => ' ',
        "F_ld" | "F_rd" => 'f',
        "J_lu" | "J_ru" => 'j',
        name => name.chars().next().unwrap_or('?'),
    }
}

fn pin(p: &Placed, side: usize) -> bool {
    p.profile.sides[side].0[0] == Elem::Pin
}

/// Three text rows per cell row, three characters per cell.
pub fn render_ascii(g: &LayoutGrid) -> String {
    let g = g.normalized();
    let (rows, cols) = g.size();
    let mut out = String::new();
    for r in 0..rows as i64 {
        let mut lines = [String::new(), String::new(), String::new()];
        for c in 0..cols as i64 {
            let Some(p) = g.cells.get(&(r, c)) else {
                for l in &mut lines {
                    l.push_str("   ");
                }
                continue;
            };
            let v = |s| if pin(p, s) { 'o' } else { '-' };
            let h = |s| if pin(p, s) { 'o' } else { '|' };
            write!(lines[0], "+{}+", v(1)).unwrap();
            write!(lines[1], "{}{}{}", h(0), glyph(p), h(2)).unwrap();
            write!(lines[2], "+{}+", v(3)).unwrap();
        }
        for l in lines {
            out.push_str(l.trim_end());
            out.push('\n');
        }
    }
    out
}

pub fn render_svg(g: &LayoutGrid) -> String {
    let g = g.normalized();
    let (rows, cols) = g.size();
    let (w, h) = (cols as i64 * CELL, rows as i64 * CELL);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    let half = CELL / 2;
    let tick = CELL / 4;
    for (&(r, c), p) in &g.cells {
        let (x, y) = (c * CELL, r * CELL);
        let fill = if p.atom == "CS" { "white" } else { "#f3e2c7" };
        writeln!(
            s,
            r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="black"/>"##
        )
        .unwrap();
        if p.atom != "CS" {
            writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="9" text-anchor="middle" transform="rotate({} {} {})">{}</text>"#,
                x + half,
                y + half + 3,
                p.rotation,
                x + half,
                y + half,
                p.atom
            )
            .unwrap();
        }
        for side in 0..4 {
            if !pin(p, side) {
                continue;
            }
            let (x1, y1, x2, y2) = match side {
                0 => (x, y + half, x + tick, y + half),
                1 => (x + half, y, x + half, y + tick),
                2 => (x + CELL - tick, y + half, x + CELL, y + half),
                _ => (x + half, y + CELL - tick, x + half, y + CELL),
            };
            writeln!(s, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#b5651d" stroke-width="3"/>"##).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
