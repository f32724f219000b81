//! Static SVG drawings of wiring diagrams and multiple-point graphs.

use std::fmt::Write;
use std::str::FromStr;

use crate::diagram::LefschetzList;
use crate::error::{Error, Result};
use crate::lattice::{lattice_of, multipoint_graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    Wiring,
    Multipoint,
}

impl FromStr for RenderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wiring" => Ok(RenderKind::Wiring),
            "multipoint" => Ok(RenderKind::Multipoint),
            _ => Err(Error::Input(format!("render kind must be wiring or multipoint, got {s:?}"))),
        }
    }
}

const MARGIN: f64 = 30.0;
const COLUMN: f64 = 40.0;
const ROW: f64 = 30.0;

pub fn render(list: &LefschetzList, kind: RenderKind) -> String {
    match kind {
        RenderKind::Wiring => render_wiring(list),
        RenderKind::Multipoint => render_multipoint(list),
    }
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
}

/// Wire labels by local position (bottom first), before the first point and
/// after each one.
pub fn column_orders(list: &LefschetzList) -> Vec<Vec<usize>> {
    let mut wires: Vec<usize> = (1..=list.lines()).collect();
    let mut out = vec![wires.clone()];
    for p in list.pairs() {
        wires[p.a as usize - 1..p.b as usize].reverse();
        out.push(wires.clone());
    }
    out
}

/// Wires are drawn left to right with local index 1 at the bottom; every
/// point gets its own evenly spaced column.
pub fn render_wiring(list: &LefschetzList) -> String {
    let l = list.lines();
    let p = list.len();
    let width = 2.0 * MARGIN + COLUMN * (p as f64 + 1.0);
    let height = 2.0 * MARGIN + ROW * (l.max(1) as f64 - 1.0);
    let y = |pos: f64| height - MARGIN - ROW * (pos - 1.0);
    let mut paths: Vec<Vec<(f64, f64)>> = vec![Vec::new(); l + 1];
    let mut pos_of: Vec<usize> = (0..=l).collect();
    for w in 1..=l {
        paths[w].push((MARGIN, y(w as f64)));
    }
    let orders = column_orders(list);
    for (i, pair) in list.pairs().iter().enumerate() {
        let x = MARGIN + COLUMN * (i as f64 + 1.0);
        let mid = (pair.a + pair.b) as f64 / 2.0;
        for w in 1..=l {
            let pos = pos_of[w];
            if pos >= pair.a as usize && pos <= pair.b as usize {
                paths[w].push((x - COLUMN / 2.0, y(pos as f64)));
                paths[w].push((x, y(mid)));
            }
        }
        for (k, &w) in orders[i + 1].iter().enumerate() {
            let pos = k + 1;
            if pos_of[w] != pos {
                paths[w].push((x + COLUMN / 2.0, y(pos as f64)));
            }
            pos_of[w] = pos;
        }
    }
    let mut out = String::new();
    header(&mut out, width, height);
    for w in 1..=l {
        paths[w].push((width - MARGIN, y(pos_of[w] as f64)));
        let pts: Vec<String> = paths[w].iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        let _ = writeln!(
            out,
            r#"  <polyline class="wire" data-wire="{w}" fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
    }
    for (i, pair) in list.pairs().iter().enumerate() {
        let x = MARGIN + COLUMN * (i as f64 + 1.0);
        let mid = (pair.a + pair.b) as f64 / 2.0;
        let _ = writeln!(
            out,
            r#"  <circle class="point" data-pair="{},{}" cx="{x:.1}" cy="{:.1}" r="3"/>"#,
            pair.a,
            pair.b,
            y(mid)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Multiple points on a circle; triple points as small dots, larger
/// multiplicities as labelled bigger dots, lines through three or more
/// multiple points drawn thick.
pub fn render_multipoint(list: &LefschetzList) -> String {
    let g = multipoint_graph(&lattice_of(list));
    let n = g.vertices.len();
    let size = 240.0;
    let c = size / 2.0;
    let r = if n <= 1 { 0.0 } else { size / 2.0 - MARGIN };
    let at = |v: usize| {
        let t = std::f64::consts::TAU * v as f64 / n.max(1) as f64;
        (c + r * t.cos(), c - r * t.sin())
    };
    let mut out = String::new();
    header(&mut out, size, size);
    for (line, vs) in &g.lines {
        let pts: Vec<String> = vs
            .iter()
            .map(|&v| {
                let (x, y) = at(v);
                format!("{x:.1},{y:.1}")
            })
            .collect();
        let width = if vs.len() > 2 { 4.0 } else { 1.5 };
        let _ = writeln!(
            out,
            r#"  <polyline class="line" data-line="{}" fill="none" stroke="black" stroke-width="{width}" points="{}"/>"#,
            line + 1,
            pts.join(" ")
        );
    }
    for (v, &m) in g.multiplicities.iter().enumerate() {
        let (x, y) = at(v);
        let radius = if m > 3 { 9.0 } else { 5.0 };
        let _ = writeln!(out, r#"  <circle class="point" data-multiplicity="{m}" cx="{x:.1}" cy="{y:.1}" r="{radius}"/>"#);
        if m > 3 {
            let _ = writeln!(
                out,
                r#"  <text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{m}</text>"#,
                x,
                y - radius - 4.0
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
