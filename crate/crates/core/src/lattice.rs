//! Incidence lattices of wiring diagrams, their canonical forms, and the
//! graph of multiple points.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{LefschetzList, MAX_LINES};
use crate::error::{Error, Result};

/// Incidence between lines and intersection points, stored per point as a
/// bitmask of the lines through it (bit `i` is line `i + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceLattice {
    lines: usize,
    columns: Vec<u16>,
}

impl IncidenceLattice {
    pub fn from_columns(lines: usize, columns: Vec<u16>) -> Result<Self> {
        if lines > MAX_LINES {
            return Err(Error::Input(format!("{lines} lines exceed {MAX_LINES}")));
        }
        let lat = IncidenceLattice { lines, columns };
        lat.validate()?;
        Ok(lat)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Input(m));
        let all = if self.lines == 16 { u16::MAX } else { (1u16 << self.lines) - 1 };
        for (j, &c) in self.columns.iter().enumerate() {
            if c & !all != 0 || c.count_ones() < 2 {
                return bad(format!("point {} must lie on at least two of the {} lines", j + 1, self.lines));
            }
        }
        for (j, &c) in self.columns.iter().enumerate() {
            for &d in &self.columns[j + 1..] {
                if (c & d).count_ones() > 1 {
                    return bad("two lines share more than one point".into());
                }
            }
        }
        Ok(())
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn points(&self) -> usize {
        self.columns.len()
    }

    /// Bitmask of the lines through each point.
    pub fn columns(&self) -> &[u16] {
        &self.columns
    }

    pub fn multiplicity(&self, point: usize) -> usize {
        self.columns[point].count_ones() as usize
    }

    /// Points on `line` (0-based).
    pub fn points_on(&self, line: usize) -> Vec<usize> {
        (0..self.points()).filter(|&j| self.columns[j] >> line & 1 == 1).collect()
    }

    /// The `lines x points` 0/1 matrix.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        (0..self.lines)
            .map(|i| self.columns.iter().map(|&c| (c >> i & 1) as u8).collect())
            .collect()
    }

    /// Lines through simple points only.
    pub fn simple_lines(&self) -> Vec<usize> {
        (0..self.lines)
            .filter(|&i| self.columns.iter().all(|&c| c >> i & 1 == 0 || c.count_ones() == 2))
            .collect()
    }

    /// Whether every pair of lines meets in exactly one listed point.
    pub fn is_complete(&self) -> bool {
        let n = self.lines;
        let mut met = vec![0u8; n * n];
        for &c in &self.columns {
            for i in 0..n {
                for j in i + 1..n {
                    if c >> i & 1 == 1 && c >> j & 1 == 1 {
                        met[i * n + j] += 1;
                    }
                }
            }
        }
        (0..n).all(|i| (i + 1..n).all(|j| met[i * n + j] == 1))
    }
}

/// The incidence lattice read off a Lefschetz list: the wires at local
/// positions `a..=b` just before point `i` are the lines through it.
pub fn lattice_of(list: &LefschetzList) -> IncidenceLattice {
    let l = list.lines();
    let mut wires: Vec<u8> = (0..l as u8).collect();
    let mut columns = Vec::with_capacity(list.len());
    for p in list.pairs() {
        let (a, b) = (p.a as usize - 1, p.b as usize - 1);
        columns.push(wires[a..=b].iter().fold(0u16, |m, &w| m | 1 << w));
        wires[a..=b].reverse();
    }
    IncidenceLattice { lines: l, columns }
}

/// Canonical incidence matrix: the lexicographically largest column list
/// over all admissible line orders, with columns sorted descending and line 1
/// as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub lines: usize,
    pub columns: Vec<u16>,
}

impl CanonicalForm {
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        (0..self.lines)
            .map(|i| {
                let bit = self.lines - 1 - i;
                self.columns.iter().map(|&c| (c >> bit & 1) as u8).collect()
            })
            .collect()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.matrix() {
            let s: String = row.iter().map(|&x| if x == 1 { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Upper bound on the number of line orders tried after refinement.
pub const CANON_SEARCH_LIMIT: u64 = 50_000_000;

/// Stable colouring of lines by iterated refinement on the bipartite
/// line/point incidence graph; colour ids are ordered canonically.
fn refine_line_colours(lat: &IncidenceLattice) -> Vec<usize> {
    let n = lat.lines;
    let mut row: Vec<usize> = (0..n).map(|i| lat.points_on(i).len()).collect();
    let mut col: Vec<usize> = lat.columns.iter().map(|c| c.count_ones() as usize).collect();
    fn relabel<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
        let mut sorted: Vec<K> = keys.to_vec();
        sorted.sort();
        sorted.dedup();
        keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect()
    }
    row = relabel(&row);
    col = relabel(&col);
    loop {
        let classes = |v: &[usize]| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        let before = (classes(&row), classes(&col));
        let row_keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut ns: Vec<usize> = lat.points_on(i).into_iter().map(|j| col[j]).collect();
                ns.sort_unstable();
                (row[i], ns)
            })
            .collect();
        row = relabel(&row_keys);
        let col_keys: Vec<(usize, Vec<usize>)> = lat
            .columns
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let mut ns: Vec<usize> = (0..n).filter(|&i| c >> i & 1 == 1).map(|i| row[i]).collect();
                ns.sort_unstable();
                (col[j], ns)
            })
            .collect();
        col = relabel(&col_keys);
        if (classes(&row), classes(&col)) == before {
            return row;
        }
    }
}

/// Twin classes: lines that an automorphism may swap. In a complete lattice
/// the simple points follow from the multiple ones, so lines with the same
/// multiple points are twins; otherwise rows must agree in full.
fn twin_classes(lat: &IncidenceLattice) -> Vec<usize> {
    let keep: Vec<u16> = if lat.is_complete() {
        lat.columns.iter().copied().filter(|c| c.count_ones() > 2).collect()
    } else {
        lat.columns.clone()
    };
    let rows: Vec<Vec<bool>> = (0..lat.lines).map(|i| keep.iter().map(|c| c >> i & 1 == 1).collect()).collect();
    (0..lat.lines).map(|i| (0..=i).find(|&j| rows[j] == rows[i]).expect("i itself")).collect()
}

/// Exact canonical form: colour refinement fixes an invariant ordering of
/// line classes, then every order within classes is tried, up to swapping twins.
pub fn canonical_form(lat: &IncidenceLattice) -> Result<CanonicalForm> {
    let n = lat.lines;
    let colour = refine_line_colours(lat);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colour.iter().enumerate() {
        cells.entry(c).or_default().push(i);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let twin = twin_classes(lat);
    let work: u64 = cells
        .iter()
        .map(|c| {
            let mut groups: BTreeMap<usize, u64> = BTreeMap::new();
            for &i in c {
                *groups.entry(twin[i]).or_default() += 1;
            }
            // distinct orders of the multiset of twin classes
            let mut acc = 1u64;
            let mut placed = 0u64;
            for k in groups.into_values() {
                for j in 1..=k {
                    placed += 1;
                    acc = acc.saturating_mul(placed) / j;
                }
            }
            acc
        })
        .try_fold(1u64, |acc, f| acc.checked_mul(f))
        .unwrap_or(u64::MAX);
    if work > CANON_SEARCH_LIMIT {
        return Err(Error::Resource(format!("canonical form needs {work} line orders")));
    }
    let mut search = CanonSearch {
        lat,
        cells: &cells,
        twin,
        position: vec![0usize; n],
        scratch: vec![0u16; lat.points()],
        best: None,
    };
    search.cell(0, 0);
    Ok(CanonicalForm { lines: n, columns: search.best.unwrap_or_default() })
}

/// Tries every line order that keeps colour classes in their canonical order.
struct CanonSearch<'a> {
    lat: &'a IncidenceLattice,
    cells: &'a [Vec<usize>],
    twin: Vec<usize>,
    /// `position[line]`: rank in the output order; rank 0 becomes the top bit.
    position: Vec<usize>,
    scratch: Vec<u16>,
    best: Option<Vec<u16>>,
}

impl CanonSearch<'_> {
    fn cell(&mut self, cell: usize, offset: usize) {
        if cell == self.cells.len() {
            self.leaf();
            return;
        }
        let mut used = vec![false; self.cells[cell].len()];
        self.permute(cell, offset, 0, &mut used);
    }

    fn permute(&mut self, cell: usize, offset: usize, k: usize, used: &mut [bool]) {
        let len = self.cells[cell].len();
        if k == len {
            self.cell(cell + 1, offset + len);
            return;
        }
        for idx in 0..len {
            if used[idx] {
                continue;
            }
            let line = self.cells[cell][idx];
            // twins are placed in index order
            if (0..idx).any(|j| !used[j] && self.twin[self.cells[cell][j]] == self.twin[line]) {
                continue;
            }
            used[idx] = true;
            self.position[self.cells[cell][idx]] = offset + k;
            self.permute(cell, offset, k + 1, used);
            used[idx] = false;
        }
    }

    fn leaf(&mut self) {
        let n = self.lat.lines;
        for (s, &c) in self.scratch.iter_mut().zip(self.lat.columns.iter()) {
            let mut m = 0u16;
            let mut bits = c;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                m |= 1 << (n - 1 - self.position[i]);
                bits &= bits - 1;
            }
            *s = m;
        }
        self.scratch.sort_unstable_by(|a, b| b.cmp(a));
        if self.best.as_ref().map_or(true, |b| self.scratch.as_slice() > b.as_slice()) {
            self.best = Some(self.scratch.clone());
        }
    }
}

pub fn lattices_isomorphic(x: &IncidenceLattice, y: &IncidenceLattice) -> Result<bool> {
    if x.lines != y.lines || x.points() != y.points() {
        return Ok(false);
    }
    Ok(canonical_form(x)? == canonical_form(y)?)
}

/// Multiple points (multiplicity at least 3) joined along lines carrying two or more of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPointGraph {
    /// Point indices of the vertices.
    pub vertices: Vec<usize>,
    pub multiplicities: Vec<usize>,
    /// For each line with at least two multiple points, the vertex positions on it.
    pub lines: Vec<(usize, Vec<usize>)>,
}

impl MultiPointGraph {
    /// Connected components as sets of vertex positions.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for (_, vs) in &self.lines {
            for w in vs.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// No cycle: each line is a path through its vertices, and the union is a forest.
    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        for (_, vs) in &self.lines {
            for w in vs.windows(2) {
                if !uf.union(w[0], w[1]) {
                    return false;
                }
            }
        }
        true
    }

    /// Every component lies on one line.
    pub fn components_collinear(&self) -> bool {
        self.components().iter().all(|comp| {
            comp.len() == 1 || self.lines.iter().any(|(_, vs)| comp.iter().all(|v| vs.contains(v)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.lines.iter().map(|(_, vs)| vs.len() - 1).sum()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

pub fn multipoint_graph(lat: &IncidenceLattice) -> MultiPointGraph {
    let vertices: Vec<usize> = (0..lat.points()).filter(|&j| lat.multiplicity(j) >= 3).collect();
    let multiplicities = vertices.iter().map(|&j| lat.multiplicity(j)).collect();
    let lines = (0..lat.lines)
        .filter_map(|i| {
            let on: Vec<usize> = (0..vertices.len()).filter(|&v| lat.columns[vertices[v]] >> i & 1 == 1).collect();
            (on.len() >= 2).then_some((i, on))
        })
        .collect();
    MultiPointGraph { vertices, multiplicities, lines }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Affine,
    Projective,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affine" => Ok(Mode::Affine),
            "projective" => Ok(Mode::Projective),
            _ => Err(Error::Input(format!("mode must be affine or projective, got {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Affine => "affine",
            Mode::Projective => "projective",
        })
    }
}

/// A direct sum of free groups and a free abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructuredGroup {
    /// Ranks (at least 2) of the free factors, ascending.
    pub free_ranks: Vec<usize>,
    pub abelian_rank: usize,
}

impl StructuredGroup {
    pub fn new(mut free_ranks: Vec<usize>, mut abelian_rank: usize) -> Self {
        abelian_rank += free_ranks.iter().filter(|&&r| r == 1).count();
        free_ranks.retain(|&r| r >= 2);
        free_ranks.sort_unstable();
        StructuredGroup { free_ranks, abelian_rank }
    }

    /// Rank of the abelianization.
    pub fn betti(&self) -> usize {
        self.free_ranks.iter().sum::<usize>() + self.abelian_rank
    }
}

impl fmt::Display for StructuredGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.abelian_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.free_ranks.len() {
            let r = self.free_ranks[i];
            let k = self.free_ranks[i..].iter().take_while(|&&x| x == r).count();
            parts.push(if k == 1 { format!("F{r}") } else { format!("F{r}^{k}") });
            i += k;
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The fundamental group when the graph of multiple points forces it:
/// projective needs a forest, affine needs every component on one line.
pub fn structured_group_oracle(lat: &IncidenceLattice, mode: Mode) -> Option<StructuredGroup> {
    let g = multipoint_graph(lat);
    let ok = match mode {
        Mode::Projective => g.is_forest(),
        Mode::Affine => g.components_collinear(),
    };
    if !ok {
        return None;
    }
    let used: usize = g.multiplicities.iter().map(|m| m - 1).sum();
    let extra = usize::from(mode == Mode::Projective);
    let abelian = lat.lines.checked_sub(used + extra)?;
    Some(StructuredGroup::new(g.multiplicities.iter().map(|m| m - 1).collect(), abelian))
}
