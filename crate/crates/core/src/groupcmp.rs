//! Invariants of finitely presented groups: abelianization, homomorphism
//! counts into small finite groups, and lower central series ranks.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::lattice::{Mode, StructuredGroup};
use crate::pi1::{cyclic_reduce, free_reduce, inverse, GroupPresentation, Word};

/// Free rank and torsion coefficients of the abelianization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub rank: usize,
    /// Elementary divisors greater than 1, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero entries only).
pub fn smith_diagonal(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // smallest nonzero pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..cols {
                if !m[i][j].is_zero() && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..nrows {
                if !m[i][t].is_zero() {
                    let q = &m[i][t] / &m[t][t];
                    for j in t..cols {
                        let v = &q * &m[t][j];
                        m[i][j] -= v;
                    }
                    if !m[i][t].is_zero() {
                        done = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = &m[t][j] / &m[t][t];
                    for row in m.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                    if !m[t][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                // the pivot must divide every remaining entry
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = m[i][j].clone();
                            m[t][j] += v;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Exponent-sum matrix of the relators.
pub fn exponent_matrix(pres: &GroupPresentation) -> Vec<Vec<i64>> {
    pres.relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; pres.generators];
            for &x in r {
                row[x.unsigned_abs() as usize - 1] += x.signum() as i64;
            }
            row
        })
        .collect()
}

pub fn abelianization(pres: &GroupPresentation) -> AbelianInvariants {
    let diag = smith_diagonal(&exponent_matrix(pres), pres.generators);
    let one = BigInt::from(1);
    AbelianInvariants {
        rank: pres.generators - diag.len(),
        torsion: diag.into_iter().filter(|d| d > &one).collect(),
    }
}

/// A finite group given by its Cayley table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<u8>>,
    inv: Vec<u8>,
}

impl FiniteGroup {
    /// Closure of permutation generators on `0..degree`.
    pub fn from_permutations(name: &str, degree: usize, gens: &[Vec<u8>]) -> Self {
        let id: Vec<u8> = (0..degree as u8).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<u8> = elems[i].iter().map(|&x| g[x as usize]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let index = |p: &Vec<u8>| elems.iter().position(|e| e == p).expect("closed") as u8;
        let table: Vec<Vec<u8>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        // a * b: apply b first, then a
                        let p: Vec<u8> = elems[b].iter().map(|&x| elems[a][x as usize]).collect();
                        index(&p)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(name, table)
    }

    fn from_table(name: &str, table: Vec<Vec<u8>>) -> Self {
        let n = table.len();
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).expect("group") as u8).collect();
        FiniteGroup { name: name.to_string(), table, inv }
    }

    pub fn cyclic(n: usize) -> Self {
        let g: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
        Self::from_permutations(&format!("C{n}"), n, &[g])
    }

    pub fn klein() -> Self {
        Self::from_permutations("C2xC2", 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    pub fn dihedral8() -> Self {
        Self::from_permutations("D4", 4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]])
    }

    pub fn quaternion() -> Self {
        // elements s*u with u in {1,i,j,k}, s in {+,-}; index = u + 4*(s == -)
        let unit = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, neg) = unit(a % 4, b % 4);
                        let sign = neg ^ (a >= 4) ^ (b >= 4);
                        (u + if sign { 4 } else { 0 }) as u8
                    })
                    .collect()
            })
            .collect();
        Self::from_table("Q8", table)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "C2" => Self::cyclic(2),
            "C3" => Self::cyclic(3),
            "C4" => Self::cyclic(4),
            "C8" => Self::cyclic(8),
            "C2xC2" => Self::klein(),
            "S3" => Self::symmetric3(),
            "D4" => Self::dihedral8(),
            "Q8" => Self::quaternion(),
            _ => return input(format!("unknown target group {name:?} (known: {})", DEFAULT_TARGETS.join(", "))),
        })
    }

    /// Orders of the cyclic factors for `C<n>` and `C2xC2`.
    fn cyclic_factors(&self) -> Option<Vec<u64>> {
        if self.name == "C2xC2" {
            return Some(vec![2, 2]);
        }
        self.name.strip_prefix('C')?.parse().ok().map(|n| vec![n])
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.table[a as usize][b as usize]
    }

    /// Bitmask of the subgroup generated by `gens`.
    fn generated(&self, gens: &[u8]) -> u64 {
        let mut seen = 1u64;
        let mut frontier = vec![0u8];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen >> y & 1 == 0 {
                    seen |= 1 << y;
                    frontier.push(y);
                }
            }
        }
        seen
    }
}

pub const DEFAULT_TARGETS: &[&str] = &["C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8", "C8"];

/// Default cap on generator assignments tried by [`quotient_count`].
pub const DEFAULT_ASSIGNMENT_BUDGET: u64 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientCount {
    pub homomorphisms: u64,
    pub surjections: u64,
}

/// Counts homomorphisms (and surjective ones) to `target`. Cyclic targets and
/// the Klein group are handled through the abelianization.
pub fn quotient_count(pres: &GroupPresentation, target: &FiniteGroup, budget: u64) -> Result<QuotientCount> {
    let Some(factors) = target.cyclic_factors() else {
        return quotient_count_search(pres, target, budget);
    };
    let ab = abelianization(pres);
    let homs = |orders: &[u64]| -> u64 {
        orders
            .iter()
            .map(|&n| {
                let torsion: u64 = ab.torsion.iter().map(|d| gcd_big(d, n)).product();
                n.pow(ab.rank as u32) * torsion
            })
            .product()
    };
    let homomorphisms = homs(&factors);
    let surjections = match factors.as_slice() {
        [n] => divisors(*n).into_iter().map(|d| mobius(n / d) * homs(&[d]) as i64).sum::<i64>() as u64,
        [2, 2] => homomorphisms + 2 - 3 * homs(&[2]),
        _ => return quotient_count_search(pres, target, budget),
    };
    Ok(QuotientCount { homomorphisms, surjections })
}

fn gcd_big(d: &BigInt, n: u64) -> u64 {
    let r = (d % BigInt::from(n)).iter_u64_digits().next().unwrap_or(0);
    let (mut a, mut b) = (n, r);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut out = 1;
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            out = -out;
        }
        p += 1;
    }
    out
}

/// Counts homomorphisms by backtracking over generator images, checking each
/// relator once its letters are assigned.
pub fn quotient_count_search(pres: &GroupPresentation, target: &FiniteGroup, budget: u64) -> Result<QuotientCount> {
    let n = pres.generators;
    let order = target.order();
    let total = (order as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::Resource(format!(
            "{order}^{n} assignments into {} exceed the budget {budget}",
            target.name
        )));
    }
    let relators: Vec<Word> = pres.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
    // relators grouped by the last generator they need
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); n + 1];
    for r in &relators {
        let last = r.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0);
        due[last].push(r);
    }
    if !due[0].is_empty() {
        return Err(Error::Internal("relator without letters".into()));
    }
    if n == 0 {
        return Ok(QuotientCount { homomorphisms: 1, surjections: u64::from(order == 1) });
    }
    let count_from = |first: u8| -> QuotientCount {
        let mut images = vec![0u8; n];
        images[0] = first;
        let mut acc = QuotientCount { homomorphisms: 0, surjections: 0 };
        search(1, &mut images, &due, target, &mut acc);
        acc
    };

    fn holds(r: &Word, images: &[u8], g: &FiniteGroup) -> bool {
        let mut x = 0u8;
        for &l in r {
            let e = images[l.unsigned_abs() as usize - 1];
            x = g.mul(x, if l > 0 { e } else { g.inv[e as usize] });
        }
        x == 0
    }

    fn search(k: usize, images: &mut Vec<u8>, due: &[Vec<&Word>], g: &FiniteGroup, acc: &mut QuotientCount) {
        if !due[k].iter().all(|r| holds(r, images, g)) {
            return;
        }
        if k == images.len() {
            acc.homomorphisms += 1;
            let full = if g.order() == 64 { u64::MAX } else { (1u64 << g.order()) - 1 };
            if g.generated(images) == full {
                acc.surjections += 1;
            }
            return;
        }
        for e in 0..g.order() as u8 {
            images[k] = e;
            search(k + 1, images, due, g, acc);
        }
    }

    let parts: Vec<QuotientCount> = (0..order as u8).into_par_iter().map(count_from).collect();
    Ok(parts.into_iter().fold(QuotientCount { homomorphisms: 0, surjections: 0 }, |a, b| QuotientCount {
        homomorphisms: a.homomorphisms + b.homomorphisms,
        surjections: a.surjections + b.surjections,
    }))
}

/// Free factors first, then the abelian generators; every pair of generators
/// from different factors commutes, and abelian generators commute pairwise.
pub fn structured_group_presentation(g: &StructuredGroup, mode: Mode) -> GroupPresentation {
    let mut blocks: Vec<Vec<i32>> = Vec::new();
    let mut next = 1i32;
    for &r in &g.free_ranks {
        blocks.push((next..next + r as i32).collect());
        next += r as i32;
    }
    for _ in 0..g.abelian_rank {
        blocks.push(vec![next]);
        next += 1;
    }
    let mut relators = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        for c in &blocks[bi + 1..] {
            for &x in b {
                for &y in c {
                    relators.push(vec![x, y, -x, -y]);
                }
            }
        }
    }
    GroupPresentation { generators: (next - 1) as usize, relators, mode }
}

/// Ranks of the successive quotients of the lower central series tensored with
/// the rationals, for degrees `1..=depth`.
///
/// Works in the truncated tensor algebra: relators are sent to the logarithm
/// of their exponential expansion, the ideal they generate in the free nilpotent
/// Lie algebra is formed by bracketing with generators, and ranks are read
/// from the induced degree filtration. Linear algebra is done modulo a large prime.
pub fn lcs_ranks(pres: &GroupPresentation, depth: usize) -> Result<Vec<usize>> {
    if depth == 0 {
        return Ok(Vec::new());
    }
    let n = pres.generators;
    let dim: usize = (1..=depth).map(|d| n.pow(d as u32)).sum();
    if dim > 20_000 {
        return Err(Error::Resource(format!("tensor space of dimension {dim} too large for LCS ranks")));
    }
    let t = Tensor::new(n, depth);
    let ideal_gens: Vec<Vec<u64>> = pres.relators.iter().map(|r| t.log_magnus(r)).collect();
    // close under bracketing with generators
    let mut ideal = Echelon::new(dim);
    let mut layer: Vec<Vec<u64>> = ideal_gens.into_iter().filter(|v| ideal.insert(v.clone())).collect();
    for _ in 1..depth {
        let mut next = Vec::new();
        for v in &layer {
            for g in 0..n {
                let b = t.bracket(&t.generator(g), v);
                if ideal.insert(b.clone()) {
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    // spans of Lie elements of degree >= k
    let lie_basis = t.lie_basis();
    let mut dims = Vec::with_capacity(depth + 1);
    for k in 1..=depth + 1 {
        let mut e = ideal.clone();
        for (deg, v) in &lie_basis {
            if *deg >= k {
                e.insert(v.clone());
            }
        }
        dims.push(e.rank());
    }
    Ok((0..depth).map(|k| dims[k] - dims[k + 1]).collect())
}

const PRIME: u64 = 2_147_483_647;

fn inv_mod(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % PRIME, PRIME - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

/// Row echelon basis over `Z/p`.
#[derive(Clone)]
struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row.iter()) {
                    *x = (*x + PRIME - c * y % PRIME) % PRIME;
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv_mod(v[p]);
        for x in v.iter_mut() {
            *x = *x * s % PRIME;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(v.iter()) {
                    *x = (*x + PRIME - c * y % PRIME) % PRIME;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Truncated tensor algebra on `n` letters, degrees `1..=depth` (degree 0 kept separately).
struct Tensor {
    n: usize,
    depth: usize,
    offsets: Vec<usize>,
}

impl Tensor {
    fn new(n: usize, depth: usize) -> Self {
        let mut offsets = vec![0usize; depth + 2];
        for d in 1..=depth {
            offsets[d + 1] = offsets[d] + n.pow(d as u32);
        }
        Tensor { n, depth, offsets }
    }

    fn dim(&self) -> usize {
        self.offsets[self.depth + 1]
    }

    fn generator(&self, g: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.dim()];
        v[self.offsets[1] + g] = 1;
        v
    }

    /// Product of elements with zero constant term (pass constants explicitly).
    fn mul(&self, a0: u64, a: &[u64], b0: u64, b: &[u64]) -> (u64, Vec<u64>) {
        let mut out = vec![0u64; self.dim()];
        for (i, &x) in a.iter().enumerate() {
            if x != 0 && b0 != 0 {
                out[i] = (out[i] + x * b0) % PRIME;
            }
        }
        for (i, &x) in b.iter().enumerate() {
            if x != 0 && a0 != 0 {
                out[i] = (out[i] + x * a0) % PRIME;
            }
        }
        for da in 1..self.depth {
            for db in 1..=self.depth - da {
                let (na, nb) = (self.n.pow(da as u32), self.n.pow(db as u32));
                let base = self.offsets[da + db];
                for ia in 0..na {
                    let x = a[self.offsets[da] + ia];
                    if x == 0 {
                        continue;
                    }
                    for ib in 0..nb {
                        let y = b[self.offsets[db] + ib];
                        if y != 0 {
                            let k = base + ia * nb + ib;
                            out[k] = (out[k] + x * y) % PRIME;
                        }
                    }
                }
            }
        }
        (a0 * b0 % PRIME, out)
    }

    fn bracket(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (_, ab) = self.mul(0, a, 0, b);
        let (_, ba) = self.mul(0, b, 0, a);
        ab.iter().zip(ba.iter()).map(|(&x, &y)| (x + PRIME - y) % PRIME).collect()
    }

    /// `log` of the image of a word under `x -> exp(X)`, a Lie element.
    fn log_magnus(&self, w: &[i32]) -> Vec<u64> {
        let mut acc0 = 1u64;
        let mut acc = vec![0u64; self.dim()];
        for &l in w {
            let g = l.unsigned_abs() as usize - 1;
            let x = self.generator(g);
            // exp(+-X) - 1
            let sign = if l > 0 { 1 } else { PRIME - 1 };
            let mut f = vec![0u64; self.dim()];
            let mut pow = x.clone();
            let mut fact = 1u64;
            for d in 1..=self.depth {
                fact = fact * d as u64 % PRIME;
                let c = inv_mod(fact) * if d % 2 == 1 { sign } else { 1 } % PRIME;
                for (o, &p) in f.iter_mut().zip(pow.iter()) {
                    *o = (*o + c * p) % PRIME;
                }
                pow = self.mul(0, &pow, 0, &x).1;
            }
            let (c, v) = self.mul(acc0, &acc, 1, &f);
            acc0 = c;
            acc = v;
        }
        // log(1 + A) = A - A^2/2 + A^3/3 - ...
        let mut out = vec![0u64; self.dim()];
        let mut pow = acc.clone();
        for d in 1..=self.depth {
            let coeff = inv_mod(d as u64);
            let c = if d % 2 == 1 { coeff } else { PRIME - coeff };
            for (o, &p) in out.iter_mut().zip(pow.iter()) {
                *o = (*o + c * p) % PRIME;
            }
            pow = self.mul(0, &pow, 0, &acc).1;
        }
        out
    }

    /// Left-normed brackets `[x_a, [x_b, ...]]` spanning the free Lie algebra, with degrees.
    fn lie_basis(&self) -> Vec<(usize, Vec<u64>)> {
        let mut out: Vec<(usize, Vec<u64>)> = (0..self.n).map(|g| (1, self.generator(g))).collect();
        let mut layer: Vec<Vec<u64>> = out.iter().map(|(_, v)| v.clone()).collect();
        for d in 2..=self.depth {
            let mut next = Vec::new();
            for v in &layer {
                for g in 0..self.n {
                    let b = self.bracket(&self.generator(g), v);
                    if b.iter().any(|&x| x != 0) {
                        next.push(b);
                    }
                }
            }
            out.extend(next.iter().map(|v| (d, v.clone())));
            layer = next;
        }
        out
    }
}

/// Invariants compared by [`profiles_match`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub abelianization: AbelianInvariants,
    pub quotient_counts: BTreeMap<String, QuotientCount>,
    pub lcs_ranks: Vec<usize>,
}

impl fmt::Display for InvariantProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "abelianization: {}", self.abelianization)?;
        for (name, c) in &self.quotient_counts {
            writeln!(f, "hom({name}): {} (onto: {})", c.homomorphisms, c.surjections)?;
        }
        let ranks: Vec<String> = self.lcs_ranks.iter().map(|r| r.to_string()).collect();
        writeln!(f, "lcs ranks: {}", ranks.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileOptions {
    pub targets: Vec<String>,
    pub lcs_depth: usize,
    pub budget: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            targets: DEFAULT_TARGETS.iter().map(|s| s.to_string()).collect(),
            lcs_depth: 3,
            budget: DEFAULT_ASSIGNMENT_BUDGET,
        }
    }
}

/// Invariants of `pres`, computed on its Tietze simplification.
pub fn invariant_profile(pres: &GroupPresentation, opts: &ProfileOptions) -> Result<InvariantProfile> {
    let pres = &tietze_simplify(pres);
    let mut quotient_counts = BTreeMap::new();
    for name in &opts.targets {
        let g = FiniteGroup::by_name(name)?;
        quotient_counts.insert(name.clone(), quotient_count(pres, &g, opts.budget)?);
    }
    Ok(InvariantProfile {
        abelianization: abelianization(pres),
        quotient_counts,
        lcs_ranks: lcs_ranks(pres, opts.lcs_depth)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Some invariant differs, so the groups are not isomorphic.
    Distinguished,
    /// All computed invariants agree; this is not a proof of isomorphism.
    Indistinguishable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Distinguished => "distinguished",
            Verdict::Indistinguishable => "indistinguishable",
        })
    }
}

pub fn compare_profiles(x: &InvariantProfile, y: &InvariantProfile) -> Verdict {
    if x == y {
        Verdict::Indistinguishable
    } else {
        Verdict::Distinguished
    }
}

pub fn profiles_match(x: &GroupPresentation, y: &GroupPresentation, opts: &ProfileOptions) -> Result<Verdict> {
    if abelianization(x) != abelianization(y) {
        return Ok(Verdict::Distinguished);
    }
    Ok(compare_profiles(&invariant_profile(x, opts)?, &invariant_profile(y, opts)?))
}

/// Adds a generator `g_{n+1}` together with the relator `g_{n+1}^-1 w`.
pub fn tietze_add_generator(pres: &GroupPresentation, w: &[i32]) -> GroupPresentation {
    let g = pres.generators as i32 + 1;
    let mut relators = pres.relators.clone();
    let mut r = vec![-g];
    r.extend_from_slice(w);
    relators.push(free_reduce(&r));
    GroupPresentation { generators: g as usize, relators, mode: pres.mode }
}

/// Replaces relator `i` by `r_i * c r_j^±1 c^-1`.
pub fn tietze_multiply_relator(pres: &GroupPresentation, i: usize, j: usize, invert: bool, c: &[i32]) -> GroupPresentation {
    let mut relators = pres.relators.clone();
    let rj = if invert { inverse(&pres.relators[j]) } else { pres.relators[j].clone() };
    let mut r = relators[i].clone();
    r.extend_from_slice(c);
    r.extend(rj);
    r.extend(inverse(c));
    relators[i] = free_reduce(&r);
    GroupPresentation { generators: pres.generators, relators, mode: pres.mode }
}

/// Eliminates generators occurring exactly once in some relator, renumbering the rest.
pub fn tietze_simplify(pres: &GroupPresentation) -> GroupPresentation {
    let mut gens = pres.generators;
    let mut relators: Vec<Word> = pres.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
    'outer: loop {
        for (ri, r) in relators.iter().enumerate() {
            for g in 1..=gens as i32 {
                let hits: Vec<usize> = (0..r.len()).filter(|&k| r[k].abs() == g).collect();
                if hits.len() != 1 {
                    continue;
                }
                // r = u g^e v  =>  g = (v u)^-e
                let k = hits[0];
                let mut vu: Word = r[k + 1..].to_vec();
                vu.extend_from_slice(&r[..k]);
                let sub = if r[k] > 0 { inverse(&vu) } else { vu };
                let r = ri;
                let mut next: Vec<Word> = Vec::with_capacity(relators.len() - 1);
                for (qi, q) in relators.iter().enumerate() {
                    if qi == r {
                        continue;
                    }
                    let mut w = Word::new();
                    for &x in q {
                        if x == g {
                            w.extend_from_slice(&sub);
                        } else if x == -g {
                            w.extend(inverse(&sub));
                        } else {
                            w.push(x);
                        }
                    }
                    let w: Word = cyclic_reduce(&w)
                        .into_iter()
                        .map(|x| if x.abs() > g { x - x.signum() } else { x })
                        .collect();
                    if !w.is_empty() {
                        next.push(w);
                    }
                }
                relators = next;
                gens -= 1;
                continue 'outer;
            }
        }
        break;
    }
    GroupPresentation { generators: gens, relators, mode: pres.mode }
}

fn random_word<R: Rng>(n: i32, rng: &mut R) -> Word {
    let len = rng.gen_range(1..4);
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=n);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

/// A random sequence of Tietze moves, for property tests.
pub fn random_tietze<R: Rng>(pres: &GroupPresentation, steps: usize, rng: &mut R) -> GroupPresentation {
    let mut p = pres.clone();
    for _ in 0..steps {
        let n = p.generators as i32;
        if p.relators.len() >= 2 && rng.gen_bool(0.6) {
            let c = random_word(n, rng);
            let i = rng.gen_range(0..p.relators.len());
            let mut j = rng.gen_range(0..p.relators.len());
            if j == i {
                j = (j + 1) % p.relators.len();
            }
            let inv = rng.gen_bool(0.5);
            p = tietze_multiply_relator(&p, i, j, inv, &c);
        } else {
            let w = random_word(n, rng);
            p = tietze_add_generator(&p, &w);
        }
    }
    p
}
