//! Lefschetz pairs, wire permutations, pair lists and signatures.
//!
//! Local indices are 1-based. A list of pairs `(<a1,b1>, ..., <ap,bp>)` acts on
//! wire indices by applying `<a1,b1>` first, so the wire numbered `i` at `+inf`
//! sits at position `<ap,bp> ... <a1,b1> (i)` at `-inf`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{input, Error, Result};

/// Largest supported number of wires (permutations are packed into 4-bit nibbles).
pub const MAX_LINES: usize = 16;

#[inline]
pub fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An intersection point: the first and last local indices of the wires meeting there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LefschetzPair {
    pub a: u8,
    pub b: u8,
}

impl LefschetzPair {
    pub fn new(a: u8, b: u8) -> Result<Self> {
        if a == 0 || a >= b {
            return input(format!("invalid Lefschetz pair <{a},{b}>: need 1 <= a < b"));
        }
        Ok(LefschetzPair { a, b })
    }

    /// Constructs a pair without validation; callers guarantee `1 <= a < b`.
    #[inline]
    pub(crate) const fn raw(a: u8, b: u8) -> Self {
        LefschetzPair { a, b }
    }

    /// Number of wires meeting at the point.
    #[inline]
    pub fn multiplicity(self) -> usize {
        (self.b - self.a + 1) as usize
    }

    /// Image of a local index under the segment reversal.
    #[inline]
    pub fn apply(self, x: u8) -> u8 {
        if self.a <= x && x <= self.b {
            self.a + self.b - x
        } else {
            x
        }
    }

    /// Checked version of [`apply`](Self::apply) against an ambient wire count.
    pub fn apply_checked(self, x: usize, lines: usize) -> Result<usize> {
        if x == 0 || x > lines {
            return input(format!("index {x} out of range 1..={lines}"));
        }
        if self.b as usize > lines {
            return input(format!("pair {self} exceeds {lines} wires"));
        }
        Ok(self.apply(x as u8) as usize)
    }

    /// True iff the integral segments `[a,b]` and `[c,d]` do not meet.
    #[inline]
    pub fn disjoint(self, other: LefschetzPair) -> bool {
        self.b < other.a || other.b < self.a
    }

    #[inline]
    pub fn shifted(self, by: i8) -> LefschetzPair {
        LefschetzPair::raw((self.a as i8 + by) as u8, (self.b as i8 + by) as u8)
    }
}

impl fmt::Display for LefschetzPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A permutation of `1..=len`, stored as packed nibbles `images[i-1] - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    packed: u64,
    len: u8,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        assert!(len <= MAX_LINES);
        let mut packed = 0u64;
        for i in 0..len {
            packed |= (i as u64) << (4 * i);
        }
        Permutation { packed, len: len as u8 }
    }

    /// The order-reversing permutation `J(i) = len + 1 - i`.
    pub fn reversal(len: usize) -> Self {
        let mut packed = 0u64;
        for i in 0..len {
            packed |= ((len - 1 - i) as u64) << (4 * i);
        }
        Permutation { packed, len: len as u8 }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let len = images.len();
        if len > MAX_LINES {
            return input(format!("permutation of {len} points exceeds {MAX_LINES}"));
        }
        let mut seen = 0u32;
        let mut packed = 0u64;
        for (i, &x) in images.iter().enumerate() {
            if x == 0 || x > len || seen & (1 << x) != 0 {
                return input(format!("not a permutation: {images:?}"));
            }
            seen |= 1 << x;
            packed |= ((x - 1) as u64) << (4 * i);
        }
        Ok(Permutation { packed, len: len as u8 })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Image of `i` (1-based).
    #[inline]
    pub fn get(&self, i: usize) -> usize {
        ((self.packed >> (4 * (i - 1))) & 0xf) as usize + 1
    }

    #[inline]
    pub fn packed(&self) -> u64 {
        self.packed
    }

    pub fn images(&self) -> Vec<usize> {
        (1..=self.len()).map(|i| self.get(i)).collect()
    }

    /// `pair ∘ self`: apply `self` first, then the segment reversal.
    #[inline]
    pub fn then_pair(&self, pair: LefschetzPair) -> Self {
        let mut packed = self.packed;
        for i in 0..self.len as usize {
            let v = ((self.packed >> (4 * i)) & 0xf) as u8 + 1;
            let w = pair.apply(v) - 1;
            packed = (packed & !(0xf << (4 * i))) | ((w as u64) << (4 * i));
        }
        Permutation { packed, len: self.len }
    }

    /// `self ∘ pair`: reverse the entries stored at positions `a..=b`.
    #[inline]
    pub fn reverse_positions(&self, pair: LefschetzPair) -> Self {
        let (a, b) = (pair.a as usize - 1, pair.b as usize - 1);
        let mut packed = self.packed;
        for i in a..=b {
            let j = a + b - i;
            let v = (self.packed >> (4 * j)) & 0xf;
            packed = (packed & !(0xf << (4 * i))) | (v << (4 * i));
        }
        Permutation { packed, len: self.len }
    }

    pub fn inverse(&self) -> Self {
        let mut packed = 0u64;
        for i in 1..=self.len() {
            packed |= ((i - 1) as u64) << (4 * (self.get(i) - 1));
        }
        Permutation { packed, len: self.len }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Self {
        let mut packed = 0u64;
        for i in 1..=self.len() {
            packed |= ((self.get(other.get(i)) - 1) as u64) << (4 * (i - 1));
        }
        Permutation { packed, len: self.len }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", imgs.join(","))
    }
}

/// An ordered list of Lefschetz pairs on a fixed number of wires: a wiring diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LefschetzList {
    lines: u8,
    pairs: Vec<LefschetzPair>,
}

impl PartialOrd for LefschetzList {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LefschetzList {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pairs
            .cmp(&other.pairs)
            .then(self.lines.cmp(&other.lines))
    }
}

impl LefschetzList {
    pub fn new(lines: usize, pairs: Vec<LefschetzPair>) -> Result<Self> {
        if lines < 1 || lines > MAX_LINES {
            return input(format!("line count {lines} outside 1..={MAX_LINES}"));
        }
        if let Some(p) = pairs.iter().find(|p| p.a == 0 || p.a >= p.b || p.b as usize > lines) {
            return input(format!("pair {p} invalid for {lines} wires"));
        }
        Ok(LefschetzList { lines: lines as u8, pairs })
    }

    pub fn from_tuples(lines: usize, pairs: &[(u8, u8)]) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|&(a, b)| LefschetzPair::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lines, pairs)
    }

    #[inline]
    pub(crate) fn from_parts_unchecked(lines: usize, pairs: Vec<LefschetzPair>) -> Self {
        LefschetzList { lines: lines as u8, pairs }
    }

    #[inline]
    pub fn lines(&self) -> usize {
        self.lines as usize
    }

    #[inline]
    pub fn pairs(&self) -> &[LefschetzPair] {
        &self.pairs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn into_pairs(self) -> Vec<LefschetzPair> {
        self.pairs
    }

    /// The product `<ap,bp> ... <a1,b1>`.
    pub fn composite_permutation(&self) -> Permutation {
        self.pairs
            .iter()
            .fold(Permutation::identity(self.lines()), |acc, &p| acc.then_pair(p))
    }

    pub fn signature(&self) -> Signature {
        Signature::from_multiplicities(self.pairs.iter().map(|p| p.multiplicity()))
    }

    /// Every two wires cross exactly once.
    pub fn check_uip(&self) -> bool {
        let total: usize = self.pairs.iter().map(|p| binom2(p.multiplicity())).sum();
        total == binom2(self.lines())
            && self.composite_permutation() == Permutation::reversal(self.lines())
    }

    pub fn reversed(&self) -> LefschetzList {
        let mut pairs = self.pairs.clone();
        pairs.reverse();
        LefschetzList { lines: self.lines, pairs }
    }

    pub fn concat(&self, other: &LefschetzList) -> Result<LefschetzList> {
        if self.lines != other.lines {
            return input("cannot concatenate lists on different wire counts");
        }
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Ok(LefschetzList { lines: self.lines, pairs })
    }
}

/// A random wiring diagram with the unique intersection property.
///
/// Each step picks a random adjacent pair of wires that have not crossed and
/// grows the block while its wires are still pairwise uncrossed, so that
/// multiple points of every size occur.
pub fn random_uip_list<R: rand::Rng>(lines: usize, grow: f64, rng: &mut R) -> Result<LefschetzList> {
    if lines < 1 || lines > MAX_LINES {
        return input(format!("line count {lines} outside 1..={MAX_LINES}"));
    }
    let mut labels: Vec<usize> = (0..lines).collect();
    let mut pairs = Vec::new();
    loop {
        let starts: Vec<usize> = (0..lines.saturating_sub(1)).filter(|&i| labels[i] < labels[i + 1]).collect();
        if starts.is_empty() {
            break;
        }
        let a = starts[rng.gen_range(0..starts.len())];
        let mut b = a + 1;
        while b + 1 < lines && labels[b] < labels[b + 1] && rng.gen_bool(grow) {
            b += 1;
        }
        labels[a..=b].reverse();
        pairs.push(LefschetzPair { a: a as u8 + 1, b: b as u8 + 1 });
    }
    Ok(LefschetzList { lines: lines as u8, pairs })
}

impl fmt::Display for LefschetzList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={} ", self.lines)?;
        for p in &self.pairs {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for LefschetzList {
    type Err = Error;

    /// Parses `l=6 (2,3)(2,4)(4,5)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("l=")
            .ok_or_else(|| Error::Input(format!("list must start with 'l=': {s:?}")))?;
        let (num, body) = match rest.find(|c: char| !c.is_ascii_digit()) {
            Some(i) => rest.split_at(i),
            None => (rest, ""),
        };
        let lines: usize = num
            .parse()
            .map_err(|_| Error::Input(format!("bad line count in {s:?}")))?;
        let mut pairs = Vec::new();
        let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = body.as_str();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')').map(|i| (&r[..i], &r[i + 1..])));
            let (inner, tail) = inner.ok_or_else(|| Error::Input(format!("malformed pair list {s:?}")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Input(format!("malformed pair ({inner})")))?;
            let a: u8 = a.parse().map_err(|_| Error::Input(format!("bad index {a:?}")))?;
            let b: u8 = b.parse().map_err(|_| Error::Input(format!("bad index {b:?}")))?;
            pairs.push(LefschetzPair::new(a, b)?);
            rest = tail;
        }
        LefschetzList::new(lines, pairs)
    }
}

/// Multiset of intersection multiplicities `[2^n2 3^n3 ...]`; only nonzero counts are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Signature {
    counts: BTreeMap<usize, usize>,
}

impl Signature {
    pub fn new(counts: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, n) in counts {
            if k < 2 {
                return input(format!("multiplicity {k} < 2 in signature"));
            }
            if n > 0 {
                *map.entry(k).or_insert(0) += n;
            }
        }
        Ok(Signature { counts: map })
    }

    pub fn from_multiplicities(ms: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        for m in ms {
            *counts.entry(m).or_insert(0) += 1;
        }
        Signature { counts }
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Total number of intersection points.
    pub fn points(&self) -> usize {
        self.counts.values().sum()
    }

    /// Points of multiplicity at least 3.
    pub fn multiple_points(&self) -> usize {
        self.counts.iter().filter(|(&k, _)| k >= 3).map(|(_, &n)| n).sum()
    }

    /// `sum n_k C(k,2)`: the number of wire pairs crossing.
    pub fn crossing_pairs(&self) -> usize {
        self.counts.iter().map(|(&k, &n)| n * binom2(k)).sum()
    }

    /// Number of lines `l` with `C(l,2) = sum n_k C(k,2)`, if one exists.
    pub fn lines(&self) -> Option<usize> {
        let target = self.crossing_pairs();
        (2..=64).find(|&l| binom2(l) == target)
    }

    /// Multiplicities in ascending order, one entry per point.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&k, &n)| std::iter::repeat(k).take(n))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `self - other`, or `None` if `other` is not a sub-multiset.
    pub fn minus(&self, other: &Signature) -> Option<Signature> {
        let mut counts = self.counts.clone();
        for (&k, &n) in &other.counts {
            let e = counts.get_mut(&k)?;
            if *e < n {
                return None;
            }
            *e -= n;
            if *e == 0 {
                counts.remove(&k);
            }
        }
        Some(Signature { counts })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(k, n)| format!("{k}^{n}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts `2^9 3^2`, optionally bracketed, with a bare `k` meaning `k^1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut counts = Vec::new();
        for tok in s.split_whitespace() {
            let (k, n) = match tok.split_once('^') {
                Some((k, n)) => (k, n),
                None => (tok, "1"),
            };
            let k: usize = k.parse().map_err(|_| Error::Input(format!("bad multiplicity {tok:?}")))?;
            let n: usize = n.parse().map_err(|_| Error::Input(format!("bad exponent {tok:?}")))?;
            counts.push((k, n));
        }
        if counts.is_empty() {
            return input("empty signature");
        }
        Signature::new(counts)
    }
}
