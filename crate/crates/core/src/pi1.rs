//! Braid-monodromy skeletons and van Kampen presentations of the affine and
//! projective fundamental groups of a line arrangement complement.

use std::fmt;

use crate::diagram::{LefschetzList, LefschetzPair};
use crate::error::{input, Error, Result};
use crate::lattice::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    On,
    Above,
    Below,
}

impl Mark {
    fn flipped(self) -> Mark {
        match self {
            Mark::On => Mark::On,
            Mark::Above => Mark::Below,
            Mark::Below => Mark::Above,
        }
    }
}

/// One event along a skeleton path: passing through, above or below a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Token {
    pub point: u8,
    pub mark: Mark,
}

impl Token {
    pub fn on(point: u8) -> Self {
        Token { point, mark: Mark::On }
    }

    pub fn above(point: u8) -> Self {
        Token { point, mark: Mark::Above }
    }

    pub fn below(point: u8) -> Self {
        Token { point, mark: Mark::Below }
    }

    fn is_crossing(&self) -> bool {
        self.mark != Mark::On
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.mark {
            Mark::On => '°',
            Mark::Above => '⁺',
            Mark::Below => '⁻',
        };
        write!(f, "{}{m}", self.point)
    }
}

/// A path through the fibre points, recorded as the sequence of vertical lines
/// `x = k` it crosses (above or below point `k`) and the points it runs through.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkeletonPath {
    pub tokens: Vec<Token>,
}

impl SkeletonPath {
    /// The straight segment chain through the points `a..=b`.
    pub fn straight(pair: LefschetzPair) -> Self {
        SkeletonPath { tokens: (pair.a..=pair.b).map(Token::on).collect() }
    }

    /// The points the path runs through, in order.
    pub fn endpoints(&self) -> Vec<u8> {
        self.tokens.iter().filter(|t| t.mark == Mark::On).map(|t| t.point).collect()
    }

    /// Applies the counterclockwise half-twist of the disk around points `a..=b`.
    pub fn half_twist(&mut self, pair: LefschetzPair) {
        let (a, b) = (pair.a, pair.b);
        let inside = |t: &Token| a <= t.point && t.point <= b;
        let toks = &self.tokens;
        let mut out: Vec<Token> = Vec::with_capacity(toks.len() + 2 * (b - a + 1) as usize);
        let mut i = 0;
        while i < toks.len() {
            if !inside(&toks[i]) {
                out.push(toks[i]);
                i += 1;
                continue;
            }
            let start = i;
            while i < toks.len() && inside(&toks[i]) {
                i += 1;
            }
            let run = &toks[start..i];
            if start > 0 {
                if toks[start - 1].point < a {
                    out.extend((a..=b).map(Token::below));
                } else {
                    out.extend((a..=b).rev().map(Token::above));
                }
            }
            out.extend(run.iter().map(|t| Token { point: a + b - t.point, mark: t.mark.flipped() }));
            if i < toks.len() {
                if toks[i].point < a {
                    out.extend((a..=b).rev().map(Token::below));
                } else {
                    out.extend((a..=b).map(Token::above));
                }
            }
        }
        self.tokens = reduce(out);
    }
}

/// Removes crossings that an isotopy fixing the points undoes: a line crossed
/// twice in a row on the same side, and crossings of the line through a point
/// immediately before arriving at or after leaving it.
fn reduce(tokens: Vec<Token>) -> Vec<Token> {
    let mut stack: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if t.is_crossing() {
            match stack.last() {
                Some(&top) if top == t => {
                    stack.pop();
                }
                Some(&top) if top.mark == Mark::On && top.point == t.point => {}
                _ => stack.push(t),
            }
        } else {
            while matches!(stack.last(), Some(&top) if top.is_crossing() && top.point == t.point) {
                stack.pop();
            }
            stack.push(t);
        }
    }
    stack
}

impl fmt::Display for SkeletonPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tokens.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl std::str::FromStr for SkeletonPath {
    type Err = Error;

    /// Accepts `°`/`o`, `⁺`/`+` and `⁻`/`-` marks, e.g. `1° 2⁻ 3+ 4o`.
    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for tok in s.split_whitespace() {
            let digits: String = tok.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mark = match &tok[digits.len()..] {
                "°" | "o" => Mark::On,
                "⁺" | "+" => Mark::Above,
                "⁻" | "-" => Mark::Below,
                m => return input(format!("bad skeleton mark {m:?} in {tok:?}")),
            };
            let point: u8 = digits.parse().map_err(|_| Error::Input(format!("bad skeleton token {tok:?}")))?;
            tokens.push(Token { point, mark });
        }
        Ok(SkeletonPath { tokens })
    }
}

/// Skeleton of point `i` (1-based) after applying the first `steps` of the
/// preceding half-twists, nearest first.
pub fn compute_skeleton_partial(list: &LefschetzList, i: usize, steps: usize) -> Result<SkeletonPath> {
    if i == 0 || i > list.len() {
        return input(format!("point index {i} out of range 1..={}", list.len()));
    }
    let pairs = list.pairs();
    let mut sk = SkeletonPath::straight(pairs[i - 1]);
    for &p in pairs[..i - 1].iter().rev().take(steps) {
        sk.half_twist(p);
    }
    Ok(sk)
}

/// Skeleton of point `i` (1-based) pulled back to the start of the guiding line.
pub fn compute_skeleton(list: &LefschetzList, i: usize) -> Result<SkeletonPath> {
    compute_skeleton_partial(list, i, usize::MAX)
}

/// A word in the generators: `k` stands for `Γ_k`, `-k` for its inverse.
pub type Word = Vec<i32>;

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = free_reduce(w);
    let (mut lo, mut hi) = (0, v.len());
    while hi - lo >= 2 && v[lo] == -v[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    v.truncate(hi);
    v.drain(..lo);
    v
}

/// `Γ_k` conjugated by the product of the generators of points passed above.
fn conjugated_loops(tokens: &[Token]) -> Vec<Word> {
    let mut loops = Vec::new();
    let mut w: Word = Vec::new();
    // position on the real axis, doubled so that strips sit at odd values
    let mut pos = 2 * tokens.first().map_or(0, |t| t.point as i32);
    for t in tokens {
        let k = t.point as i32;
        match t.mark {
            Mark::On => {
                pos = 2 * k;
                let mut a = w.clone();
                a.push(k);
                a.extend(inverse(&w));
                loops.push(free_reduce(&a));
            }
            m => {
                let rightward = 2 * k > pos;
                pos = if rightward { 2 * k + 1 } else { 2 * k - 1 };
                if m == Mark::Above {
                    w.push(if rightward { -k } else { k });
                }
            }
        }
    }
    loops
}

/// Relators induced by a skeleton of a point of multiplicity `m`.
///
/// For `m = 2` the two loops commute. For `m >= 3` the loops `a_1..a_m`, read
/// from the first endpoint, satisfy `a_m...a_1 = a_1 a_m...a_2 = ...`.
pub fn vankampen_relations(skeleton: &SkeletonPath, m: usize) -> Result<Vec<Word>> {
    let ends = skeleton.endpoints();
    if ends.len() != m || m < 2 {
        return Err(Error::Internal(format!(
            "skeleton {skeleton} has {} endpoints for a point of multiplicity {m}",
            ends.len()
        )));
    }
    if skeleton.tokens.first().map(|t| t.mark) != Some(Mark::On) || skeleton.tokens.last().map(|t| t.mark) != Some(Mark::On) {
        return Err(Error::Internal(format!("skeleton {skeleton} does not start and end on points")));
    }
    if m == 2 {
        let mut rev = skeleton.tokens.clone();
        rev.reverse();
        let loops = conjugated_loops(&rev);
        let (a1, a2) = (&loops[0], &loops[1]);
        let mut r = a2.clone();
        r.extend_from_slice(a1);
        r.extend(inverse(a2));
        r.extend(inverse(a1));
        return Ok(vec![cyclic_reduce(&r)]);
    }
    let a = conjugated_loops(&skeleton.tokens);
    let full: Word = a.iter().rev().flatten().copied().collect();
    let mut out = Vec::with_capacity(m - 1);
    for r in 1..m {
        // a_r ... a_1 a_m ... a_{r+1}
        let rotated: Word = a[..r].iter().rev().chain(a[r..].iter().rev()).flatten().copied().collect();
        let mut rel = full.clone();
        rel.extend(inverse(&rotated));
        out.push(cyclic_reduce(&rel));
    }
    Ok(out)
}

/// Finitely presented group on generators `Γ_1..Γ_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
    pub mode: Mode,
}

impl GroupPresentation {
    pub fn new(generators: usize, relators: Vec<Word>, mode: Mode) -> Result<Self> {
        for r in &relators {
            if let Some(&x) = r.iter().find(|&&x| x == 0 || x.unsigned_abs() as usize > generators) {
                return input(format!("relator letter {x} outside 1..={generators}"));
            }
        }
        Ok(GroupPresentation { generators, relators, mode })
    }

    /// `gens: n` followed by one relator per line.
    pub fn to_plain(&self) -> String {
        let mut s = format!("gens: {}\n", self.generators);
        for r in &self.relators {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    /// A free-group quotient in GAP syntax.
    pub fn to_gap(&self) -> String {
        let gens: Vec<String> = (1..=self.generators).map(|i| format!("\"g{i}\"")).collect();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                if r.is_empty() {
                    return "One(F)".to_string();
                }
                let parts: Vec<String> = r
                    .iter()
                    .map(|&x| if x > 0 { format!("F.{x}") } else { format!("F.{}^-1", -x) })
                    .collect();
                parts.join("*")
            })
            .collect();
        format!(
            "F := FreeGroup({});;\nG := F / [\n  {}\n];;\n",
            gens.join(", "),
            rels.join(",\n  ")
        )
    }

    pub fn from_plain(s: &str, mode: Mode) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| Error::Input("empty presentation".into()))?;
        let n: usize = head
            .trim()
            .strip_prefix("gens:")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::Input(format!("bad presentation header {head:?}")))?;
        let mut relators = Vec::new();
        for l in lines {
            let w = l
                .split_whitespace()
                .map(|x| x.parse::<i32>().map_err(|_| Error::Input(format!("bad letter {x:?}"))))
                .collect::<Result<Word>>()?;
            relators.push(w);
        }
        GroupPresentation::new(n, relators, mode)
    }
}

/// The van Kampen presentation read off every point of a UIP list.
pub fn presentation(list: &LefschetzList, mode: Mode) -> Result<GroupPresentation> {
    if !list.check_uip() {
        return input(format!("{list} is not a wiring diagram of {} lines", list.lines()));
    }
    let l = list.lines();
    let mut relators = Vec::new();
    for (i, p) in list.pairs().iter().enumerate() {
        let sk = compute_skeleton(list, i + 1)?;
        relators.extend(vankampen_relations(&sk, p.multiplicity())?);
    }
    if mode == Mode::Projective {
        relators.push((1..=l as i32).rev().collect());
    }
    GroupPresentation::new(l, relators, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> LefschetzList {
        "l=5 (2,3)(2,4)(4,5)(1,3)(3,4)".parse().unwrap()
    }

    fn rotations(w: &[i32]) -> Vec<Word> {
        (0..w.len().max(1)).map(|i| w[i..].iter().chain(&w[..i]).copied().collect()).collect()
    }

    #[test]
    fn worked_example_skeletons() {
        let l = example();
        assert_eq!(compute_skeleton_partial(&l, 5, 0).unwrap().to_string(), "3° 4°");
        assert_eq!(compute_skeleton_partial(&l, 5, 2).unwrap().to_string(), "1° 2⁺ 3⁺ 4⁻ 5°");
        assert_eq!(compute_skeleton_partial(&l, 5, 3).unwrap().to_string(), "1° 2⁻ 3⁺ 4⁺ 5°");
        assert_eq!(compute_skeleton(&l, 5).unwrap().to_string(), "1° 2⁻ 3⁻ 3⁺ 2⁻ 2⁺ 3⁺ 4⁺ 5°");
        assert!(compute_skeleton(&l, 6).is_err());
        assert!(compute_skeleton(&l, 0).is_err());
    }

    #[test]
    fn worked_example_relation() {
        let sk: SkeletonPath = "1° 2⁺ 3⁺ 4⁻ 5°".parse().unwrap();
        let r = vankampen_relations(&sk, 2).unwrap();
        let want = vec![3, 2, 1, -2, -3, 5, 3, 2, -1, -2, -3, -5];
        assert!(rotations(&r[0]).contains(&want), "{:?}", r[0]);
    }

    #[test]
    fn straight_relators() {
        let r = vankampen_relations(&"1° 2°".parse().unwrap(), 2).unwrap();
        assert!(rotations(&r[0]).contains(&vec![1, 2, -1, -2]));
        let r = vankampen_relations(&"1° 2° 3°".parse().unwrap(), 3).unwrap();
        // a3 a2 a1 = a1 a3 a2 = a2 a1 a3
        assert_eq!(r[0], cyclic_reduce(&[3, 2, 1, -2, -3, -1]));
        assert_eq!(r[1], cyclic_reduce(&[3, 2, 1, -3, -1, -2]));
        assert!(vankampen_relations(&"1° 2°".parse().unwrap(), 3).is_err());
    }

    #[test]
    fn reduction_rules() {
        let t = |s: &str| s.parse::<SkeletonPath>().unwrap().tokens;
        assert_eq!(reduce(t("1° 2+ 2+ 3°")), t("1° 3°"));
        assert_eq!(reduce(t("1° 1+ 2+ 3°")), t("1° 2+ 3°"));
        assert_eq!(reduce(t("1° 3- 3°")), t("1° 3°"));
        assert_eq!(reduce(t("1° 2+ 2- 3°")), t("1° 2+ 2- 3°"));
    }

    #[test]
    fn presentations() {
        let p = presentation(&"l=2 (1,2)".parse().unwrap(), Mode::Affine).unwrap();
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].len(), 4);
        let p = presentation(&"l=3 (1,3)".parse().unwrap(), Mode::Projective).unwrap();
        assert_eq!(p.relators.len(), 3);
        assert_eq!(p.relators[2], vec![3, 2, 1]);
        assert!(presentation(&"l=3 (1,2)".parse().unwrap(), Mode::Affine).is_err());
        let q = GroupPresentation::from_plain(&p.to_plain(), Mode::Projective).unwrap();
        assert_eq!(q, p);
        assert!(p.to_gap().contains("FreeGroup"));
    }

    #[test]
    fn word_reduction() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(inverse(&[1, -2]), vec![2, -1]);
    }
}
