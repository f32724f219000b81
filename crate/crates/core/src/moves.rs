//! The commutation equivalence, triangle replacements and the actions
//! tau (reflection), mu (rotation) and sigma (shift of infinity).

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::diagram::{LefschetzList, LefschetzPair};
use crate::error::{input, Error, Result};

/// Default bound on the number of members a commutation class may have before
/// closure computations give up.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

/// Where triangle windows are searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowScope {
    /// Contiguous in some member of the commutation class.
    Class,
    /// Contiguous in the given list itself.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriangleOptions {
    /// Smallest width of the multiple pair inside a window.
    pub min_width: usize,
    pub scope: WindowScope,
}

impl Default for TriangleOptions {
    fn default() -> Self {
        TriangleOptions { min_width: 2, scope: WindowScope::Class }
    }
}

pub fn disjoint(p: LefschetzPair, q: LefschetzPair) -> bool {
    p.disjoint(q)
}

/// All lists reachable by one swap of adjacent disjoint pairs.
pub fn equiv_neighbors(list: &LefschetzList) -> Vec<LefschetzList> {
    let pairs = list.pairs();
    (1..pairs.len())
        .filter(|&i| pairs[i - 1].disjoint(pairs[i]))
        .map(|i| {
            let mut v = pairs.to_vec();
            v.swap(i - 1, i);
            LefschetzList::from_parts_unchecked(list.lines(), v)
        })
        .collect()
}

/// The lexicographically smallest member of the commutation class.
///
/// Greedy: repeatedly emit the smallest pair that commutes with every pair
/// still to its left. Identical pairs never commute, so the choice is unique.
pub fn equiv_class_min(list: &LefschetzList) -> LefschetzList {
    LefschetzList::from_parts_unchecked(list.lines(), lex_normal_form(list.pairs()))
}

pub(crate) fn lex_normal_form(pairs: &[LefschetzPair]) -> Vec<LefschetzPair> {
    let mut rest: Vec<LefschetzPair> = pairs.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best = 0;
        for j in 1..rest.len() {
            if rest[j] < rest[best] && rest[..j].iter().all(|q| q.disjoint(rest[j])) {
                best = j;
            }
        }
        out.push(rest.remove(best));
    }
    out
}

/// True iff no pair could be commuted leftwards past a larger pair, i.e. the
/// list is the minimum of its commutation class.
pub fn is_class_min(pairs: &[LefschetzPair]) -> bool {
    for j in 1..pairs.len() {
        let q = pairs[j];
        for i in (0..j).rev() {
            if !pairs[i].disjoint(q) {
                break;
            }
            if q < pairs[i] {
                return false;
            }
        }
    }
    true
}

/// Breadth-first closure of the commutation class.
pub fn equiv_class(list: &LefschetzList, cap: usize) -> Result<HashSet<LefschetzList>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(list.clone());
    queue.push_back(list.clone());
    while let Some(cur) = queue.pop_front() {
        for n in equiv_neighbors(&cur) {
            if seen.insert(n.clone()) {
                if seen.len() > cap {
                    return Err(Error::Resource(format!(
                        "commutation class of {list} exceeds {cap} members"
                    )));
                }
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

/// Size of the commutation class (number of linear extensions of its
/// dependency order), computed by breadth-first closure.
pub fn equiv_class_size(list: &LefschetzList, cap: usize) -> Result<usize> {
    Ok(equiv_class(list, cap)?.len())
}

/// Positions whose pair can be commuted to the front of the list.
pub fn front_movable(pairs: &[LefschetzPair]) -> Vec<usize> {
    (0..pairs.len())
        .filter(|&j| pairs[..j].iter().all(|q| q.disjoint(pairs[j])))
        .collect()
}

/// Reflection: the reversed list.
pub fn tau(list: &LefschetzList) -> LefschetzList {
    list.reversed()
}

/// The sublists of pairs above, on, and below the wire starting at the bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomWireSplit {
    pub above: Vec<LefschetzPair>,
    pub on: Vec<LefschetzPair>,
    pub below: Vec<LefschetzPair>,
}

/// Follows the wire with local index 1 at `+inf` through the list.
pub fn split_by_bottom_wire(pairs: &[LefschetzPair]) -> Result<BottomWireSplit> {
    let mut x = 1u8;
    let mut split = BottomWireSplit { above: vec![], on: vec![], below: vec![] };
    for &p in pairs {
        if p.a <= x && x <= p.b {
            if x != p.a {
                return Err(Error::Internal(format!(
                    "bottom wire at {x} strictly inside {p}: list lacks the unique intersection property"
                )));
            }
            split.on.push(p);
            x = p.a + p.b - x;
        } else if x > p.b {
            split.below.push(p);
        } else {
            split.above.push(p);
        }
    }
    Ok(split)
}

/// Rotation. Computed on the class minimum and returned as a class minimum.
pub fn mu(list: &LefschetzList) -> Result<LefschetzList> {
    let rep = equiv_class_min(list);
    let split = split_by_bottom_wire(rep.pairs())?;
    let mut out = Vec::with_capacity(rep.len());
    out.extend(split.above.iter().map(|p| p.shifted(-1)));
    out.extend(split.on.iter().rev().copied());
    out.extend(split.below.iter().map(|p| p.shifted(1)));
    Ok(equiv_class_min(&LefschetzList::from_parts_unchecked(list.lines(), out)))
}

/// Shift of infinity: drop the first pair and append its mirror image.
pub fn sigma(list: &LefschetzList) -> Result<LefschetzList> {
    let (first, rest) = list
        .pairs()
        .split_first()
        .ok_or_else(|| Error::Input("sigma of an empty list".into()))?;
    let l = list.lines() as u8;
    let mut out = rest.to_vec();
    out.push(LefschetzPair::raw(l + 1 - first.b, l + 1 - first.a));
    Ok(LefschetzList::from_parts_unchecked(list.lines(), out))
}

/// Class minima of `sigma(a')` over all members `a'` of the class of `rep`.
/// Only the leftmost pair of `a'` matters, so one reordering per front-movable pair suffices.
pub fn sigma_class_targets(rep: &LefschetzList) -> Result<BTreeSet<LefschetzList>> {
    if rep.is_empty() {
        return input("sigma of an empty list");
    }
    let pairs = rep.pairs();
    let mut out = BTreeSet::new();
    for j in front_movable(pairs) {
        let mut v = Vec::with_capacity(pairs.len());
        v.push(pairs[j]);
        v.extend(pairs[..j].iter().copied());
        v.extend(pairs[j + 1..].iter().copied());
        let moved = LefschetzList::from_parts_unchecked(rep.lines(), v);
        out.insert(equiv_class_min(&sigma(&moved)?));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriangleDirection {
    /// `c + tru(i,t)` replaced by `c + trd(i,t)`.
    UpToDown,
    /// `c + trd(i,t)` replaced by `c + tru(i,t)`.
    DownToUp,
}

/// One application of a triangle replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleMove {
    pub c: u8,
    pub i: u8,
    pub t: u8,
    pub direction: TriangleDirection,
    /// Index in the reordered list where the matched window starts.
    pub position: usize,
}

/// `c + tru(i,t)`: the moving wire passes on one side of the multiple point.
pub fn tru(c: u8, i: u8, t: u8) -> Vec<LefschetzPair> {
    let mut v = Vec::with_capacity(t as usize + 1);
    for j in i..t {
        v.push(LefschetzPair::raw(c + j, c + j + 1));
    }
    v.push(LefschetzPair::raw(c, c + t - 1));
    for j in ((t - i)..t).rev() {
        v.push(LefschetzPair::raw(c + j, c + j + 1));
    }
    v
}

/// `c + trd(i,t)`: the moving wire passes on the other side of the multiple point.
pub fn trd(c: u8, i: u8, t: u8) -> Vec<LefschetzPair> {
    let mut v = Vec::with_capacity(t as usize + 1);
    for j in (0..i).rev() {
        v.push(LefschetzPair::raw(c + j, c + j + 1));
    }
    v.push(LefschetzPair::raw(c + 1, c + t));
    for j in 0..(t - i) {
        v.push(LefschetzPair::raw(c + j, c + j + 1));
    }
    v
}

/// Transitive dependency order of a pair list as bitsets (`succ[u]` holds every
/// `v > u` that cannot be commuted before `u`).
struct DependencyOrder {
    succ: Vec<u128>,
    pred: Vec<u128>,
}

impl DependencyOrder {
    fn new(pairs: &[LefschetzPair]) -> Self {
        let n = pairs.len();
        let mut succ = vec![0u128; n];
        for u in (0..n).rev() {
            for v in u + 1..n {
                if !pairs[u].disjoint(pairs[v]) {
                    succ[u] |= (1u128 << v) | succ[v];
                }
            }
        }
        let mut pred = vec![0u128; n];
        for (u, &s) in succ.iter().enumerate() {
            let mut bits = s;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                pred[v] |= 1u128 << u;
                bits &= bits - 1;
            }
        }
        DependencyOrder { succ, pred }
    }

    /// True iff no element outside `set` lies between two elements of `set`.
    fn is_convex(&self, set: u128) -> bool {
        let (mut up, mut down) = (0u128, 0u128);
        let mut bits = set;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            up |= self.succ[u];
            down |= self.pred[u];
            bits &= bits - 1;
        }
        up & down & !set == 0
    }

    /// A linear extension in which `set` is contiguous: its predecessors
    /// first, then `set`, then the rest, each in original order.
    fn contiguous_order(&self, set: u128, n: usize) -> (Vec<usize>, usize) {
        let mut before = 0u128;
        let mut bits = set;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            before |= self.pred[u];
            bits &= bits - 1;
        }
        before &= !set;
        let pick = |mask: u128| (0..n).filter(move |&k| mask >> k & 1 == 1);
        let mut order: Vec<usize> = pick(before).collect();
        let start = order.len();
        order.extend(pick(set));
        order.extend((0..n).filter(|&k| (before | set) >> k & 1 == 0));
        (order, start)
    }
}

/// Finds `window` as a contiguous block of some member of the class of
/// `pairs`, returning that member and the block start for each occurrence.
fn find_windows(
    pairs: &[LefschetzPair],
    order: &DependencyOrder,
    window: &[LefschetzPair],
    scope: WindowScope,
) -> Vec<(Vec<LefschetzPair>, usize)> {
    let n = pairs.len();
    let mut out = Vec::new();
    for x0 in (0..n).filter(|&k| pairs[k] == window[0]) {
        // Consecutive window pairs overlap, so each must be the next
        // occurrence of its value after the previous one.
        let mut set = 1u128 << x0;
        let mut last = x0;
        let mut ok = true;
        for &w in &window[1..] {
            match (last + 1..n).find(|&k| pairs[k] == w) {
                Some(k) => {
                    set |= 1u128 << k;
                    last = k;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let literal = last + 1 == x0 + window.len();
        if ok && scope == WindowScope::Literal && literal {
            out.push((pairs.to_vec(), x0));
        } else if ok && scope == WindowScope::Class && order.is_convex(set) {
            let (perm, start) = order.contiguous_order(set, n);
            out.push((perm.into_iter().map(|k| pairs[k]).collect(), start));
        }
    }
    out
}

/// Class minima of all lists obtained from members of the class of `rep` by
/// one triangle replacement.
pub fn triangle_moves_detailed(
    rep: &LefschetzList,
    opts: &TriangleOptions,
) -> Result<Vec<(TriangleMove, LefschetzList)>> {
    let pairs = rep.pairs();
    if pairs.len() > 128 {
        return Err(Error::Resource(format!(
            "triangle search supports at most 128 pairs, got {}",
            pairs.len()
        )));
    }
    let l = rep.lines() as u8;
    let widths: BTreeSet<usize> = pairs.iter().map(|p| p.multiplicity()).collect();
    let order = DependencyOrder::new(pairs);
    let mut out = Vec::new();
    for t in (opts.min_width.max(2) as u8)..l {
        if !widths.contains(&(t as usize)) {
            continue;
        }
        for c in 1..=(l - t) {
            for i in 0..=t {
                let up = tru(c, i, t);
                let down = trd(c, i, t);
                for (from, to, direction) in [
                    (&up, &down, TriangleDirection::UpToDown),
                    (&down, &up, TriangleDirection::DownToUp),
                ] {
                    for (mut member, start) in find_windows(pairs, &order, from, opts.scope) {
                        member[start..start + from.len()].copy_from_slice(to);
                        let target = LefschetzList::from_parts_unchecked(rep.lines(), member);
                        let mv = TriangleMove { c, i, t, direction, position: start };
                        out.push((mv, equiv_class_min(&target)));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn triangle_moves(rep: &LefschetzList, opts: &TriangleOptions) -> Result<BTreeSet<LefschetzList>> {
    Ok(triangle_moves_detailed(rep, opts)?
        .into_iter()
        .map(|(_, l)| l)
        .collect())
}
