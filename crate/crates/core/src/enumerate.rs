//! Meet-in-the-middle enumeration of the minimal representatives of all
//! commutation classes of wiring diagrams with a given signature.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::{LefschetzList, LefschetzPair, Permutation, Signature, MAX_LINES};
use crate::error::{input, Error, Result};
use crate::moves::equiv_class_size;

pub const CACHE_FORMAT: &str = "arrangeclass-omega v1";

/// Default memory budget for one half-product table.
pub const DEFAULT_MEM_BYTES: usize = 4 << 30;

/// Reads `ARRANGECLASS_MEM_GB`, falling back to [`DEFAULT_MEM_BYTES`].
pub fn mem_budget_from_env() -> usize {
    std::env::var("ARRANGECLASS_MEM_GB")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|g| *g > 0.0)
        .map(|g| (g * (1u64 << 30) as f64) as usize)
        .unwrap_or(DEFAULT_MEM_BYTES)
}

/// Minimal representatives of the commutation classes with one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaList {
    pub signature: Signature,
    pub lines: usize,
    pub reps: Vec<LefschetzList>,
}

impl OmegaList {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of `list` among the (sorted) representatives.
    pub fn index_of(&self, list: &LefschetzList) -> Option<usize> {
        self.reps.binary_search(list).ok()
    }

    pub fn points(&self) -> usize {
        self.signature.points()
    }
}

/// A half list together with its composite permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfProduct {
    pub prefix: LefschetzList,
    pub product: Permutation,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Number of points in the first half; `None` picks `p / 2`.
    pub p0: Option<usize>,
    pub mem_bytes: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { p0: None, mem_bytes: DEFAULT_MEM_BYTES }
    }
}

/// All ways to split `sig` into a first part with `p0` points and the rest.
pub fn dissections(sig: &Signature, p0: usize) -> Result<Vec<(Signature, Signature)>> {
    let p = sig.points();
    if p0 < 1 || p0 >= p {
        return input(format!("p0 must satisfy 1 <= p0 < {p}, got {p0}"));
    }
    Ok(splits(sig, p0))
}

fn splits(sig: &Signature, p0: usize) -> Vec<(Signature, Signature)> {
    let entries: Vec<(usize, usize)> = sig.counts().iter().map(|(&k, &n)| (k, n)).collect();
    let mut out = Vec::new();
    let mut take = vec![0usize; entries.len()];

    fn rec(
        i: usize,
        left: usize,
        entries: &[(usize, usize)],
        take: &mut Vec<usize>,
        out: &mut Vec<(Signature, Signature)>,
    ) {
        if i == entries.len() {
            if left == 0 {
                let first = entries.iter().zip(take.iter()).map(|(&(k, _), &t)| (k, t));
                let second = entries.iter().zip(take.iter()).map(|(&(k, n), &t)| (k, n - t));
                out.push((
                    Signature::new(first).expect("k >= 2"),
                    Signature::new(second).expect("k >= 2"),
                ));
            }
            return;
        }
        for t in 0..=entries[i].1.min(left) {
            take[i] = t;
            rec(i + 1, left - t, entries, take, out);
        }
    }
    rec(0, p0, &entries, &mut take, &mut out);
    out
}

#[inline]
fn encode(p: LefschetzPair) -> u8 {
    ((p.a - 1) << 4) | (p.b - 1)
}

#[inline]
fn decode(x: u8) -> LefschetzPair {
    LefschetzPair::raw((x >> 4) + 1, (x & 0xf) + 1)
}

/// Depth-first generation of lists in which no two wires cross twice and
/// which are minimal in their commutation class.
struct HalfWalker {
    lines: usize,
    /// `remaining[k]`: points of multiplicity `k` still to place.
    remaining: Vec<usize>,
    stack: Vec<LefschetzPair>,
    /// `wires[i]`: wire currently at position `i + 1`.
    wires: [u8; MAX_LINES],
}

impl HalfWalker {
    fn new(lines: usize, sig: &Signature) -> Self {
        let mut remaining = vec![0usize; lines + 1];
        for (&k, &n) in sig.counts() {
            if k <= lines {
                remaining[k] = n;
            }
        }
        let mut wires = [0u8; MAX_LINES];
        for (i, w) in wires.iter_mut().enumerate().take(lines) {
            *w = i as u8;
        }
        HalfWalker { lines, remaining, stack: Vec::new(), wires }
    }

    fn product(&self) -> Permutation {
        // wires maps positions to wires; the composite maps wires to positions.
        let images: Vec<usize> = (0..self.lines).map(|i| self.wires[i] as usize + 1).collect();
        Permutation::from_images(&images).expect("valid").inverse()
    }

    fn admissible(&self, q: LefschetzPair) -> bool {
        let (a, b) = (q.a as usize - 1, q.b as usize - 1);
        if !self.wires[a..=b].windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        for &r in self.stack.iter().rev() {
            if !r.disjoint(q) {
                break;
            }
            if q < r {
                return false;
            }
        }
        true
    }

    fn walk<F: FnMut(&HalfWalker) -> Result<()>>(&mut self, visit: &mut F) -> Result<()> {
        if self.remaining.iter().all(|&n| n == 0) {
            return visit(self);
        }
        // Pairs are tried in lexicographic order so leaves come out sorted.
        for a in 1..self.lines {
            for b in a + 1..=self.lines {
                let k = b - a + 1;
                if self.remaining[k] == 0 {
                    continue;
                }
                let q = LefschetzPair::raw(a as u8, b as u8);
                if !self.admissible(q) {
                    continue;
                }
                self.remaining[k] -= 1;
                self.stack.push(q);
                self.wires[a - 1..b].reverse();
                let r = self.walk(visit);
                self.wires[a - 1..b].reverse();
                self.stack.pop();
                self.remaining[k] += 1;
                r?;
            }
        }
        Ok(())
    }
}

/// All minimal half lists with signature `sig` on `lines` wires.
pub fn half_products(sig: &Signature, lines: usize) -> Result<Vec<HalfProduct>> {
    let mut out = Vec::new();
    HalfWalker::new(lines, sig).walk(&mut |w| {
        out.push(HalfProduct {
            prefix: LefschetzList::from_parts_unchecked(lines, w.stack.clone()),
            product: w.product(),
        });
        Ok(())
    })?;
    Ok(out)
}

/// First-half table sorted by product key, with halves stored flat.
struct HalfTable {
    keys: Vec<u64>,
    data: Vec<u8>,
    width: usize,
}

impl HalfTable {
    fn build(sig: &Signature, lines: usize, mem_bytes: usize, label: &str) -> Result<Self> {
        let width = sig.points();
        let per_entry = 8 + width + 8;
        let mut rows: Vec<(u64, Vec<u8>)> = Vec::new();
        HalfWalker::new(lines, sig).walk(&mut |w| {
            if (rows.len() + 1) * (per_entry + 24) > mem_bytes {
                return Err(Error::Resource(format!(
                    "half-product table for dissection {label} exceeds {mem_bytes} bytes"
                )));
            }
            rows.push((w.product().packed(), w.stack.iter().map(|&p| encode(p)).collect()));
            Ok(())
        })?;
        rows.sort_unstable();
        let mut keys = Vec::with_capacity(rows.len());
        let mut data = Vec::with_capacity(rows.len() * width);
        for (k, d) in rows {
            keys.push(k);
            data.extend_from_slice(&d);
        }
        Ok(HalfTable { keys, data, width })
    }

    fn range(&self, key: u64) -> std::ops::Range<usize> {
        let lo = self.keys.partition_point(|&k| k < key);
        let hi = self.keys.partition_point(|&k| k <= key);
        lo..hi
    }

    fn half(&self, i: usize) -> impl Iterator<Item = LefschetzPair> + '_ {
        self.data[i * self.width..(i + 1) * self.width].iter().map(|&x| decode(x))
    }
}

struct DissectionResult {
    reps: Vec<LefschetzList>,
    half_classes: u64,
}

fn join_dissection(
    first: &Signature,
    second: &Signature,
    lines: usize,
    mem_bytes: usize,
    collect: bool,
) -> Result<DissectionResult> {
    let label = format!("[{first}] + [{second}]");
    let table = HalfTable::build(first, lines, mem_bytes, &label)?;
    let j = Permutation::reversal(lines);
    let mut reps = Vec::new();
    let mut half_classes = 0u64;
    HalfWalker::new(lines, second).walk(&mut |w| {
        // The full composite is P2 ∘ P1 = J, so the first half has product P2⁻¹ ∘ J.
        let key = w.product().inverse().compose(&j).packed();
        let range = table.range(key);
        half_classes += range.len() as u64;
        let tail = &w.stack;
        for i in range {
            let mut full: Vec<LefschetzPair> = table.half(i).collect();
            let seam = full.len();
            full.extend_from_slice(tail);
            if seam_is_minimal(&full, seam) && collect {
                reps.push(LefschetzList::from_parts_unchecked(lines, full));
            }
        }
        Ok(())
    })?;
    Ok(DissectionResult { reps, half_classes })
}

/// Given minimal halves `full[..seam]` and `full[seam..]`, decides whether
/// the whole list is minimal in its commutation class.
fn seam_is_minimal(full: &[LefschetzPair], seam: usize) -> bool {
    for j in seam..full.len() {
        let q = full[j];
        for i in (0..j).rev() {
            if !full[i].disjoint(q) {
                break;
            }
            if i < seam && q < full[i] {
                return false;
            }
        }
    }
    true
}

fn lines_of(sig: &Signature) -> Result<usize> {
    match sig.lines() {
        Some(l) if l <= MAX_LINES => Ok(l),
        Some(l) => input(format!("[{sig}] needs {l} lines; at most {MAX_LINES} supported")),
        None => input(format!("[{sig}] does not satisfy the crossing count for any number of lines")),
    }
}

fn choose_p0(p: usize, opts: &EnumerateOptions) -> Result<usize> {
    match opts.p0 {
        Some(p0) if p0 > p => input(format!("p0 = {p0} exceeds the {p} points of the signature")),
        Some(p0) => Ok(p0),
        None => Ok(p / 2),
    }
}

fn run(sig: &Signature, opts: &EnumerateOptions, collect: bool) -> Result<(Vec<LefschetzList>, u64)> {
    let lines = lines_of(sig)?;
    if sig.counts().keys().any(|&k| k > lines) {
        return Ok((Vec::new(), 0));
    }
    let p = sig.points();
    let p0 = choose_p0(p, opts)?;
    let results: Vec<Result<DissectionResult>> = splits(sig, p0)
        .par_iter()
        .map(|(s0, s1)| join_dissection(s0, s1, lines, opts.mem_bytes, collect))
        .collect();
    let mut reps = Vec::new();
    let mut halves = 0u64;
    for r in results {
        let r = r?;
        reps.extend(r.reps);
        halves += r.half_classes;
    }
    reps.sort_unstable();
    if reps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Internal(format!("duplicate representative while enumerating [{sig}]")));
    }
    Ok((reps, halves))
}

/// Minimal representatives of all commutation classes of wiring diagrams with signature `sig`.
pub fn enumerate_omega(sig: &Signature, opts: &EnumerateOptions) -> Result<OmegaList> {
    let lines = lines_of(sig)?;
    let (reps, _) = run(sig, opts, true)?;
    Ok(OmegaList { signature: sig.clone(), lines, reps })
}

/// Number of half-classes, i.e. pairs of minimal halves joining to a wiring diagram.
pub fn count_half_classes(sig: &Signature, opts: &EnumerateOptions) -> Result<u64> {
    Ok(run(sig, opts, false)?.1)
}

/// Sampled estimate of the total number of wiring diagrams with the signature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeEstimate {
    pub classes: usize,
    pub samples: usize,
    pub mean_class_size: f64,
    pub estimate: f64,
    pub stderr: f64,
}

impl SizeEstimate {
    pub fn log10(&self) -> f64 {
        self.estimate.log10()
    }
}

/// Mean commutation-class size over random representatives, scaled by the class count.
pub fn estimate_ws_size(omega: &OmegaList, samples: usize, seed: u64, cap: usize) -> Result<SizeEstimate> {
    if omega.is_empty() {
        return input("cannot estimate from an empty representative list");
    }
    if samples == 0 {
        return input("need at least one sample");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<usize> = (0..samples).map(|_| rng.gen_range(0..omega.len())).collect();
    let sizes = picks
        .par_iter()
        .map(|&i| equiv_class_size(&omega.reps[i], cap).map(|s| s as f64))
        .collect::<Result<Vec<f64>>>()?;
    let n = sizes.len() as f64;
    let mean = sizes.iter().sum::<f64>() / n;
    let var = if sizes.len() > 1 {
        sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let classes = omega.len();
    Ok(SizeEstimate {
        classes,
        samples,
        mean_class_size: mean,
        estimate: mean * classes as f64,
        stderr: (var / n).sqrt() * classes as f64,
    })
}

/// One wiring diagram with signature `sig`, found by randomized depth-first
/// search; `None` if `node_budget` search nodes are exhausted first.
pub fn sample_list<R: Rng>(sig: &Signature, rng: &mut R, node_budget: usize) -> Result<Option<LefschetzList>> {
    let lines = lines_of(sig)?;
    let mut left = vec![0usize; lines + 1];
    for (&k, &n) in sig.counts() {
        left[k] = n;
    }
    let mut labels: Vec<u8> = (0..lines as u8).collect();
    let mut pairs = Vec::with_capacity(sig.points());

    fn dfs<R: Rng>(
        left: &mut [usize],
        labels: &mut [u8],
        pairs: &mut Vec<LefschetzPair>,
        points: usize,
        budget: &mut usize,
        rng: &mut R,
    ) -> bool {
        if pairs.len() == points {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let n = labels.len();
        let widest = (2..=n).rev().find(|&w| left[w] > 0).unwrap_or(0);
        if widest > 2 && longest_increasing(labels) < widest {
            return false;
        }
        let mut moves: Vec<(usize, usize)> = Vec::new();
        for w in 2..=n {
            if left[w] == 0 {
                continue;
            }
            for a in 0..=n - w {
                if labels[a..a + w].windows(2).all(|x| x[0] < x[1]) {
                    moves.push((a, w));
                }
            }
        }
        for i in (1..moves.len()).rev() {
            moves.swap(i, rng.gen_range(0..=i));
        }
        for (a, w) in moves {
            left[w] -= 1;
            labels[a..a + w].reverse();
            pairs.push(LefschetzPair { a: a as u8 + 1, b: (a + w) as u8 });
            if dfs(left, labels, pairs, points, budget, rng) {
                return true;
            }
            pairs.pop();
            labels[a..a + w].reverse();
            left[w] += 1;
        }
        false
    }

    let restarts = 8;
    for _ in 0..restarts {
        let mut budget = node_budget / restarts;
        if dfs(&mut left, &mut labels, &mut pairs, sig.points(), &mut budget, rng) {
            return Ok(Some(LefschetzList::new(lines, pairs)?));
        }
    }
    Ok(None)
}

fn longest_increasing(xs: &[u8]) -> usize {
    let mut tails: Vec<u8> = Vec::new();
    for &x in xs {
        match tails.binary_search(&x) {
            Ok(_) => {}
            Err(i) if i == tails.len() => tails.push(x),
            Err(i) => tails[i] = x,
        }
    }
    tails.len()
}

/// Cache file name for a signature.
pub fn cache_path(dir: &Path, sig: &Signature) -> PathBuf {
    let name: String = sig
        .to_string()
        .chars()
        .map(|c| match c {
            ' ' => '_',
            '^' => 'e',
            c => c,
        })
        .collect();
    dir.join(format!("omega-v1-{name}.txt"))
}

pub fn write_omega(path: &Path, omega: &OmegaList) -> Result<()> {
    let io = |e: std::io::Error| Error::Resource(format!("writing {}: {e}", path.display()));
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp).map_err(io)?);
        writeln!(
            f,
            "{CACHE_FORMAT} {} {} {} {}",
            omega.signature,
            omega.lines,
            omega.points(),
            omega.len()
        )
        .map_err(io)?;
        for r in &omega.reps {
            writeln!(f, "{r}").map_err(io)?;
        }
        f.flush().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

pub fn read_omega(path: &Path) -> Result<OmegaList> {
    let io = |e: std::io::Error| Error::Input(format!("reading {}: {e}", path.display()));
    let f = BufReader::new(fs::File::open(path).map_err(io)?);
    let mut lines = f.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input(format!("{} is empty", path.display())))?
        .map_err(io)?;
    let rest = header
        .strip_prefix(CACHE_FORMAT)
        .ok_or_else(|| Error::Input(format!("{}: bad header {header:?}", path.display())))?;
    let fields: Vec<&str> = rest.split_whitespace().collect();
    if fields.len() < 4 {
        return input(format!("{}: bad header {header:?}", path.display()));
    }
    let n = fields.len();
    let sig: Signature = fields[..n - 3].join(" ").parse()?;
    let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Input(format!("bad header field {s:?}")));
    let (l, p, count) = (parse(fields[n - 3])?, parse(fields[n - 2])?, parse(fields[n - 1])?);
    if sig.lines() != Some(l) || sig.points() != p {
        return input(format!("{}: header inconsistent with [{sig}]", path.display()));
    }
    let mut reps = Vec::with_capacity(count);
    for line in lines {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        reps.push(line.parse::<LefschetzList>()?);
    }
    if reps.len() != count {
        return input(format!("{}: expected {count} lists, found {}", path.display(), reps.len()));
    }
    Ok(OmegaList { signature: sig, lines: l, reps })
}

/// Loads the cached list for `sig` from `dir`, enumerating and storing it on a miss.
pub fn enumerate_cached(sig: &Signature, opts: &EnumerateOptions, dir: Option<&Path>) -> Result<OmegaList> {
    let Some(dir) = dir else {
        return enumerate_omega(sig, opts);
    };
    let path = cache_path(dir, sig);
    if path.exists() {
        let omega = read_omega(&path)?;
        if &omega.signature == sig {
            return Ok(omega);
        }
    }
    let omega = enumerate_omega(sig, opts)?;
    write_omega(&path, &omega)?;
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{equiv_class, equiv_class_min};

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    fn count(s: &str) -> usize {
        enumerate_omega(&sig(s), &EnumerateOptions::default()).unwrap().len()
    }

    #[test]
    fn dissection_examples() {
        assert_eq!(dissections(&sig("2^2"), 1).unwrap(), vec![(sig("2^1"), sig("2^1"))]);
        let mut d = dissections(&sig("2^1 3^1"), 1).unwrap();
        d.sort();
        assert_eq!(d, vec![(sig("2^1"), sig("3^1")), (sig("3^1"), sig("2^1"))]);
        assert!(dissections(&sig("2^1"), 1).is_err());
        // multiset splits of [2^16 3^4] with 10 points: n3 part in 0..=4
        assert_eq!(dissections(&sig("2^16 3^4"), 10).unwrap().len(), 5);
    }

    #[test]
    fn encode_round_trip() {
        for a in 1..16u8 {
            for b in a + 1..=16 {
                let p = LefschetzPair::raw(a, b);
                assert_eq!(decode(encode(p)), p);
            }
        }
    }

    #[test]
    fn tiny_signatures() {
        assert_eq!(count("2^1"), 1);
        assert_eq!(count("3^1"), 1);
        // three generic lines: (1,2)(2,3)(1,2) and (2,3)(1,2)(2,3)
        assert_eq!(count("2^3"), 2);
        assert_eq!(count_half_classes(&sig("2^1"), &EnumerateOptions::default()).unwrap(), 1);
    }

    #[test]
    fn reps_are_minimal_uip() {
        let o = enumerate_omega(&sig("2^4 3^2"), &EnumerateOptions::default()).unwrap();
        assert!(!o.is_empty());
        for r in &o.reps {
            assert!(r.check_uip());
            assert_eq!(r.signature(), sig("2^4 3^2"));
            assert_eq!(&equiv_class_min(r), r);
            assert_eq!(equiv_class(r, 10_000).unwrap().into_iter().min().unwrap(), *r);
        }
    }

    #[test]
    fn p0_choice_does_not_matter() {
        let s = sig("2^7 3^1");
        let base = enumerate_omega(&s, &EnumerateOptions::default()).unwrap();
        for p0 in 0..=s.points() {
            let o = enumerate_omega(&s, &EnumerateOptions { p0: Some(p0), ..Default::default() }).unwrap();
            assert_eq!(o, base, "p0={p0}");
            let h = count_half_classes(&s, &EnumerateOptions { p0: Some(p0), ..Default::default() }).unwrap();
            assert!(h as usize >= base.len());
        }
    }

    #[test]
    fn memory_budget_is_enforced() {
        let opts = EnumerateOptions { p0: Some(5), mem_bytes: 64 };
        assert!(matches!(enumerate_omega(&sig("2^10"), &opts), Err(Error::Resource(_))));
    }

    #[test]
    fn sampled_lists_have_the_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for s in ["2^25 3^1", "8^1", "2^7 7^1", "2^16 4^2", "2^9 3^2"] {
            let l = sample_list(&sig(s), &mut rng, 100_000).unwrap().unwrap();
            assert!(l.check_uip());
            assert_eq!(l.signature(), sig(s));
        }
        assert_eq!(sample_list(&sig("2^4 3^8"), &mut rng, 1000).unwrap(), None);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = sig("2^4 4^1");
        let o = enumerate_omega(&s, &EnumerateOptions::default()).unwrap();
        let path = cache_path(dir.path(), &s);
        write_omega(&path, &o).unwrap();
        assert_eq!(read_omega(&path).unwrap(), o);
        assert_eq!(enumerate_cached(&s, &EnumerateOptions::default(), Some(dir.path())).unwrap(), o);
    }

    #[test]
    fn estimate_singleton_classes() {
        let o = enumerate_omega(&sig("3^1"), &EnumerateOptions::default()).unwrap();
        let e = estimate_ws_size(&o, 5, 1, 1000).unwrap();
        assert_eq!(e.estimate, 1.0);
        assert_eq!(e.stderr, 0.0);
    }
}
