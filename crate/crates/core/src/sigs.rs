//! Admissible signatures for a given number of lines.

use crate::diagram::{binom2, Signature};
use crate::error::{input, Result};

/// A solution of the crossing-count equation that is known not to occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub signature: Signature,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionReason {
    /// Ruled out by the large-point inequality with the given `c`.
    LargePoint { c: usize },
    /// Ruled out by a hand argument recorded in the exclusion table.
    Known(&'static str),
}

impl std::fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExclusionReason::LargePoint { c } => write!(f, "large-point bound, c={c}"),
            ExclusionReason::Known(r) => f.write_str(r),
        }
    }
}

/// Signatures satisfying the crossing count but excluded by bespoke arguments.
const KNOWN_IMPOSSIBLE: &[(usize, &str, &str)] = &[
    (6, "3^5", "parity: a line meets five others two at a time"),
    (7, "3^7", "Fano plane: projective geometry on 7 points is not embeddable"),
    (8, "2^10 4^3", "two 4-fold points sharing a line leave room for no third"),
    (8, "2^1 3^9", "at most 8 triple points when every line carries at most 3"),
    (8, "2^4 3^8", "verified-by-enumeration: no wiring diagram exists"),
];

/// All nonnegative solutions of `sum n_k C(k,2) = C(l,2)`, ordered
/// lexicographically by `(n_2, n_3, ...)`.
pub fn solve_suip(lines: usize) -> Result<Vec<Signature>> {
    if lines < 2 {
        return input(format!("need at least 2 lines, got {lines}"));
    }
    if lines > 16 {
        return input(format!("at most 16 lines supported, got {lines}"));
    }
    let target = binom2(lines);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut counts = vec![0usize; lines + 1];

    fn rec(k: usize, lines: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k > lines {
            if left == 0 {
                out.push(counts.clone());
            }
            return;
        }
        let w = binom2(k);
        for n in 0..=left / w {
            counts[k] = n;
            rec(k + 1, lines, left - n * w, counts, out);
        }
        counts[k] = 0;
    }
    rec(2, lines, target, &mut counts, &mut out);
    out.sort_by(|x, y| x[2..].cmp(&y[2..]));
    Ok(out
        .into_iter()
        .map(|c| Signature::new(c.into_iter().enumerate().skip(2)).expect("k >= 2"))
        .collect())
}

/// Returns the smallest `c` for which the large-point inequality fails, if any.
///
/// For a point where `l - c` lines meet, the remaining points satisfy
/// `sum C(k-1, 2) <= C(c, 2)`, since each of them carries at most one line
/// of the pencil through the large point.
pub fn largepoint_violation(sig: &Signature, lines: usize) -> Option<usize> {
    let mut cs: Vec<usize> = sig
        .counts()
        .keys()
        .filter(|&&m| m <= lines)
        .map(|&m| lines - m)
        .collect();
    cs.sort_unstable();
    cs.into_iter().find(|&c| {
        let m = lines - c;
        let rest = sig.minus(&Signature::from_multiplicities([m])).expect("m present");
        let lhs: usize = rest.counts().iter().map(|(&k, &n)| n * binom2(k - 1)).sum();
        lhs > binom2(c)
    })
}

pub fn largepoint_filter(sig: &Signature, lines: usize) -> bool {
    largepoint_violation(sig, lines).is_none()
}

fn known_exclusion(sig: &Signature, lines: usize) -> Option<&'static str> {
    KNOWN_IMPOSSIBLE
        .iter()
        .find(|(l, s, _)| *l == lines && s.parse::<Signature>().ok().as_ref() == Some(sig))
        .map(|(_, _, r)| *r)
}

/// Signatures that survive the large-point filter and the exclusion table.
pub fn admissible_signatures(lines: usize) -> Result<Vec<Signature>> {
    Ok(classify_solutions(lines)?
        .into_iter()
        .filter_map(|(s, r)| r.is_none().then_some(s))
        .collect())
}

/// Every solution of the crossing-count equation with its exclusion reason, if any.
pub fn classify_solutions(lines: usize) -> Result<Vec<(Signature, Option<ExclusionReason>)>> {
    Ok(solve_suip(lines)?
        .into_iter()
        .map(|s| {
            let reason = largepoint_violation(&s, lines)
                .map(|c| ExclusionReason::LargePoint { c })
                .or_else(|| known_exclusion(&s, lines).map(ExclusionReason::Known));
            (s, reason)
        })
        .collect())
}

pub fn exclusions(lines: usize) -> Result<Vec<Exclusion>> {
    Ok(classify_solutions(lines)?
        .into_iter()
        .filter_map(|(signature, r)| r.map(|reason| Exclusion { signature, reason }))
        .collect())
}
