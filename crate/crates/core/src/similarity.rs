//! Similarity classes: connected components of the graph on minimal
//! representatives spanned by tau, mu, sigma and triangle replacements.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::diagram::{LefschetzList, Signature};
use crate::enumerate::OmegaList;
use crate::error::{input, Error, Result};
use crate::moves::{self, TriangleOptions};

/// Which relations generate similarity on top of commutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RelationSet {
    pub use_sigma: bool,
    pub use_tau: bool,
    pub use_mu: bool,
    pub use_triangle: bool,
}

impl RelationSet {
    pub const ALL: RelationSet = RelationSet { use_sigma: true, use_tau: true, use_mu: true, use_triangle: true };
    pub const NONE: RelationSet = RelationSet { use_sigma: false, use_tau: false, use_mu: false, use_triangle: false };

    /// All 16 subsets, in the order `(sigma, tau, mu, triangle)` with `-` before `+`.
    pub fn all_subsets() -> Vec<RelationSet> {
        (0..16u8)
            .map(|m| RelationSet {
                use_sigma: m & 8 != 0,
                use_tau: m & 4 != 0,
                use_mu: m & 2 != 0,
                use_triangle: m & 1 != 0,
            })
            .collect()
    }

    /// Signs in the order sigma, tau, mu, triangle, e.g. `+-++`.
    pub fn signs(&self) -> String {
        [self.use_sigma, self.use_tau, self.use_mu, self.use_triangle]
            .iter()
            .map(|&b| if b { '+' } else { '-' })
            .collect()
    }

    /// True iff every relation enabled here is enabled in `other`.
    pub fn is_subset_of(&self, other: &RelationSet) -> bool {
        (!self.use_sigma || other.use_sigma)
            && (!self.use_tau || other.use_tau)
            && (!self.use_mu || other.use_mu)
            && (!self.use_triangle || other.use_triangle)
    }
}

impl fmt::Display for RelationSet {
    /// Letters `s`, `t`, `m`, `x` for sigma, tau, mu, triangle; `-` for none.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (on, c) in [(self.use_sigma, 's'), (self.use_tau, 't'), (self.use_mu, 'm'), (self.use_triangle, 'x')] {
            if on {
                s.push(c);
            }
        }
        if s.is_empty() {
            s.push('-');
        }
        f.write_str(&s)
    }
}

impl FromStr for RelationSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut r = RelationSet::NONE;
        for c in s.trim().chars() {
            match c {
                's' => r.use_sigma = true,
                't' => r.use_tau = true,
                'm' => r.use_mu = true,
                'x' => r.use_triangle = true,
                '-' => {}
                _ => return input(format!("unknown relation letter {c:?} (expected s, t, m, x)")),
            }
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimilarityOptions {
    pub triangle: TriangleOptions,
}

impl Default for SimilarityOptions {
    fn default() -> Self {
        SimilarityOptions { triangle: TriangleOptions::default() }
    }
}

/// Class minima adjacent to `rep` under the enabled relations.
pub fn similarity_edges(rep: &LefschetzList, rels: RelationSet, opts: &SimilarityOptions) -> Result<Vec<LefschetzList>> {
    let mut out = Vec::new();
    if rels.use_tau {
        out.push(moves::equiv_class_min(&moves::tau(rep)));
    }
    if rels.use_mu {
        out.push(moves::mu(rep)?);
    }
    if rels.use_sigma {
        out.extend(moves::sigma_class_targets(rep)?);
    }
    if rels.use_triangle {
        out.extend(moves::triangle_moves(rep, &opts.triangle)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Index of the lexicographically smallest member.
    pub representative: usize,
    /// Indices into the representative list, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityClassification {
    pub signature: Signature,
    pub relations: RelationSet,
    pub components: Vec<Component>,
}

impl SimilarityClassification {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn representatives<'a>(&'a self, omega: &'a OmegaList) -> impl Iterator<Item = &'a LefschetzList> + 'a {
        self.components.iter().map(move |c| &omega.reps[c.representative])
    }

    /// Component index of each representative.
    pub fn component_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (ci, c) in self.components.iter().enumerate() {
            for &m in &c.members {
                out[m] = ci;
            }
        }
        out
    }
}

/// Connected components of the similarity graph by depth-first search.
pub fn classify(omega: &OmegaList, rels: RelationSet) -> Result<SimilarityClassification> {
    classify_with(omega, rels, &SimilarityOptions::default())
}

pub fn classify_with(omega: &OmegaList, rels: RelationSet, opts: &SimilarityOptions) -> Result<SimilarityClassification> {
    let n = omega.len();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(u);
            for t in similarity_edges(&omega.reps[u], rels, opts)? {
                let v = omega.index_of(&t).ok_or_else(|| {
                    Error::Internal(format!("{t} reached from {} is not a representative", omega.reps[u]))
                })?;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        components.push(Component { representative: start, members });
    }
    Ok(SimilarityClassification { signature: omega.signature.clone(), relations: rels, components })
}

/// Number of classes for every relation subset, in [`RelationSet::all_subsets`] order.
pub fn relation_table(omega: &OmegaList, opts: &SimilarityOptions) -> Result<Vec<(RelationSet, usize)>> {
    RelationSet::all_subsets()
        .into_par_iter()
        .map(|r| classify_with(omega, r, opts).map(|c| (r, c.len())))
        .collect()
}
