//! End-to-end classification: signatures, enumeration, similarity classes,
//! lattice grouping and group invariants, with a TSV report.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::PathBuf;

use crate::diagram::Signature;
use crate::enumerate::{enumerate_cached, EnumerateOptions, OmegaList};
use crate::error::{Error, Result};
use crate::groupcmp::{invariant_profile, InvariantProfile, ProfileOptions};
use crate::lattice::{canonical_form, lattice_of, structured_group_oracle, CanonicalForm, Mode, StructuredGroup};
use crate::pi1::presentation;
use crate::sigs::admissible_signatures;
use crate::similarity::{classify_with, RelationSet, SimilarityClassification, SimilarityOptions};

/// Signatures whose enumeration takes hours; processed only with `extended`.
pub const EXTENDED_SIGNATURES: &[&str] = &["2^13 3^3 4^1", "2^13 3^5", "2^16 3^2 4^1", "2^16 3^4", "2^19 3^3"];

pub fn is_extended(sig: &Signature) -> bool {
    EXTENDED_SIGNATURES.iter().any(|s| s.parse::<Signature>().ok().as_ref() == Some(sig))
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub enumerate: EnumerateOptions,
    pub cache_dir: Option<PathBuf>,
    pub relations: RelationSet,
    pub similarity: SimilarityOptions,
    pub profile: ProfileOptions,
    /// Compute group invariants for every similarity class.
    pub groups: bool,
    pub extended: bool,
    /// Also enumerate signatures with at most two multiple points.
    pub all_signatures: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            enumerate: EnumerateOptions::default(),
            cache_dir: None,
            relations: RelationSet::ALL,
            similarity: SimilarityOptions::default(),
            profile: ProfileOptions::default(),
            groups: true,
            extended: false,
            all_signatures: false,
        }
    }
}

/// Similarity classes sharing one lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGroup {
    pub canonical: CanonicalForm,
    /// Indices into the similarity components.
    pub classes: Vec<usize>,
    pub projective_oracle: Option<StructuredGroup>,
    /// All affine and all projective profiles agree; `None` if not computed.
    pub profiles_agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Done,
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct SignatureReport {
    pub signature: Signature,
    pub lines: usize,
    pub status: RowStatus,
    pub omega: usize,
    pub similarity: usize,
    pub lattices: Vec<LatticeGroup>,
    /// Distinct (affine, projective) profile pairs over all classes.
    pub group_profiles: Option<usize>,
}

impl SignatureReport {
    /// Every lattice class carries one affine and one projective profile.
    pub fn lattice_determines_groups(&self) -> Option<bool> {
        if self.status != RowStatus::Done {
            return None;
        }
        self.lattices.iter().map(|l| l.profiles_agree).collect::<Option<Vec<bool>>>().map(|v| v.into_iter().all(|b| b))
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub rows: Vec<SignatureReport>,
}

pub const TSV_HEADER: &str = "lines\tsignature\tstatus\tomega\tsimilarity\tlattices\tgroup_profiles\tlattice_determines_groups";

impl ClassificationReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(TSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let status = match &r.status {
                RowStatus::Done => "done".to_string(),
                RowStatus::Skipped(why) => format!("skipped:{why}"),
            };
            let (omega, sim, lat) = match r.status {
                RowStatus::Done => (r.omega.to_string(), r.similarity.to_string(), r.lattices.len().to_string()),
                RowStatus::Skipped(_) => ("-".into(), "-".into(), "-".into()),
            };
            let groups = r.group_profiles.map_or("-".to_string(), |g| g.to_string());
            let thm = match r.lattice_determines_groups() {
                Some(true) => "holds",
                Some(false) => "FAILS",
                None => "-",
            };
            let _ = writeln!(out, "{}\t[{}]\t{status}\t{omega}\t{sim}\t{lat}\t{groups}\t{thm}", r.lines, r.signature);
        }
        out
    }

    pub fn summary(&self) -> String {
        let done: Vec<&SignatureReport> = self.rows.iter().filter(|r| r.status == RowStatus::Done).collect();
        let failures: Vec<String> = done
            .iter()
            .filter(|r| r.lattice_determines_groups() == Some(false))
            .map(|r| format!("[{}]", r.signature))
            .collect();
        let mut out = format!(
            "{} signatures processed, {} skipped; {} representatives, {} similarity classes, {} lattice classes\n",
            done.len(),
            self.rows.len() - done.len(),
            done.iter().map(|r| r.omega).sum::<usize>(),
            done.iter().map(|r| r.similarity).sum::<usize>(),
            done.iter().map(|r| r.lattices.len()).sum::<usize>(),
        );
        if done.iter().any(|r| r.lattice_determines_groups().is_some()) {
            if failures.is_empty() {
                out.push_str("lattice determines the affine and projective invariant profiles in every processed signature\n");
            } else {
                let _ = writeln!(out, "profiles differ inside a lattice class for {}", failures.join(", "));
            }
        }
        out
    }
}

fn staged(stage: &str, sig: &Signature, e: Error) -> Error {
    match e {
        Error::Resource(m) => Error::Resource(format!("{stage} [{sig}]: {m}")),
        Error::Internal(m) => Error::Internal(format!("{stage} [{sig}]: {m}")),
        other => other,
    }
}

/// Groups similarity classes by the canonical form of their lattice.
pub fn lattice_groups(omega: &OmegaList, classes: &SimilarityClassification) -> Result<Vec<LatticeGroup>> {
    let mut by_form: BTreeMap<CanonicalForm, Vec<usize>> = BTreeMap::new();
    for (ci, c) in classes.components.iter().enumerate() {
        let form = canonical_form(&lattice_of(&omega.reps[c.representative]))?;
        by_form.entry(form).or_default().push(ci);
    }
    Ok(by_form
        .into_iter()
        .map(|(canonical, classes_in)| {
            let lat = lattice_of(&omega.reps[classes.components[classes_in[0]].representative]);
            LatticeGroup {
                canonical,
                classes: classes_in,
                projective_oracle: structured_group_oracle(&lat, Mode::Projective),
                profiles_agree: None,
            }
        })
        .collect())
}

pub fn process_signature(sig: &Signature, opts: &PipelineOptions) -> Result<SignatureReport> {
    let lines = sig.lines().ok_or_else(|| Error::Input(format!("[{sig}] is not a complete signature")))?;
    let omega = enumerate_cached(sig, &opts.enumerate, opts.cache_dir.as_deref()).map_err(|e| staged("enumerate", sig, e))?;
    let classes = classify_with(&omega, opts.relations, &opts.similarity).map_err(|e| staged("classify", sig, e))?;
    let mut lattices = lattice_groups(&omega, &classes).map_err(|e| staged("lattice", sig, e))?;
    let mut group_profiles = None;
    if opts.groups {
        let mut profiles: Vec<(InvariantProfile, InvariantProfile)> = Vec::with_capacity(classes.len());
        for c in &classes.components {
            let rep = &omega.reps[c.representative];
            let one = |mode| -> Result<InvariantProfile> { invariant_profile(&presentation(rep, mode)?, &opts.profile) };
            profiles.push((
                one(Mode::Affine).map_err(|e| staged("groups", sig, e))?,
                one(Mode::Projective).map_err(|e| staged("groups", sig, e))?,
            ));
        }
        for l in &mut lattices {
            let first = &profiles[l.classes[0]];
            l.profiles_agree = Some(l.classes.iter().all(|&c| &profiles[c] == first));
        }
        let mut distinct: Vec<&(InvariantProfile, InvariantProfile)> = Vec::new();
        for p in &profiles {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        group_profiles = Some(distinct.len());
    }
    Ok(SignatureReport {
        signature: sig.clone(),
        lines,
        status: RowStatus::Done,
        omega: omega.len(),
        similarity: classes.len(),
        lattices,
        group_profiles,
    })
}

fn skipped(sig: &Signature, lines: usize, why: &str) -> SignatureReport {
    SignatureReport {
        signature: sig.clone(),
        lines,
        status: RowStatus::Skipped(why.into()),
        omega: 0,
        similarity: 0,
        lattices: Vec::new(),
        group_profiles: None,
    }
}

/// Runs every admissible signature for `lines` wires. Signatures with at most
/// two multiple points are reported as skipped unless `all_signatures` is set.
pub fn pipeline(lines: usize, opts: &PipelineOptions) -> Result<ClassificationReport> {
    let mut rows = Vec::new();
    for sig in admissible_signatures(lines)? {
        let row = if !opts.all_signatures && sig.multiple_points() <= 2 {
            skipped(&sig, lines, "few-multiple-points")
        } else if !opts.extended && is_extended(&sig) {
            skipped(&sig, lines, "extended")
        } else {
            process_signature(&sig, opts)?
        };
        rows.push(row);
    }
    Ok(ClassificationReport { rows })
}
