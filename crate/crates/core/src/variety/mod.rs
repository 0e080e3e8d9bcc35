//! The eight nontrivial subvarieties of Almost Gautama algebras.
//!
//! Each variety is generated by its subdirectly irreducible members, which
//! are among the four builtins. Quasi-identities are preserved by
//! subalgebras and products, and every member of a variety is a subdirect
//! product of its SIs, so a quasi-identity holds in a variety exactly when
//! it holds in each of its SIs. Identities are the special case with no
//! premises.

mod discriminator;
mod free;
mod lemmas;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{subuniverse_closure, Element, FiniteAlgebra};
use crate::axioms::{satisfies_axiom_system, AxiomSystem, SystemName};
use crate::builtins::{Builtin, Catalog};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::morphism::enumerate_homs;
use crate::term::{describe_assignment, holds_in, parse_sentence, Assignment, Sentence, SentenceKind};

pub use discriminator::{discriminator_is_term_op, discriminator_is_term_op_in, DiscriminatorReport};
pub use free::{free_algebra, FreeAlgebra, GENERATOR_NAMES};
pub use lemmas::{lemma_registry, lemma_suite, parse_registry, LemmaRecord, LemmaReport, LemmaResult, REGISTRY_TEXT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarietyName {
    #[serde(rename = "BA")]
    Ba,
    #[serde(rename = "RDBLST")]
    Rdblst,
    #[serde(rename = "RKLST")]
    Rklst,
    #[serde(rename = "DMBA")]
    Dmba,
    #[serde(rename = "G")]
    G,
    #[serde(rename = "V_DBLST_DMBA")]
    VDblstDmba,
    #[serde(rename = "V_KLST_DMBA")]
    VKlstDmba,
    #[serde(rename = "AG")]
    Ag,
}

impl VarietyName {
    pub const ALL: [VarietyName; 8] = [
        VarietyName::Ba,
        VarietyName::Rdblst,
        VarietyName::Rklst,
        VarietyName::Dmba,
        VarietyName::G,
        VarietyName::VDblstDmba,
        VarietyName::VKlstDmba,
        VarietyName::Ag,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VarietyName::Ba => "BA",
            VarietyName::Rdblst => "RDBLST",
            VarietyName::Rklst => "RKLST",
            VarietyName::Dmba => "DMBA",
            VarietyName::G => "G",
            VarietyName::VDblstDmba => "V_DBLST_DMBA",
            VarietyName::VKlstDmba => "V_KLST_DMBA",
            VarietyName::Ag => "AG",
        }
    }

    fn si(self) -> &'static [Builtin] {
        use Builtin::*;
        match self {
            VarietyName::Ba => &[Two],
            VarietyName::Rdblst => &[Two, ThreeDblst],
            VarietyName::Rklst => &[Two, ThreeKlst],
            VarietyName::Dmba => &[Two, FourDmba],
            VarietyName::G => &[Two, ThreeDblst, ThreeKlst],
            VarietyName::VDblstDmba => &[Two, ThreeDblst, FourDmba],
            VarietyName::VKlstDmba => &[Two, ThreeKlst, FourDmba],
            VarietyName::Ag => &[Two, ThreeDblst, ThreeKlst, FourDmba],
        }
    }

    fn base(self) -> &'static [&'static str] {
        match self {
            VarietyName::Ba => &["x* = x'"],
            VarietyName::Rdblst => &["x \\/ x' = 1"],
            VarietyName::Rklst => &["x*' = x**", "x'' = x"],
            VarietyName::Dmba => &["x \\/ x* = 1"],
            VarietyName::G => &["x*' = x**"],
            VarietyName::VDblstDmba => &["x' \\/ y* \\/ z = (x' \\/ y)* \\/ (x' \\/ z)"],
            VarietyName::VKlstDmba => &["x'' = x"],
            VarietyName::Ag => &[],
        }
    }
}

impl fmt::Display for VarietyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VarietyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VarietyName::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::NotFound {
                kind: "variety",
                name: s.to_string(),
            })
    }
}

/// A variety by its SIs and an equational base relative to the Almost
/// Gautama axioms.
#[derive(Clone, Debug, Serialize)]
pub struct VarietyDescriptor {
    pub name: VarietyName,
    pub si: Vec<Builtin>,
    pub base: Vec<&'static str>,
    #[serde(skip)]
    sentences: Vec<Sentence>,
}

impl VarietyDescriptor {
    pub fn get(name: VarietyName) -> Self {
        VarietyDescriptor {
            name,
            si: name.si().to_vec(),
            base: name.base().to_vec(),
            sentences: name
                .base()
                .iter()
                .map(|t| parse_sentence(t).expect("registered bases parse"))
                .collect(),
        }
    }

    pub fn all() -> Vec<VarietyDescriptor> {
        VarietyName::ALL.into_iter().map(VarietyDescriptor::get).collect()
    }

    pub fn base_sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn contains(&self, si: Builtin) -> bool {
        self.si.contains(&si)
    }

    /// Bit `i` is set when `Builtin::ALL[i]` is an SI of the variety.
    pub fn si_mask(&self) -> u8 {
        self.si.iter().fold(0, |m, b| m | 1 << b.ordinal())
    }

    /// Subvariety order, which is inclusion of SI sets.
    pub fn leq(&self, other: &VarietyDescriptor) -> bool {
        self.si_mask() & !other.si_mask() == 0
    }

    pub fn from_mask(mask: u8) -> Option<VarietyDescriptor> {
        VarietyDescriptor::all().into_iter().find(|v| v.si_mask() == mask)
    }
}

pub fn variety(name: &str) -> Result<VarietyDescriptor> {
    Ok(VarietyDescriptor::get(name.parse()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub algebra: Builtin,
    pub witness: Assignment,
    /// The witness with element labels, e.g. `x=b`.
    pub described: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyVerdict {
    pub holds: bool,
    pub countermodel: Option<Countermodel>,
}

/// Exact: decided on the SIs of `v`, first failing SI reported.
pub fn quasi_identity_holds(catalog: &Catalog, v: &VarietyDescriptor, sentence: &Sentence) -> Result<VarietyVerdict> {
    for &si in &v.si {
        let alg = catalog.get(si);
        let verdict = holds_in(alg, sentence, catalog.limits())?;
        if let Some(w) = verdict.witness {
            return Ok(VarietyVerdict {
                holds: false,
                countermodel: Some(Countermodel {
                    algebra: si,
                    described: describe_assignment(alg, &w),
                    witness: w,
                }),
            });
        }
    }
    Ok(VarietyVerdict {
        holds: true,
        countermodel: None,
    })
}

pub fn identity_holds(catalog: &Catalog, v: &VarietyDescriptor, sentence: &Sentence) -> Result<VarietyVerdict> {
    if sentence.kind() != SentenceKind::Identity {
        return Err(Error::Invalid(format!("`{sentence}` has premises; it is not an identity")));
    }
    quasi_identity_holds(catalog, v, sentence)
}

/// First base sentence of `v` failing in `algebra`, with its witness.
pub fn base_failure(algebra: &FiniteAlgebra, v: &VarietyDescriptor, limits: &Limits) -> Result<Option<(String, String)>> {
    for (text, s) in v.base.iter().zip(&v.sentences) {
        let verdict = holds_in(algebra, s, limits)?;
        if !verdict.holds {
            return Ok(Some((text.to_string(), verdict.describe_witness(algebra))));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseCell {
    pub si: Builtin,
    pub variety: VarietyName,
    /// The SI satisfies the base of the variety.
    pub satisfied: bool,
    /// The SI is listed among the variety's SIs.
    pub member: bool,
    /// Failing base sentence and witness, when not satisfied.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseMatrix {
    pub cells: Vec<BaseCell>,
}

impl BaseMatrix {
    pub fn matching_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.satisfied == c.member).count()
    }

    pub fn matches(&self) -> bool {
        self.matching_cells() == self.cells.len()
    }

    pub fn satisfied_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.satisfied).count()
    }

    pub fn cell(&self, si: Builtin, variety: VarietyName) -> Option<&BaseCell> {
        self.cells.iter().find(|c| c.si == si && c.variety == variety)
    }
}

/// Base satisfaction of every SI against every variety, rows by SI.
pub fn verify_bases(catalog: &Catalog) -> Result<BaseMatrix> {
    let jobs: Vec<(Builtin, VarietyDescriptor)> = Builtin::ALL
        .into_iter()
        .flat_map(|b| VarietyDescriptor::all().into_iter().map(move |v| (b, v)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|(b, v)| {
            let failure = base_failure(catalog.get(*b), v, catalog.limits())?;
            Ok(BaseCell {
                si: *b,
                variety: v.name,
                satisfied: failure.is_none(),
                member: v.contains(*b),
                failure: failure.map(|(s, w)| format!("{s} fails at {w}")),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaseMatrix { cells })
}

/// Checks the Almost Gautama axioms, reporting the first failure.
pub fn check_almost_gautama(algebra: &FiniteAlgebra, limits: &Limits) -> Result<()> {
    let report = satisfies_axiom_system(algebra, &AxiomSystem::get(SystemName::AlmostGautama), limits)?;
    match report.first_failure() {
        None => Ok(()),
        Some(f) => Err(Error::NotInAg {
            algebra: algebra.name().to_string(),
            sentence: f.sentence.to_string(),
            witness: f.witness.as_ref().map(|w| describe_assignment(algebra, w)).unwrap_or_default(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedVariety {
    /// Least variety whose base the algebra satisfies.
    pub by_base: VarietyName,
    /// Variety whose SIs are the builtins found in HS of the algebra.
    pub by_si: VarietyName,
    pub si_found: Vec<Builtin>,
}

impl GeneratedVariety {
    pub fn agree(&self) -> bool {
        self.by_base == self.by_si
    }
}

/// The variety generated by a finite Almost Gautama algebra, computed from
/// base satisfaction and, independently, from the SIs among its quotients
/// of subalgebras.
pub fn generated_subvariety(catalog: &Catalog, algebra: &FiniteAlgebra) -> Result<GeneratedVariety> {
    if algebra.size() < 2 {
        return Err(Error::Invalid("a trivial algebra generates the trivial variety".into()));
    }
    let limits = catalog.limits();
    check_almost_gautama(algebra, limits)?;

    let mut satisfied = Vec::new();
    for v in VarietyDescriptor::all() {
        if base_failure(algebra, &v, limits)?.is_none() {
            satisfied.push(v);
        }
    }
    let by_base = satisfied.iter().min_by_key(|v| v.si.len()).expect("the base of AG is empty").name;

    let si_found: Vec<Builtin> = Builtin::ALL
        .into_iter()
        .filter(|&b| maps_onto_from_subalgebra(algebra, catalog.get(b)))
        .collect();
    let mask = si_found.iter().fold(0u8, |m, b| m | 1 << b.ordinal());
    let by_si = VarietyDescriptor::from_mask(mask)
        .ok_or_else(|| {
            Error::Invalid(format!(
                "SIs {{{}}} of {} match no listed variety",
                si_found.iter().map(|b| b.name()).collect::<Vec<_>>().join(", "),
                algebra.name()
            ))
        })?
        .name;
    Ok(GeneratedVariety { by_base, by_si, si_found })
}

// Size of a smallest generating set, by brute force over small subsets.
fn generator_count(algebra: &FiniteAlgebra) -> usize {
    let n = algebra.size();
    (0..=n)
        .find(|&k| subsets(n, k).any(|s| subuniverse_closure(algebra, &s).len() == n))
        .expect("the whole universe generates")
}

fn subsets(n: usize, k: usize) -> Box<dyn Iterator<Item = Vec<Element>>> {
    if k == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new((0..n).flat_map(move |first| {
        subsets(n - first - 1, k - 1).map(move |rest| std::iter::once(first).chain(rest.into_iter().map(|r| r + first + 1)).collect())
    }))
}

/// Whether `target` is a homomorphic image of a subalgebra of `source`.
/// Preimages of a generating set of `target` generate a subalgebra that
/// still maps onto it, so subalgebras with that many generators suffice.
fn maps_onto_from_subalgebra(source: &FiniteAlgebra, target: &FiniteAlgebra) -> bool {
    let k = generator_count(target);
    let mut seen = std::collections::HashSet::new();
    for seed in subsets(source.size(), k) {
        let sub = subuniverse_closure(source, &seed);
        if sub.len() < target.size() || !seen.insert(sub.clone()) {
            continue;
        }
        let b = source.subalgebra(&sub).expect("closed set");
        if enumerate_homs(&b, target, None)
            .expect("no constraint")
            .iter()
            .any(|h| h.is_surjective())
        {
            return true;
        }
    }
    false
}
