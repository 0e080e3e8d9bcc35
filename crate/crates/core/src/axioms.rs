//! Named axiom systems over the fixed signature.
//!
//! Systems that talk about a dual pseudocomplement (`DUAL_STONE`, `RDBLST`)
//! read it from the `′` slot.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::term::{holds_in, parse_sentence, Assignment, Sentence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SystemName {
    PAlgebra,
    Stone,
    DualStone,
    DeMorgan,
    Kleene,
    Dqd,
    Rdblst,
    Rklst,
    Gautama,
    AlmostGautama,
}

impl SystemName {
    pub const ALL: [SystemName; 10] = [
        SystemName::PAlgebra,
        SystemName::Stone,
        SystemName::DualStone,
        SystemName::DeMorgan,
        SystemName::Kleene,
        SystemName::Dqd,
        SystemName::Rdblst,
        SystemName::Rklst,
        SystemName::Gautama,
        SystemName::AlmostGautama,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemName::PAlgebra => "P_ALGEBRA",
            SystemName::Stone => "STONE",
            SystemName::DualStone => "DUAL_STONE",
            SystemName::DeMorgan => "DE_MORGAN",
            SystemName::Kleene => "KLEENE",
            SystemName::Dqd => "DQD",
            SystemName::Rdblst => "RDBLST",
            SystemName::Rklst => "RKLST",
            SystemName::Gautama => "GAUTAMA",
            SystemName::AlmostGautama => "ALMOST_GAUTAMA",
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::NotFound {
                kind: "axiom system",
                name: s.into(),
            })
    }
}

#[derive(Clone, Debug)]
pub struct Axiom {
    pub name: &'static str,
    pub text: &'static str,
    pub sentence: Sentence,
}

#[derive(Clone, Debug)]
pub struct AxiomSystem {
    pub name: SystemName,
    pub axioms: Vec<Axiom>,
}

const P_ALGEBRA: &[(&str, &str)] = &[
    ("star of zero", "0* = 1"),
    ("star of one", "1* = 0"),
    ("star turns joins into meets", "(x \\/ y)* = x* /\\ y*"),
    ("double star preserves meets", "(x /\\ y)** = x** /\\ y**"),
    ("double star is inflationary", "x <= x**"),
    ("star meets double star in zero", "x* /\\ x** = 0"),
];

const STONE_ID: &[(&str, &str)] = &[("Stone identity", "x* \\/ x** = 1")];

const DUAL_STONE: &[(&str, &str)] = &[
    ("dual star of one", "1' = 0"),
    ("dual star of zero", "0' = 1"),
    ("dual star turns meets into joins", "(x /\\ y)' = x' \\/ y'"),
    ("double dual star preserves joins", "(x \\/ y)'' = x'' \\/ y''"),
    ("double dual star is deflationary", "x'' <= x"),
    ("dual star joins double dual star in one", "x' \\/ x'' = 1"),
    ("dual Stone identity", "x' /\\ x'' = 0"),
];

const DE_MORGAN: &[(&str, &str)] = &[
    ("quote of zero", "0' = 1"),
    ("quote of one", "1' = 0"),
    ("meet De Morgan law", "(x /\\ y)' = x' \\/ y'"),
    ("involution", "x'' = x"),
];

const KLEENE_ID: &[(&str, &str)] = &[("Kleene identity", "x /\\ x' <= y \\/ y'")];

const DQD: &[(&str, &str)] = &[
    ("quote of zero", "0' = 1"),
    ("quote of one", "1' = 0"),
    ("meet De Morgan law", "(x /\\ y)' = x' \\/ y'"),
    ("double quote preserves joins", "(x \\/ y)'' = x'' \\/ y''"),
    ("double quote is deflationary", "x'' <= x"),
];

const REGULARITY: &[(&str, &str)] = &[("regularity", "x /\\ x'*' <= y \\/ y*")];

const RDBLST_EXTRA: &[(&str, &str)] = &[("double Stone regularity", "x /\\ x' <= y \\/ y*")];

const STAR_REGULAR: &[(&str, &str)] = &[("star-regularity", "x*' = x**")];

const ALMOST_GAUTAMA_EXTRA: &[(&str, &str)] = &[
    ("weak star-regularity", "x*'' = x*"),
    ("regular part is fixed", "(x /\\ x'*)'* = x /\\ x'*"),
];

fn groups(name: SystemName) -> Vec<&'static [(&'static str, &'static str)]> {
    match name {
        SystemName::PAlgebra => vec![P_ALGEBRA],
        SystemName::Stone => vec![P_ALGEBRA, STONE_ID],
        SystemName::DualStone => vec![DUAL_STONE],
        SystemName::DeMorgan => vec![DE_MORGAN],
        SystemName::Kleene => vec![DE_MORGAN, KLEENE_ID],
        SystemName::Dqd => vec![DQD],
        SystemName::Rdblst => vec![P_ALGEBRA, STONE_ID, DUAL_STONE, RDBLST_EXTRA, REGULARITY],
        SystemName::Rklst => vec![P_ALGEBRA, STONE_ID, DE_MORGAN, KLEENE_ID, REGULARITY],
        SystemName::Gautama => vec![P_ALGEBRA, STONE_ID, DQD, REGULARITY, STAR_REGULAR],
        SystemName::AlmostGautama => {
            vec![P_ALGEBRA, STONE_ID, DQD, REGULARITY, ALMOST_GAUTAMA_EXTRA]
        }
    }
}

impl AxiomSystem {
    pub fn get(name: SystemName) -> AxiomSystem {
        let axioms = groups(name)
            .into_iter()
            .flatten()
            .map(|&(n, text)| Axiom {
                name: n,
                text,
                sentence: parse_sentence(text).expect("registered axioms parse"),
            })
            .collect();
        AxiomSystem { name, axioms }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub sentence: &'static str,
    pub holds: bool,
    pub witness: Option<Assignment>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub algebra: String,
    pub system: SystemName,
    pub holds: bool,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

pub fn satisfies_axiom_system(algebra: &FiniteAlgebra, system: &AxiomSystem, limits: &Limits) -> Result<AxiomReport> {
    let checks = system
        .axioms
        .iter()
        .map(|ax| {
            let v = holds_in(algebra, &ax.sentence, limits)?;
            Ok(AxiomCheck {
                axiom: ax.name,
                sentence: ax.text,
                holds: v.holds,
                witness: v.witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomReport {
        algebra: algebra.name().to_string(),
        system: system.name,
        holds: checks.iter().all(|c| c.holds),
        checks,
    })
}
