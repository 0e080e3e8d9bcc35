//! The four subdirectly irreducible Almost Gautama algebras.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Builtin {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3_dblst")]
    ThreeDblst,
    #[serde(rename = "3_klst")]
    ThreeKlst,
    #[serde(rename = "4_dmba")]
    FourDmba,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Two, Builtin::ThreeDblst, Builtin::ThreeKlst, Builtin::FourDmba];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Two => "2",
            Builtin::ThreeDblst => "3_dblst",
            Builtin::ThreeKlst => "3_klst",
            Builtin::FourDmba => "4_dmba",
        }
    }

    /// Position in `ALL`; used for bitmask encodings of SI sets.
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn algebra(self) -> FiniteAlgebra {
        let spec = match self {
            Builtin::Two => chain_spec("2", &["0", "1"], vec![1, 0], vec![1, 0]),
            // ′ holds the dual pseudocomplement.
            Builtin::ThreeDblst => chain_spec("3_dblst", &["0", "a", "1"], vec![2, 0, 0], vec![2, 2, 0]),
            Builtin::ThreeKlst => chain_spec("3_klst", &["0", "a", "1"], vec![2, 0, 0], vec![2, 1, 0]),
            Builtin::FourDmba => {
                // 0 < a, b < 1 with a, b incomparable.
                let join = vec![vec![0, 1, 2, 3], vec![1, 1, 3, 3], vec![2, 3, 2, 3], vec![3, 3, 3, 3]];
                let meet = vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]];
                AlgebraSpec {
                    name: "4_dmba".into(),
                    size: 4,
                    labels: ["0", "a", "b", "1"].map(String::from).to_vec(),
                    join,
                    meet,
                    star: vec![3, 2, 1, 0],
                    quote: vec![3, 1, 2, 0],
                    zero: 0,
                    one: 3,
                }
            }
        };
        FiniteAlgebra::from_spec(spec).expect("builtin tables are valid")
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| Error::NotFound {
            kind: "builtin algebra",
            name: s.to_string(),
        })
    }
}

fn chain_spec(name: &str, labels: &[&str], star: Vec<usize>, quote: Vec<usize>) -> AlgebraSpec {
    let n = labels.len();
    AlgebraSpec {
        name: name.into(),
        size: n,
        labels: labels.iter().map(|s| s.to_string()).collect(),
        join: (0..n).map(|x| (0..n).map(|y| x.max(y)).collect()).collect(),
        meet: (0..n).map(|x| (0..n).map(|y| x.min(y)).collect()).collect(),
        star,
        quote,
        zero: 0,
        one: n - 1,
    }
}

/// Looks up one of `2`, `3_dblst`, `3_klst`, `4_dmba`.
pub fn builtin(name: &str) -> Result<FiniteAlgebra> {
    Ok(name.parse::<Builtin>()?.algebra())
}

/// The SI algebras that variety-level checks run against, together with the
/// size guards. Tables can be replaced to see which results depend on them.
#[derive(Clone, Debug)]
pub struct Catalog {
    algebras: Vec<FiniteAlgebra>,
    limits: Limits,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::with_limits(Limits::default())
    }
}

impl Catalog {
    pub fn with_limits(limits: Limits) -> Self {
        Catalog {
            algebras: Builtin::ALL.iter().map(|b| b.algebra()).collect(),
            limits,
        }
    }

    /// Swaps in different tables for `which`; the name is kept.
    pub fn replace(mut self, which: Builtin, algebra: FiniteAlgebra) -> Self {
        self.algebras[which.ordinal()] = algebra.with_name(which.name());
        self
    }

    pub fn get(&self, which: Builtin) -> &FiniteAlgebra {
        &self.algebras[which.ordinal()]
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }
}
