//! Congruences: principal congruences, the congruence lattice, and the
//! simple / subdirectly irreducible / directly indecomposable trichotomy.

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::limits::{guard, Limits};
use crate::partition::Partition;

/// Least congruence identifying `a` and `b`.
pub fn principal_congruence(algebra: &FiniteAlgebra, a: Element, b: Element) -> Partition {
    congruence_generated(algebra, &[(a, b)])
}

/// Least congruence containing every listed pair.
///
/// Every pair that causes a merge is pushed through all basic translations;
/// the equivalence generated by a translation-closed set of pairs is a
/// congruence.
pub fn congruence_generated(algebra: &FiniteAlgebra, pairs: &[(Element, Element)]) -> Partition {
    let n = algebra.size();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(Element, Element)> = Vec::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            work.push((a, b));
        }
    }
    while let Some((x, y)) = work.pop() {
        let mut push = |u: Element, v: Element, uf: &mut UnionFind<usize>| {
            if uf.union(u, v) {
                work.push((u, v));
            }
        };
        push(algebra.star(x), algebra.star(y), &mut uf);
        push(algebra.quote(x), algebra.quote(y), &mut uf);
        for z in 0..n {
            // Join and meet are commutative, so one slot suffices.
            push(algebra.join(x, z), algebra.join(y, z), &mut uf);
            push(algebra.meet(x, z), algebra.meet(y, z), &mut uf);
        }
    }
    Partition::from_union_find(uf)
}

/// All congruences, ordered from Δ (most blocks) to ∇, ties broken by the
/// block-id array.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceLattice {
    congruences: Vec<Partition>,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn congruences(&self) -> &[Partition] {
        &self.congruences
    }

    pub fn bottom(&self) -> &Partition {
        &self.congruences[0]
    }

    pub fn top(&self) -> &Partition {
        self.congruences.last().expect("lattice is nonempty")
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.congruences.iter().position(|c| c == p)
    }

    /// Refinement order on positions.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.congruences[i].refines(&self.congruences[j])
    }

    /// Minimal congruences above Δ.
    pub fn atoms(&self) -> Vec<&Partition> {
        let bottom = self.bottom();
        let nontrivial: Vec<&Partition> = self.congruences.iter().filter(|c| *c != bottom).collect();
        nontrivial
            .iter()
            .filter(|c| !nontrivial.iter().any(|d| d != *c && d.refines(c)))
            .copied()
            .collect()
    }
}

pub fn congruence_lattice(algebra: &FiniteAlgebra, limits: &Limits) -> Result<CongruenceLattice> {
    let n = algebra.size();
    guard("congruence lattice", n as u128, limits.congruence_elements as u128)?;
    let pairs: Vec<(Element, Element)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let principal: BTreeSet<Partition> = pairs
        .par_iter()
        .map(|&(a, b)| principal_congruence(algebra, a, b))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    // Every congruence of a finite algebra is a finite join of principal ones.
    let mut all: BTreeSet<Partition> = principal.clone();
    all.insert(Partition::discrete(n));
    let mut frontier: Vec<Partition> = principal.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for p in &principal {
                let j = c.join(p);
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut congruences: Vec<Partition> = all.into_iter().collect();
    congruences.sort_by(|a, b| b.block_count().cmp(&a.block_count()).then_with(|| a.cmp(b)));
    Ok(CongruenceLattice { congruences })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub simple: bool,
    pub subdirectly_irreducible: bool,
    pub directly_indecomposable: bool,
    /// The least nontrivial congruence, when the algebra is SI.
    pub monolith: Option<Partition>,
    /// A pair of complementary permuting congruences other than (Δ, ∇).
    pub factor_pair: Option<(Partition, Partition)>,
    pub congruence_count: usize,
}

/// Trivial algebras count as none of simple, SI or DI.
pub fn classify(algebra: &FiniteAlgebra, limits: &Limits) -> Result<Classification> {
    let con = congruence_lattice(algebra, limits)?;
    let nontrivial = algebra.size() > 1;
    let atoms = con.atoms();
    let monolith = (nontrivial && atoms.len() == 1).then(|| atoms[0].clone());
    let bottom = con.bottom();
    let top = con.top();
    let mut factor_pair = None;
    'search: for (i, t) in con.congruences().iter().enumerate() {
        if t == bottom || t == top {
            continue;
        }
        for p in &con.congruences()[i + 1..] {
            if p == top {
                continue;
            }
            if t.meet(p).is_discrete() && t.join(p).is_full() && t.permutes_with(p) {
                factor_pair = Some((t.clone(), p.clone()));
                break 'search;
            }
        }
    }
    Ok(Classification {
        simple: nontrivial && con.len() == 2,
        subdirectly_irreducible: monolith.is_some(),
        directly_indecomposable: nontrivial && factor_pair.is_none(),
        monolith,
        factor_pair,
        congruence_count: con.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScReport {
    /// `x ∧ x′* = 0` for every `x ≠ 1`.
    pub sc: bool,
    /// Least element violating it.
    pub sc_witness: Option<Element>,
    /// `x ∨ x* = 1` only for `x ∈ {0, 1}`.
    pub complement_dichotomy: bool,
    pub complement_witness: Option<Element>,
}

pub fn check_sc(algebra: &FiniteAlgebra) -> ScReport {
    let a = algebra;
    let sc_witness = a.elements().find(|&x| x != a.one() && a.meet(x, a.star(a.quote(x))) != a.zero());
    let complement_witness = a
        .elements()
        .find(|&x| x != a.zero() && x != a.one() && a.join(x, a.star(x)) == a.one());
    ScReport {
        sc: sc_witness.is_none(),
        sc_witness,
        complement_dichotomy: complement_witness.is_none(),
        complement_witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CepReport {
    pub holds: bool,
    /// A congruence of the subalgebra with no extension.
    pub counterexample: Option<Partition>,
}

/// Checks that every congruence of `sub` is the restriction of a congruence
/// of `sup` along `embedding`. A congruence θ extends iff the congruence of
/// `sup` generated by its image restricts back to θ.
pub fn cep_instance(sub: &FiniteAlgebra, sup: &FiniteAlgebra, embedding: &[Element], limits: &Limits) -> Result<CepReport> {
    if embedding.len() != sub.size() || embedding.iter().any(|&e| e >= sup.size()) {
        return Err(Error::Invalid(format!(
            "map of length {} is not an embedding of {} into {}",
            embedding.len(),
            sub.name(),
            sup.name()
        )));
    }
    let con = congruence_lattice(sub, limits)?;
    for theta in con.congruences() {
        let pairs: Vec<(Element, Element)> = (0..sub.size())
            .flat_map(|x| (x + 1..sub.size()).map(move |y| (x, y)))
            .filter(|&(x, y)| theta.related(x, y))
            .map(|(x, y)| (embedding[x], embedding[y]))
            .collect();
        let generated = congruence_generated(sup, &pairs);
        if generated.pullback(embedding) != *theta {
            return Ok(CepReport {
                holds: false,
                counterexample: Some(theta.clone()),
            });
        }
    }
    Ok(CepReport {
        holds: true,
        counterexample: None,
    })
}

/// Quotient algebra; block `i` is labelled by its least element.
pub fn quotient(algebra: &FiniteAlgebra, theta: &Partition) -> Result<FiniteAlgebra> {
    if !theta.is_compatible(algebra) {
        return Err(Error::NotCongruence(algebra.name().to_string()));
    }
    let blocks = theta.blocks();
    let k = blocks.len();
    let reps: Vec<Element> = blocks.iter().map(|b| b[0]).collect();
    let cls = |x: Element| theta.block_of(x);
    let mut join = Vec::with_capacity(k * k);
    let mut meet = Vec::with_capacity(k * k);
    for &x in &reps {
        for &y in &reps {
            join.push(cls(algebra.join(x, y)));
            meet.push(cls(algebra.meet(x, y)));
        }
    }
    Ok(FiniteAlgebra::from_parts_unchecked(
        format!("{}/θ", algebra.name()),
        reps.iter().map(|&r| algebra.label(r).to_string()).collect(),
        join,
        meet,
        reps.iter().map(|&r| cls(algebra.star(r))).collect(),
        reps.iter().map(|&r| cls(algebra.quote(r))).collect(),
        cls(algebra.zero()),
        cls(algebra.one()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::direct_product;
    use crate::builtins::{builtin, Builtin};

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn principal_examples() {
        let d = builtin("3_dblst").unwrap();
        assert!(principal_congruence(&d, 0, 1).is_full());
        assert!(principal_congruence(&d, 1, 1).is_discrete());
        let two = builtin("2").unwrap();
        let sq = direct_product(&[&two, &two], &l()).unwrap();
        // (0,0) and (0,1) are indices 0 and 1; the first-projection kernel.
        let cg = principal_congruence(&sq, 0, 1);
        assert_eq!(cg.block_ids(), &[0, 0, 1, 1]);
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(congruence_lattice(&builtin("3_klst").unwrap(), &l()).unwrap().len(), 2);
        assert_eq!(congruence_lattice(&builtin("2").unwrap(), &l()).unwrap().len(), 2);
        let two = builtin("2").unwrap();
        let sq = direct_product(&[&two, &two], &l()).unwrap();
        let con = congruence_lattice(&sq, &l()).unwrap();
        assert_eq!(con.len(), 4);
        assert!(con.bottom().is_discrete());
        assert!(con.top().is_full());
        assert_eq!(con.atoms().len(), 2);
        for c in con.congruences() {
            assert!(c.is_compatible(&sq));
        }
    }

    #[test]
    fn builtins_are_simple_and_satisfy_sc() {
        for b in Builtin::ALL {
            let a = b.algebra();
            let c = classify(&a, &l()).unwrap();
            assert!(c.simple && c.subdirectly_irreducible && c.directly_indecomposable, "{b}");
            assert!(check_sc(&a).sc, "{b}");
        }
    }

    #[test]
    fn products_are_decomposable() {
        let p = direct_product(&[&builtin("3_dblst").unwrap(), &builtin("2").unwrap()], &l()).unwrap();
        let c = classify(&p, &l()).unwrap();
        assert!(!c.simple && !c.subdirectly_irreducible && !c.directly_indecomposable);
        assert!(c.factor_pair.is_some());
        assert!(!check_sc(&p).sc);
    }

    #[test]
    fn sc_witness_on_mixed_product() {
        let p = direct_product(&[&builtin("3_dblst").unwrap(), &builtin("3_klst").unwrap()], &l()).unwrap();
        let r = check_sc(&p);
        assert!(!r.sc);
        assert_eq!(p.label(r.sc_witness.unwrap()), "(0,1)");
        // (a,1) violates it as well.
        let x = p.element("(a,1)").unwrap();
        assert_ne!(p.meet(x, p.star(p.quote(x))), p.zero());
    }

    #[test]
    fn complement_dichotomy_is_reported_separately() {
        let m = builtin("4_dmba").unwrap();
        let r = check_sc(&m);
        assert!(r.sc);
        assert!(!r.complement_dichotomy);
        assert_eq!(r.complement_witness, m.element("a"));
        assert!(check_sc(&builtin("3_klst").unwrap()).complement_dichotomy);
    }

    #[test]
    fn cep_examples() {
        let m = builtin("4_dmba").unwrap();
        let two = builtin("2").unwrap();
        assert!(cep_instance(&two, &m, &[m.zero(), m.one()], &l()).unwrap().holds);
        let k = builtin("3_klst").unwrap();
        let kk = direct_product(&[&k, &k], &l()).unwrap();
        let diag: Vec<Element> = (0..3).map(|x| x * 3 + x).collect();
        assert!(cep_instance(&k, &kk, &diag, &l()).unwrap().holds);
        assert!(cep_instance(&k, &k, &[0, 1, 2], &l()).unwrap().holds);
    }

    #[test]
    fn quotient_by_factor_kernel() {
        let two = builtin("2").unwrap();
        let sq = direct_product(&[&two, &two], &l()).unwrap();
        let q = quotient(&sq, &principal_congruence(&sq, 0, 1)).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.star_table(), two.star_table());
        let bad = Partition::from_labels(&[0, 1, 1, 0]);
        assert!(matches!(quotient(&sq, &bad), Err(Error::NotCongruence(_))));
    }

    #[test]
    fn lattice_cap() {
        let limits = Limits {
            congruence_elements: 2,
            ..l()
        };
        assert!(matches!(
            congruence_lattice(&builtin("3_klst").unwrap(), &limits),
            Err(Error::CapExceeded { .. })
        ));
    }
}
