//! Free algebras of a variety on at most three generators.
//!
//! The free algebra on `n` generators embeds in the product of one copy of
//! `S` for every SI `S` and every assignment `n → S`; it is the subalgebra
//! generated by the tuples that read off each generator. The lattice
//! median is a majority term, so by the Baker-Pixley theorem a subalgebra
//! of a product is cut out by its projections onto pairs of coordinates.
//! Elements are enumerated from those pair projections, which costs time
//! linear in the output. Small free algebras are also closed directly,
//! which yields a term for every element and cross-checks the count.

use std::collections::HashMap;

use serde::Serialize;

use super::{VarietyDescriptor, VarietyName};
use crate::algebra::{Element, FiniteAlgebra};
use crate::builtins::{Builtin, Catalog};
use crate::error::{Error, Result};
use crate::term::{Equation, Term};

/// Generator names, in order.
pub const GENERATOR_NAMES: [&str; 3] = ["x", "y", "z"];

/// Free algebras up to this size also get a term for every element.
pub const DERIVATION_LIMIT: usize = 2048;

/// Operation and operand indices that first produced an element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Derivation {
    Zero,
    One,
    Generator(usize),
    Star(usize),
    Quote(usize),
    Join(usize, usize),
    Meet(usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeAlgebra {
    pub variety: VarietyName,
    pub arity: usize,
    /// One coordinate per SI and assignment of the generators.
    pub coordinates: Vec<(Builtin, Vec<Element>)>,
    /// How each element is reached; present up to `DERIVATION_LIMIT`.
    pub derivations: Option<Vec<Derivation>>,
    #[serde(skip)]
    tuples: Vec<Vec<Element>>,
    #[serde(skip)]
    factors: Vec<FiniteAlgebra>,
    #[serde(skip)]
    index: HashMap<Vec<Element>, usize>,
}

impl FreeAlgebra {
    pub fn size(&self) -> usize {
        self.tuples.len()
    }

    /// Element index of the `i`th generator.
    pub fn generator(&self, i: usize) -> Element {
        self.index[&self.coordinates.iter().map(|(_, asg)| asg[i]).collect::<Vec<_>>()]
    }

    fn coordinate_op(&self, f: impl Fn(&FiniteAlgebra, usize) -> Element) -> Vec<Element> {
        coordinate_op(&self.coordinates, &self.factors, f)
    }

    fn eval_tuple(&self, term: &Term) -> Result<Vec<Element>> {
        Ok(match term {
            Term::Var(v) => {
                let i = GENERATOR_NAMES[..self.arity]
                    .iter()
                    .position(|g| g == v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                self.coordinate_op(|_, k| self.coordinates[k].1[i])
            }
            Term::Zero => self.coordinate_op(|a, _| a.zero()),
            Term::One => self.coordinate_op(|a, _| a.one()),
            Term::Join(l, r) | Term::Meet(l, r) => {
                let (l, r) = (self.eval_tuple(l)?, self.eval_tuple(r)?);
                let join = matches!(term, Term::Join(..));
                self.coordinate_op(|a, k| if join { a.join(l[k], r[k]) } else { a.meet(l[k], r[k]) })
            }
            Term::Star(t) => {
                let t = self.eval_tuple(t)?;
                self.coordinate_op(|a, k| a.star(t[k]))
            }
            Term::Quote(t) => {
                let t = self.eval_tuple(t)?;
                self.coordinate_op(|a, k| a.quote(t[k]))
            }
        })
    }

    /// A term denoting element `e`, when derivations were recorded.
    pub fn term_of(&self, e: Element) -> Option<Term> {
        let d = self.derivations.as_ref()?;
        Some(term_from(d, e))
    }

    /// Label of element `e`: the constant or generator name, else `e<index>`.
    pub fn label(&self, e: Element) -> String {
        let zero = self.index[&self.coordinate_op(|a, _| a.zero())];
        let one = self.index[&self.coordinate_op(|a, _| a.one())];
        if e == zero {
            return "0".into();
        }
        if e == one {
            return "1".into();
        }
        match (0..self.arity).find(|&i| self.generator(i) == e) {
            Some(i) => GENERATOR_NAMES[i].into(),
            None => format!("e{e}"),
        }
    }

    /// The element a term denotes, with variables read as generators.
    pub fn eval(&self, term: &Term) -> Result<Element> {
        let t = self.eval_tuple(term)?;
        Ok(self.index[&t])
    }

    /// An identity in the generators holds in the variety iff both sides
    /// denote the same element.
    pub fn identifies(&self, eq: &Equation) -> Result<bool> {
        Ok(self.eval(&eq.lhs)? == self.eval(&eq.rhs)?)
    }

    /// Operation tables over the elements.
    pub fn to_algebra(&self, table_cap: usize) -> Result<FiniteAlgebra> {
        let n = self.size();
        crate::limits::guard("free algebra tables", n as u128, table_cap as u128)?;
        let lookup = |t: Vec<Element>| self.index[&t];
        let un = |f: &dyn Fn(&FiniteAlgebra, Element) -> Element| -> Vec<Element> {
            self.tuples.iter().map(|x| lookup(self.coordinate_op(|a, k| f(a, x[k])))).collect()
        };
        let star = un(&|a, e| a.star(e));
        let quote = un(&|a, e| a.quote(e));
        let mut join = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        for x in &self.tuples {
            for y in &self.tuples {
                join.push(lookup(self.coordinate_op(|a, k| a.join(x[k], y[k]))));
                meet.push(lookup(self.coordinate_op(|a, k| a.meet(x[k], y[k]))));
            }
        }
        let zero = lookup(self.coordinate_op(|a, _| a.zero()));
        let one = lookup(self.coordinate_op(|a, _| a.one()));
        Ok(FiniteAlgebra::from_parts_unchecked(
            format!("F_{}({})", self.variety, self.arity),
            (0..n).map(|e| self.label(e)).collect(),
            join,
            meet,
            star,
            quote,
            zero,
            one,
        ))
    }
}

fn term_from(d: &[Derivation], e: Element) -> Term {
    match d[e] {
        Derivation::Zero => Term::Zero,
        Derivation::One => Term::One,
        Derivation::Generator(i) => Term::var(GENERATOR_NAMES[i]),
        Derivation::Star(x) => term_from(d, x).star(),
        Derivation::Quote(x) => term_from(d, x).quote(),
        Derivation::Join(x, y) => Term::join(term_from(d, x), term_from(d, y)),
        Derivation::Meet(x, y) => Term::meet(term_from(d, x), term_from(d, y)),
    }
}

fn coordinate_op(
    coordinates: &[(Builtin, Vec<Element>)],
    factors: &[FiniteAlgebra],
    f: impl Fn(&FiniteAlgebra, usize) -> Element,
) -> Vec<Element> {
    coordinates
        .iter()
        .enumerate()
        .map(|(k, (b, _))| f(&factors[b.ordinal()], k))
        .collect()
}

fn assignments(size: usize, arity: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..size).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

/// Subuniverse of `s × t` generated by the given pairs, as a membership
/// matrix indexed `x * |t| + y`.
fn pair_subuniverse(s: &FiniteAlgebra, t: &FiniteAlgebra, seeds: &[(Element, Element)]) -> Vec<bool> {
    let m = t.size();
    let mut member = vec![false; s.size() * m];
    let mut items: Vec<(Element, Element)> = Vec::new();
    let push = |p: (Element, Element), member: &mut Vec<bool>, items: &mut Vec<(Element, Element)>| {
        if !member[p.0 * m + p.1] {
            member[p.0 * m + p.1] = true;
            items.push(p);
        }
    };
    push((s.zero(), t.zero()), &mut member, &mut items);
    push((s.one(), t.one()), &mut member, &mut items);
    for &p in seeds {
        push(p, &mut member, &mut items);
    }
    let mut i = 0;
    while i < items.len() {
        let (a, b) = items[i];
        push((s.star(a), t.star(b)), &mut member, &mut items);
        push((s.quote(a), t.quote(b)), &mut member, &mut items);
        for j in 0..=i {
            let (c, d) = items[j];
            push((s.join(a, c), t.join(b, d)), &mut member, &mut items);
            push((s.meet(a, c), t.meet(b, d)), &mut member, &mut items);
        }
        i += 1;
    }
    member
}

fn cap_error(cap: usize) -> Error {
    Error::CapExceeded {
        what: "free algebra",
        needed: cap as u128 + 1,
        cap: cap as u128,
    }
}

/// Tuples whose every pair of coordinates lies in the matching pair
/// subuniverse, in lexicographic order.
fn enumerate_tuples(coordinates: &[(Builtin, Vec<Element>)], factors: &[FiniteAlgebra], cap: usize) -> Result<Vec<Vec<Element>>> {
    let k = coordinates.len();
    let alg = |i: usize| &factors[coordinates[i].0.ordinal()];
    let seeds =
        |i: usize, j: usize| -> Vec<(Element, Element)> { coordinates[i].1.iter().zip(&coordinates[j].1).map(|(&a, &b)| (a, b)).collect() };
    // pairs[j][i] for i <= j; the diagonal gives the unary projection.
    let pairs: Vec<Vec<Vec<bool>>> = (0..k)
        .map(|j| (0..=j).map(|i| pair_subuniverse(alg(i), alg(j), &seeds(i, j))).collect())
        .collect();
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(k);

    fn extend(
        j: usize,
        tuple: &mut Vec<Element>,
        out: &mut Vec<Vec<Element>>,
        pairs: &[Vec<Vec<bool>>],
        sizes: &[usize],
        cap: usize,
    ) -> Result<()> {
        if j == sizes.len() {
            if out.len() >= cap {
                return Err(cap_error(cap));
            }
            out.push(tuple.clone());
            return Ok(());
        }
        for v in 0..sizes[j] {
            if !pairs[j][j][v * sizes[j] + v] {
                continue;
            }
            if (0..j).all(|i| pairs[j][i][tuple[i] * sizes[j] + v]) {
                tuple.push(v);
                extend(j + 1, tuple, out, pairs, sizes, cap)?;
                tuple.pop();
            }
        }
        Ok(())
    }

    let sizes: Vec<usize> = (0..k).map(|i| alg(i).size()).collect();
    extend(0, &mut tuple, &mut out, &pairs, &sizes, cap)?;
    Ok(out)
}

/// Closes the generators under the operations, recording how each element
/// is first reached. Element ids follow `index`.
fn derive(free: &FreeAlgebra) -> Result<Vec<Derivation>> {
    let n = free.size();
    let mut how: Vec<Option<Derivation>> = vec![None; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let add = |tuple: Vec<Element>, d: Derivation, how: &mut Vec<Option<Derivation>>, order: &mut Vec<usize>| -> Result<()> {
        let e = *free
            .index
            .get(&tuple)
            .ok_or_else(|| Error::Invalid("closure left the enumerated free algebra".into()))?;
        if how[e].is_none() {
            how[e] = Some(d);
            order.push(e);
        }
        Ok(())
    };
    add(free.coordinate_op(|a, _| a.zero()), Derivation::Zero, &mut how, &mut order)?;
    add(free.coordinate_op(|a, _| a.one()), Derivation::One, &mut how, &mut order)?;
    for i in 0..free.arity {
        add(
            free.coordinate_op(|_, k| free.coordinates[k].1[i]),
            Derivation::Generator(i),
            &mut how,
            &mut order,
        )?;
    }
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        let tx = &free.tuples[x];
        add(free.coordinate_op(|a, k| a.star(tx[k])), Derivation::Star(x), &mut how, &mut order)?;
        add(
            free.coordinate_op(|a, k| a.quote(tx[k])),
            Derivation::Quote(x),
            &mut how,
            &mut order,
        )?;
        for j in 0..=i {
            let y = order[j];
            let ty = &free.tuples[y];
            add(
                free.coordinate_op(|a, k| a.join(ty[k], tx[k])),
                Derivation::Join(y, x),
                &mut how,
                &mut order,
            )?;
            add(
                free.coordinate_op(|a, k| a.meet(ty[k], tx[k])),
                Derivation::Meet(y, x),
                &mut how,
                &mut order,
            )?;
        }
        i += 1;
    }
    how.into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invalid("generators do not reach every enumerated tuple".into()))
}

/// Generates the free algebra of `v` on `arity ≤ 3` generators, failing
/// once more than `cap` elements appear.
pub fn free_algebra(catalog: &Catalog, v: &VarietyDescriptor, arity: usize, cap: usize) -> Result<FreeAlgebra> {
    if arity > GENERATOR_NAMES.len() {
        return Err(Error::Invalid(format!("free algebras take at most 3 generators, not {arity}")));
    }
    let factors: Vec<FiniteAlgebra> = Builtin::ALL.iter().map(|&b| catalog.get(b).clone()).collect();
    let coordinates: Vec<(Builtin, Vec<Element>)> =
        v.si.iter()
            .flat_map(|&b| assignments(factors[b.ordinal()].size(), arity).into_iter().map(move |a| (b, a)))
            .collect();
    let tuples = enumerate_tuples(&coordinates, &factors, cap)?;
    let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let mut free = FreeAlgebra {
        variety: v.name,
        arity,
        coordinates,
        derivations: None,
        tuples,
        factors,
        index,
    };
    if free.size() <= DERIVATION_LIMIT {
        free.derivations = Some(derive(&free)?);
    }
    Ok(free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_sentence;
    use crate::variety::{identity_holds, variety};

    #[test]
    fn small_free_algebras() {
        let c = Catalog::default();
        let ba1 = free_algebra(&c, &variety("BA").unwrap(), 1, 100_000).unwrap();
        assert_eq!(ba1.size(), 4);
        let ag0 = free_algebra(&c, &variety("AG").unwrap(), 0, 100_000).unwrap();
        assert_eq!(ag0.size(), 2);
        let ba2 = free_algebra(&c, &variety("BA").unwrap(), 2, 100_000).unwrap();
        assert_eq!(ba2.size(), 16);
        let alg = ba1.to_algebra(2048).unwrap();
        assert_eq!(alg.size(), 4);
        assert_eq!(alg.label(ba1.generator(0)), "x");
        for e in 0..ba2.size() {
            assert_eq!(ba2.eval(&ba2.term_of(e).unwrap()).unwrap(), e);
        }
    }

    #[test]
    fn pair_projections_match_the_closure() {
        // `derive` fails unless the closure reaches exactly the enumerated
        // tuples, so success on these is the cross-check.
        let c = Catalog::default();
        for v in VarietyDescriptor::all() {
            let f = free_algebra(&c, &v, 1, 100_000).unwrap();
            assert!(f.derivations.is_some(), "{}", v.name);
        }
        let f = free_algebra(&c, &variety("RKLST").unwrap(), 2, 100_000).unwrap();
        if f.size() <= DERIVATION_LIMIT {
            assert!(f.derivations.is_some());
        }
    }

    #[test]
    fn de_morgan_boolean_on_two_generators() {
        // Term operations of 4_dmba: 2^4 choices on {0,1}^2 and 4^6 on
        // the six swap orbits of the remaining points.
        let c = Catalog::default();
        let f = free_algebra(&c, &variety("DMBA").unwrap(), 2, 100_000).unwrap();
        assert_eq!(f.size(), 65_536);
        assert!(f.derivations.is_none());
        assert!(f.identifies(&parse_sentence("x \\/ x* = 1").unwrap().conclusion).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let c = Catalog::default();
        assert!(matches!(
            free_algebra(&c, &variety("BA").unwrap(), 2, 10),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            free_algebra(&c, &variety("G").unwrap(), 2, 100_000),
            Err(Error::CapExceeded { .. })
        ));
        assert!(free_algebra(&c, &variety("BA").unwrap(), 4, 10).is_err());
    }

    #[test]
    fn one_variable_identities_agree_with_si_checks() {
        let c = Catalog::default();
        for name in ["G", "DMBA", "AG"] {
            let v = variety(name).unwrap();
            let f = free_algebra(&c, &v, 1, 100_000).unwrap();
            for s in ["x*' = x**", "x \\/ x' = 1", "x'' = x", "x*'' = x*", "x \\/ x* = 1", "x* = x'"] {
                let s = parse_sentence(s).unwrap();
                assert_eq!(
                    f.identifies(&s.conclusion).unwrap(),
                    identity_holds(&c, &v, &s).unwrap().holds,
                    "{name}: {s}"
                );
            }
        }
    }
}
