//! Homomorphisms between finite algebras.
//!
//! Enumeration assigns images to a generator sequence and closes the
//! assigned set under the operations after every choice, so a wrong guess
//! is refuted as soon as it clashes with an image forced earlier.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{subuniverse_closure, Element, FiniteAlgebra, ProductShape};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Homomorphism {
    source: String,
    target: String,
    #[serde(skip)]
    target_size: usize,
    map: Vec<Element>,
    injective: bool,
    surjective: bool,
}

impl Homomorphism {
    /// Checks preservation of every operation on every input.
    pub fn new(source: &FiniteAlgebra, target: &FiniteAlgebra, map: Vec<Element>) -> Result<Self> {
        if let Some(why) = preservation_failure(source, target, &map) {
            return Err(Error::NotHomomorphism(why));
        }
        Ok(Homomorphism::trusted(source, target, map))
    }

    fn trusted(source: &FiniteAlgebra, target: &FiniteAlgebra, map: Vec<Element>) -> Self {
        Homomorphism::with_flags(source.name().into(), target.name().into(), target.size(), map)
    }

    fn with_flags(source: String, target: String, target_size: usize, map: Vec<Element>) -> Self {
        let mut hit = vec![false; target_size];
        for &m in &map {
            hit[m] = true;
        }
        let distinct = hit.iter().filter(|&&h| h).count();
        Homomorphism {
            source,
            target,
            target_size,
            injective: distinct == map.len(),
            surjective: distinct == target_size,
            map,
        }
    }

    pub fn identity(algebra: &FiniteAlgebra) -> Self {
        Homomorphism::trusted(algebra, algebra, algebra.elements().collect())
    }

    pub fn source_name(&self) -> &str {
        &self.source
    }

    pub fn target_name(&self) -> &str {
        &self.target
    }

    pub fn map(&self) -> &[Element] {
        &self.map
    }

    pub fn apply(&self, x: Element) -> Element {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.map.iter().any(|&m| m >= self.map.len()) {
            return Err(Error::Invalid(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, first.source, first.target
            )));
        }
        let map = first.map.iter().map(|&x| self.map[x]).collect();
        Ok(Homomorphism::with_flags(
            first.source.clone(),
            self.target.clone(),
            self.target_size,
            map,
        ))
    }
}

/// First violated preservation condition, if any. Used both to validate
/// user maps and as an independent post-check on search output.
pub fn preservation_failure(source: &FiniteAlgebra, target: &FiniteAlgebra, map: &[Element]) -> Option<String> {
    if map.len() != source.size() {
        return Some(format!("map has {} entries for {} elements", map.len(), source.size()));
    }
    if let Some(&bad) = map.iter().find(|&&m| m >= target.size()) {
        return Some(format!("image {bad} is outside {}", target.name()));
    }
    let h = |x: Element| map[x];
    if h(source.zero()) != target.zero() {
        return Some("0 is not preserved".into());
    }
    if h(source.one()) != target.one() {
        return Some("1 is not preserved".into());
    }
    for x in source.elements() {
        if h(source.star(x)) != target.star(h(x)) {
            return Some(format!("* fails at {}", source.label(x)));
        }
        if h(source.quote(x)) != target.quote(h(x)) {
            return Some(format!("' fails at {}", source.label(x)));
        }
        for y in source.elements() {
            if h(source.join(x, y)) != target.join(h(x), h(y)) {
                return Some(format!("join fails at ({}, {})", source.label(x), source.label(y)));
            }
            if h(source.meet(x, y)) != target.meet(h(x), h(y)) {
                return Some(format!("meet fails at ({}, {})", source.label(x), source.label(y)));
            }
        }
    }
    None
}

/// Generators in the order they are assigned: each step takes the element
/// whose addition grows the closure most, ties to the smaller index.
fn generator_sequence(source: &FiniteAlgebra) -> Vec<Element> {
    let n = source.size();
    let mut closed = subuniverse_closure(source, &[]);
    let mut gens = Vec::new();
    while closed.len() < n {
        let mut member = vec![false; n];
        closed.iter().for_each(|&e| member[e] = true);
        let candidates = source.elements().filter(|&e| !member[e]);
        let best = if n <= 64 {
            candidates
                .map(|e| {
                    let mut seed = closed.clone();
                    seed.push(e);
                    (subuniverse_closure(source, &seed), e)
                })
                .max_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| b.1.cmp(&a.1)))
        } else {
            candidates
                .take(1)
                .map(|e| {
                    let mut seed = closed.clone();
                    seed.push(e);
                    (subuniverse_closure(source, &seed), e)
                })
                .next()
        };
        let (next, e) = best.expect("some element lies outside the closure");
        gens.push(e);
        closed = next;
    }
    gens
}

#[derive(Clone)]
struct Partial {
    image: Vec<Option<Element>>,
    assigned: Vec<Element>,
    // `assigned[..closed]` is closed under the operations.
    closed: usize,
}

impl Partial {
    fn set(&mut self, x: Element, t: Element) -> bool {
        match self.image[x] {
            Some(old) => old == t,
            None => {
                self.image[x] = Some(t);
                self.assigned.push(x);
                true
            }
        }
    }

    /// Closes the assigned set, forcing images; false on a clash.
    fn propagate(&mut self, s: &FiniteAlgebra, t: &FiniteAlgebra) -> bool {
        while self.closed < self.assigned.len() {
            let i = self.closed;
            let x = self.assigned[i];
            let hx = self.image[x].expect("assigned");
            if !self.set(s.star(x), t.star(hx)) || !self.set(s.quote(x), t.quote(hx)) {
                return false;
            }
            for j in 0..=i {
                let y = self.assigned[j];
                let hy = self.image[y].expect("assigned");
                if !self.set(s.join(x, y), t.join(hx, hy)) || !self.set(s.meet(x, y), t.meet(hx, hy)) {
                    return false;
                }
            }
            self.closed += 1;
        }
        true
    }
}

fn search(s: &FiniteAlgebra, t: &FiniteAlgebra, gens: &[Element], state: Partial, out: &mut Vec<Vec<Element>>) {
    let Some(pos) = gens.iter().position(|&g| state.image[g].is_none()) else {
        out.push(state.image.iter().map(|i| i.expect("total")).collect());
        return;
    };
    let g = gens[pos];
    for cand in t.elements() {
        let mut next = state.clone();
        next.set(g, cand);
        if next.propagate(s, t) {
            search(s, t, &gens[pos + 1..], next, out);
        }
    }
}

/// All homomorphisms extending `constraint` (a partial map, `None` where
/// free), in lexicographic order of the map arrays.
pub fn enumerate_homs(source: &FiniteAlgebra, target: &FiniteAlgebra, constraint: Option<&[Option<Element>]>) -> Result<Vec<Homomorphism>> {
    let n = source.size();
    let mut start = Partial {
        image: vec![None; n],
        assigned: Vec::new(),
        closed: 0,
    };
    if let Some(c) = constraint {
        if c.len() != n {
            return Err(Error::Invalid(format!("constraint has {} entries for {} elements", c.len(), n)));
        }
        for (x, img) in c.iter().enumerate() {
            if let Some(tx) = *img {
                if tx >= target.size() {
                    return Err(Error::Invalid(format!("constraint image {tx} is outside {}", target.name())));
                }
                start.set(x, tx);
            }
        }
    }
    if !start.set(source.zero(), target.zero()) || !start.set(source.one(), target.one()) {
        return Ok(Vec::new());
    }
    if !start.propagate(source, target) {
        return Ok(Vec::new());
    }
    let gens = generator_sequence(source);
    let mut maps: Vec<Vec<Element>> = match gens.iter().position(|&g| start.image[g].is_none()) {
        None => vec![start.image.iter().map(|i| i.expect("total")).collect()],
        Some(pos) => {
            let g = gens[pos];
            let rest = &gens[pos + 1..];
            target
                .elements()
                .into_par_iter()
                .map(|cand| {
                    let mut out = Vec::new();
                    let mut next = start.clone();
                    next.set(g, cand);
                    if next.propagate(source, target) {
                        search(source, target, rest, next, &mut out);
                    }
                    out
                })
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        }
    };
    maps.sort();
    maps.into_iter()
        .map(|m| {
            debug_assert!(preservation_failure(source, target, &m).is_none());
            Ok(Homomorphism::trusted(source, target, m))
        })
        .collect()
}

pub fn enumerate_embeddings(source: &FiniteAlgebra, target: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    if source.size() > target.size() {
        return Ok(Vec::new());
    }
    Ok(enumerate_homs(source, target, None)?
        .into_iter()
        .filter(Homomorphism::is_injective)
        .collect())
}

/// Some isomorphism, if the algebras are isomorphic.
pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Homomorphism>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    Ok(enumerate_embeddings(a, b)?.into_iter().next())
}

/// The map `x ↦ (h₁(x), …, h_k(x))` into the product indexed by `shape`.
pub fn tuple_map(homs: &[&Homomorphism], shape: &ProductShape) -> Vec<Element> {
    let n = homs.first().map_or(0, |h| h.map.len());
    let mut coords = vec![0; homs.len()];
    (0..n)
        .map(|x| {
            for (c, h) in coords.iter_mut().zip(homs) {
                *c = h.map[x];
            }
            shape.index(&coords)
        })
        .collect()
}

/// The `i`th projection out of `product`, whose factors are `factors`.
pub fn projection(product: &FiniteAlgebra, factors: &[&FiniteAlgebra], i: usize) -> Result<Homomorphism> {
    let shape = ProductShape::new(factors.iter().map(|f| f.size()).collect());
    if shape.len() != product.size() || i >= factors.len() {
        return Err(Error::Invalid("projection does not match the product".into()));
    }
    Homomorphism::new(product, factors[i], shape.projection(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::direct_product;
    use crate::builtins::builtin;
    use crate::limits::Limits;

    fn homs(a: &str, b: &str) -> Vec<Homomorphism> {
        enumerate_homs(&builtin(a).unwrap(), &builtin(b).unwrap(), None).unwrap()
    }

    #[test]
    fn hom_examples() {
        assert!(homs("3_klst", "2").is_empty());
        assert!(homs("3_dblst", "3_klst").is_empty());
        assert!(homs("3_dblst", "2").is_empty());
        let id = homs("3_klst", "3_klst");
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].map(), &[0, 1, 2]);
        let k = builtin("3_klst").unwrap();
        let full: Vec<Option<Element>> = k.elements().map(Some).collect();
        let c = enumerate_homs(&k, &k, Some(&full)).unwrap();
        assert_eq!(c, vec![Homomorphism::identity(&k)]);
    }

    #[test]
    fn embedding_examples() {
        for name in ["2", "3_dblst", "3_klst", "4_dmba"] {
            let e = enumerate_embeddings(&builtin("2").unwrap(), &builtin(name).unwrap()).unwrap();
            assert_eq!(e.len(), 1, "{name}");
        }
        let m = builtin("4_dmba").unwrap();
        let e = enumerate_embeddings(&m, &m).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].map(), &[0, 1, 2, 3]);
        assert_eq!(e[1].map(), &[0, 2, 1, 3]);
        assert!(enumerate_embeddings(&builtin("3_dblst").unwrap(), &m).unwrap().is_empty());
    }

    #[test]
    fn isomorphism_examples() {
        let d = builtin("3_dblst").unwrap();
        let k = builtin("3_klst").unwrap();
        assert!(is_isomorphic(&d, &k).unwrap().is_none());
        assert_eq!(is_isomorphic(&d, &d).unwrap(), Some(Homomorphism::identity(&d)));
    }

    #[test]
    fn verifying_constructor_rejects_bad_maps() {
        let m = builtin("4_dmba").unwrap();
        assert!(matches!(
            Homomorphism::new(&m, &m, vec![0, 1, 1, 3]),
            Err(Error::NotHomomorphism(_))
        ));
        assert!(Homomorphism::new(&m, &m, vec![0, 2, 1, 3]).is_ok());
    }

    #[test]
    fn projections_are_surjective() {
        let l = Limits::default();
        let d = builtin("3_dblst").unwrap();
        let k = builtin("3_klst").unwrap();
        let p = direct_product(&[&d, &k], &l).unwrap();
        for i in 0..2 {
            let pr = projection(&p, &[&d, &k], i).unwrap();
            assert!(pr.is_surjective());
        }
        let homs = enumerate_homs(&p, &k, None).unwrap();
        assert!(homs.iter().any(|h| h.map() == projection(&p, &[&d, &k], 1).unwrap().map()));
    }

    #[test]
    fn composition() {
        let m = builtin("4_dmba").unwrap();
        let two = builtin("2").unwrap();
        let swap = Homomorphism::new(&m, &m, vec![0, 2, 1, 3]).unwrap();
        let inc = enumerate_embeddings(&two, &m).unwrap().remove(0);
        let c = swap.after(&inc).unwrap();
        assert_eq!(c.map(), inc.map());
        assert!(c.is_injective());
        let sq = swap.after(&swap).unwrap();
        assert_eq!(sq.map(), Homomorphism::identity(&m).map());
        assert!(preservation_failure(&m, &m, sq.map()).is_none());
    }
}
