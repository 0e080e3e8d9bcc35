//! Finite algebras in the signature `(∨, ∧, *, ′, 0, 1)`.
//!
//! Elements are dense indices `0..n`. The constants may sit at any index;
//! the lattice order is read off the meet table (`x ≤ y` iff `x ∧ y = x`).

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{guard, Limits};

pub type Element = usize;

/// On-disk form of an algebra. Field order is the canonical key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub name: String,
    pub size: usize,
    pub labels: Vec<String>,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub star: Vec<usize>,
    pub quote: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

/// Which basic operations a closure or search takes into account.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fragment {
    /// All of `∨, ∧, *, ′, 0, 1`.
    #[default]
    Full,
    /// The bounded lattice reduct `∨, ∧, 0, 1`.
    Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    labels: Vec<String>,
    join: Vec<Element>,
    meet: Vec<Element>,
    star: Vec<Element>,
    quote: Vec<Element>,
    zero: Element,
    one: Element,
}

impl FiniteAlgebra {
    /// Builds an algebra from a spec, checking every table entry and all
    /// bounded distributive lattice axioms.
    pub fn from_spec(spec: AlgebraSpec) -> Result<Self> {
        let n = spec.size;
        if n == 0 {
            return Err(Error::Shape {
                table: "size",
                detail: "universe must be nonempty".into(),
            });
        }
        if spec.labels.len() != n {
            return Err(Error::Shape {
                table: "labels",
                detail: format!("{} labels for {} elements", spec.labels.len(), n),
            });
        }
        let mut seen = HashSet::new();
        for l in &spec.labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let join = flatten_binary("join", &spec.join, n)?;
        let meet = flatten_binary("meet", &spec.meet, n)?;
        check_unary("star", &spec.star, n)?;
        check_unary("quote", &spec.quote, n)?;
        for (table, value) in [("zero", spec.zero), ("one", spec.one)] {
            if value >= n {
                return Err(Error::OutOfRange {
                    table,
                    position: "constant".into(),
                    value,
                    size: n,
                });
            }
        }
        let algebra = FiniteAlgebra {
            name: spec.name,
            labels: spec.labels,
            join,
            meet,
            star: spec.star,
            quote: spec.quote,
            zero: spec.zero,
            one: spec.one,
        };
        algebra.check_lattice()?;
        Ok(algebra)
    }

    /// Construction path for algebras derived from already checked ones
    /// (products, subalgebras, quotients). Small results are re-checked in
    /// debug builds.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts_unchecked(
        name: String,
        labels: Vec<String>,
        join: Vec<Element>,
        meet: Vec<Element>,
        star: Vec<Element>,
        quote: Vec<Element>,
        zero: Element,
        one: Element,
    ) -> Self {
        let a = FiniteAlgebra {
            name,
            labels,
            join,
            meet,
            star,
            quote,
            zero,
            one,
        };
        #[cfg(debug_assertions)]
        if a.size() <= 32 {
            a.check_lattice().expect("derived algebra must be a lattice");
        }
        a
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        FiniteAlgebra {
            name: "1".into(),
            labels: vec!["0".into()],
            join: vec![0],
            meet: vec![0],
            star: vec![0],
            quote: vec![0],
            zero: 0,
            one: 0,
        }
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let n = self.size();
        AlgebraSpec {
            name: self.name.clone(),
            size: n,
            labels: self.labels.clone(),
            join: self.join.chunks(n).map(<[_]>::to_vec).collect(),
            meet: self.meet.chunks(n).map(<[_]>::to_vec).collect(),
            star: self.star.clone(),
            quote: self.quote.clone(),
            zero: self.zero,
            one: self.one,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Element) -> &str {
        &self.labels[x]
    }

    pub fn element(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn join(&self, x: Element, y: Element) -> Element {
        self.join[x * self.size() + y]
    }

    #[inline]
    pub fn meet(&self, x: Element, y: Element) -> Element {
        self.meet[x * self.size() + y]
    }

    #[inline]
    pub fn star(&self, x: Element) -> Element {
        self.star[x]
    }

    #[inline]
    pub fn quote(&self, x: Element) -> Element {
        self.quote[x]
    }

    #[inline]
    pub fn zero(&self) -> Element {
        self.zero
    }

    #[inline]
    pub fn one(&self) -> Element {
        self.one
    }

    #[inline]
    pub fn leq(&self, x: Element, y: Element) -> bool {
        self.meet(x, y) == x
    }

    pub fn star_table(&self) -> &[Element] {
        &self.star
    }

    pub fn quote_table(&self) -> &[Element] {
        &self.quote
    }

    /// Checks every bounded distributive lattice axiom exhaustively.
    pub fn check_lattice(&self) -> Result<()> {
        let n = self.size();
        let (zero, one) = (self.zero, self.one);
        let fail = |axiom, witness: Vec<usize>| Err(Error::LatticeAxiom { axiom, witness });
        if n > 1 && zero == one {
            return fail("zero differs from one", vec![zero]);
        }
        for x in 0..n {
            if self.join(x, x) != x {
                return fail("join idempotence", vec![x]);
            }
            if self.meet(x, x) != x {
                return fail("meet idempotence", vec![x]);
            }
            if self.join(x, zero) != x {
                return fail("zero is the least element", vec![x]);
            }
            if self.meet(x, one) != x {
                return fail("one is the greatest element", vec![x]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.join(x, y) != self.join(y, x) {
                    return fail("join commutativity", vec![x, y]);
                }
                if self.meet(x, y) != self.meet(y, x) {
                    return fail("meet commutativity", vec![x, y]);
                }
                if self.join(x, self.meet(x, y)) != x {
                    return fail("absorption of meet by join", vec![x, y]);
                }
                if self.meet(x, self.join(x, y)) != x {
                    return fail("absorption of join by meet", vec![x, y]);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.join(self.join(x, y), z) != self.join(x, self.join(y, z)) {
                        return fail("join associativity", vec![x, y, z]);
                    }
                    if self.meet(self.meet(x, y), z) != self.meet(x, self.meet(y, z)) {
                        return fail("meet associativity", vec![x, y, z]);
                    }
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return fail("distributivity", vec![x, y, z]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Subalgebra on a closed set of elements, listed in increasing order.
    /// Element `i` of the result is `elements[i]` of `self`.
    pub fn subalgebra(&self, elements: &[Element]) -> Result<FiniteAlgebra> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut index = vec![usize::MAX; self.size()];
        for (i, &e) in sorted.iter().enumerate() {
            if e >= self.size() {
                return Err(Error::Invalid(format!("element {e} not in {}", self.name)));
            }
            index[e] = i;
        }
        let closed = subuniverse_closure(self, &sorted);
        if closed.len() != sorted.len() {
            return Err(Error::Invalid(format!(
                "{{{}}} is not a subuniverse of {}",
                sorted.iter().map(|&e| self.label(e)).collect::<Vec<_>>().join(","),
                self.name
            )));
        }
        let m = sorted.len();
        let mut join = Vec::with_capacity(m * m);
        let mut meet = Vec::with_capacity(m * m);
        for &x in &sorted {
            for &y in &sorted {
                join.push(index[self.join(x, y)]);
                meet.push(index[self.meet(x, y)]);
            }
        }
        Ok(FiniteAlgebra::from_parts_unchecked(
            format!(
                "{}[{}]",
                self.name,
                sorted.iter().map(|&e| self.label(e)).collect::<Vec<_>>().join(",")
            ),
            sorted.iter().map(|&e| self.labels[e].clone()).collect(),
            join,
            meet,
            sorted.iter().map(|&x| index[self.star(x)]).collect(),
            sorted.iter().map(|&x| index[self.quote(x)]).collect(),
            index[self.zero],
            index[self.one],
        ))
    }

    /// Human-readable operation tables.
    pub fn render_tables(&self) -> String {
        let n = self.size();
        let w = self.labels.iter().map(String::len).max().unwrap_or(1).max(1);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "algebra {} ({} elements, 0 = {}, 1 = {})",
            self.name,
            n,
            self.label(self.zero),
            self.label(self.one)
        );
        for (sym, table) in [("\\/", &self.join), ("/\\", &self.meet)] {
            let _ = write!(out, "{sym:>w$} |");
            for y in 0..n {
                let _ = write!(out, " {:>w$}", self.label(y));
            }
            out.push('\n');
            let _ = writeln!(out, "{}", "-".repeat((w + 1) * (n + 1) + 1));
            for x in 0..n {
                let _ = write!(out, "{:>w$} |", self.label(x));
                for y in 0..n {
                    let _ = write!(out, " {:>w$}", self.label(table[x * n + y]));
                }
                out.push('\n');
            }
            out.push('\n');
        }
        for (sym, table) in [("*", &self.star), ("'", &self.quote)] {
            let _ = write!(out, "{sym:>w$} |");
            for &y in table.iter() {
                let _ = write!(out, " {:>w$}", self.label(y));
            }
            out.push('\n');
        }
        out
    }
}

fn flatten_binary(table: &'static str, rows: &[Vec<usize>], n: usize) -> Result<Vec<Element>> {
    if rows.len() != n {
        return Err(Error::Shape {
            table,
            detail: format!("{} rows for {} elements", rows.len(), n),
        });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (x, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Shape {
                table,
                detail: format!("row {x} has {} entries", row.len()),
            });
        }
        for (y, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::OutOfRange {
                    table,
                    position: format!("({x}, {y})"),
                    value: v,
                    size: n,
                });
            }
            flat.push(v);
        }
    }
    Ok(flat)
}

fn check_unary(table: &'static str, row: &[usize], n: usize) -> Result<()> {
    if row.len() != n {
        return Err(Error::Shape {
            table,
            detail: format!("{} entries for {} elements", row.len(), n),
        });
    }
    for (x, &v) in row.iter().enumerate() {
        if v >= n {
            return Err(Error::OutOfRange {
                table,
                position: format!("{x}"),
                value: v,
                size: n,
            });
        }
    }
    Ok(())
}

/// Parses an algebra document and validates it.
pub fn load_algebra(text: &str) -> Result<FiniteAlgebra> {
    let spec: AlgebraSpec = serde_json::from_str(text)?;
    FiniteAlgebra::from_spec(spec)
}

/// Canonical serialization: compact JSON, keys in declaration order,
/// trailing newline.
pub fn dump_algebra(algebra: &FiniteAlgebra) -> String {
    let mut s = serde_json::to_string(&algebra.to_spec()).expect("spec serializes");
    s.push('\n');
    s
}

/// Least subuniverse containing `seed` and the constants.
pub fn subuniverse_closure(algebra: &FiniteAlgebra, seed: &[Element]) -> Vec<Element> {
    subuniverse_closure_in(algebra, seed, Fragment::Full)
}

pub fn subuniverse_closure_in(algebra: &FiniteAlgebra, seed: &[Element], fragment: Fragment) -> Vec<Element> {
    let mut member = vec![false; algebra.size()];
    let mut list = Vec::new();
    close_into(
        algebra,
        &mut member,
        &mut list,
        seed.iter().copied().chain([algebra.zero(), algebra.one()]),
        fragment,
    );
    list.sort_unstable();
    list
}

// Worklist closure: each newly added element is combined with everything
// already present.
fn close_into(
    algebra: &FiniteAlgebra,
    member: &mut [bool],
    list: &mut Vec<Element>,
    new: impl IntoIterator<Item = Element>,
    fragment: Fragment,
) {
    let start = list.len();
    for e in new {
        if !member[e] {
            member[e] = true;
            list.push(e);
        }
    }
    let mut i = start.min(list.len());
    // Elements before `start` are already closed among themselves.
    while i < list.len() {
        let x = list[i];
        if fragment == Fragment::Full {
            for y in [algebra.star(x), algebra.quote(x)] {
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
        }
        let mut j = 0;
        while j <= i {
            let y = list[j];
            for z in [algebra.join(x, y), algebra.meet(x, y)] {
                if !member[z] {
                    member[z] = true;
                    list.push(z);
                }
            }
            j += 1;
        }
        i += 1;
    }
}

/// All subuniverses, sorted by size then lexicographically.
pub fn enumerate_subalgebras(algebra: &FiniteAlgebra, limits: &Limits) -> Result<Vec<Vec<Element>>> {
    enumerate_subalgebras_in(algebra, Fragment::Full, limits)
}

pub fn enumerate_subalgebras_in(algebra: &FiniteAlgebra, fragment: Fragment, limits: &Limits) -> Result<Vec<Vec<Element>>> {
    let n = algebra.size();
    guard("subalgebra enumeration", n as u128, limits.subalgebra_elements as u128)?;
    let mut found: BTreeSet<Vec<Element>> = BTreeSet::new();
    if n <= 16 {
        for mask in 0u32..(1u32 << n) {
            let seed: Vec<Element> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            found.insert(subuniverse_closure_in(algebra, &seed, fragment));
        }
    } else {
        // One-point extensions reach every subuniverse from the least one.
        let bottom = subuniverse_closure_in(algebra, &[], fragment);
        let mut queue = vec![bottom.clone()];
        found.insert(bottom);
        while let Some(s) = queue.pop() {
            let mut member = vec![false; n];
            for &e in &s {
                member[e] = true;
            }
            for e in 0..n {
                if member[e] {
                    continue;
                }
                let mut m = member.clone();
                let mut list = s.clone();
                close_into(algebra, &mut m, &mut list, [e], fragment);
                list.sort_unstable();
                if found.insert(list.clone()) {
                    queue.push(list);
                }
            }
        }
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Mixed-radix indexing for direct products; the first factor is the most
/// significant coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductShape {
    sizes: Vec<usize>,
}

impl ProductShape {
    pub fn new(sizes: Vec<usize>) -> Self {
        ProductShape { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, coords: &[Element]) -> Element {
        coords.iter().zip(&self.sizes).fold(0, |acc, (&c, &s)| acc * s + c)
    }

    pub fn coords(&self, mut index: Element) -> Vec<Element> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = index % s;
            index /= s;
        }
        out
    }

    /// The map sending each product element to its `i`th coordinate.
    pub fn projection(&self, i: usize) -> Vec<Element> {
        (0..self.len()).map(|e| self.coords(e)[i]).collect()
    }
}

/// Componentwise direct product.
pub fn direct_product(factors: &[&FiniteAlgebra], limits: &Limits) -> Result<FiniteAlgebra> {
    if factors.is_empty() {
        return Err(Error::Invalid("direct product of an empty family".into()));
    }
    let needed = factors
        .iter()
        .try_fold(1u128, |acc, f| acc.checked_mul(f.size() as u128))
        .unwrap_or(u128::MAX);
    guard("direct product", needed, limits.product_elements)?;
    guard("operation tables", needed, limits.table_elements as u128)?;
    let shape = ProductShape::new(factors.iter().map(|f| f.size()).collect());
    let n = shape.len();
    let coords: Vec<Vec<Element>> = (0..n).map(|e| shape.coords(e)).collect();
    let lift1 = |op: &dyn Fn(&FiniteAlgebra, Element) -> Element| -> Vec<Element> {
        coords
            .iter()
            .map(|c| {
                let img: Vec<_> = factors.iter().zip(c).map(|(f, &x)| op(f, x)).collect();
                shape.index(&img)
            })
            .collect()
    };
    let star = lift1(&|f, x| f.star(x));
    let quote = lift1(&|f, x| f.quote(x));
    let mut join = Vec::with_capacity(n * n);
    let mut meet = Vec::with_capacity(n * n);
    let mut buf_j = vec![0; factors.len()];
    let mut buf_m = vec![0; factors.len()];
    for cx in &coords {
        for cy in &coords {
            for (k, f) in factors.iter().enumerate() {
                buf_j[k] = f.join(cx[k], cy[k]);
                buf_m[k] = f.meet(cx[k], cy[k]);
            }
            join.push(shape.index(&buf_j));
            meet.push(shape.index(&buf_m));
        }
    }
    let labels = coords
        .iter()
        .map(|c| {
            if factors.len() == 1 {
                factors[0].label(c[0]).to_string()
            } else {
                let parts: Vec<_> = factors.iter().zip(c).map(|(f, &x)| f.label(x)).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();
    let zero = shape.index(&factors.iter().map(|f| f.zero()).collect::<Vec<_>>());
    let one = shape.index(&factors.iter().map(|f| f.one()).collect::<Vec<_>>());
    let name = factors.iter().map(|f| wrap_name(f.name())).collect::<Vec<_>>().join("*");
    Ok(FiniteAlgebra::from_parts_unchecked(
        name, labels, join, meet, star, quote, zero, one,
    ))
}

fn wrap_name(name: &str) -> String {
    if name.contains('*') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    fn chain4_spec() -> AlgebraSpec {
        // 0 < a < b < 1 with a Boolean-style star that is not a pseudocomplement.
        let n = 4;
        let join = (0..n).map(|x| (0..n).map(|y| x.max(y)).collect()).collect();
        let meet = (0..n).map(|x| (0..n).map(|y| x.min(y)).collect()).collect();
        AlgebraSpec {
            name: "chain4".into(),
            size: 4,
            labels: vec!["0".into(), "a".into(), "b".into(), "1".into()],
            join,
            meet,
            star: vec![3, 2, 1, 0],
            quote: vec![3, 2, 1, 0],
            zero: 0,
            one: 3,
        }
    }

    #[test]
    fn chain_with_bogus_star_still_loads_as_a_lattice() {
        let a = FiniteAlgebra::from_spec(chain4_spec()).unwrap();
        assert_eq!(a.size(), 4);
        assert!(a.leq(1, 2));
    }

    #[test]
    fn non_commutative_join_is_rejected_with_witness() {
        let mut spec = chain4_spec();
        spec.join[0][1] = 0;
        match FiniteAlgebra::from_spec(spec).unwrap_err() {
            Error::LatticeAxiom { axiom, witness } => {
                assert_eq!(axiom, "join commutativity");
                assert_eq!(witness, vec![0, 1]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn out_of_range_entries_are_rejected() {
        let mut spec = chain4_spec();
        spec.star[2] = 9;
        assert!(matches!(
            FiniteAlgebra::from_spec(spec),
            Err(Error::OutOfRange {
                table: "star",
                value: 9,
                ..
            })
        ));
        let mut spec = chain4_spec();
        spec.meet[1].pop();
        assert!(matches!(FiniteAlgebra::from_spec(spec), Err(Error::Shape { table: "meet", .. })));
    }

    #[test]
    fn pentagon_fails_distributivity() {
        // N5: 0 < a < c < 1, 0 < b < 1, b incomparable to a and c.
        let leq = |x: usize, y: usize| -> bool { x == y || x == 0 || y == 4 || (x == 1 && y == 3) };
        let n = 5;
        let lub = |x: usize, y: usize| {
            (0..n)
                .filter(|&z| leq(x, z) && leq(y, z))
                .find(|&z| (0..n).all(|w| !(leq(x, w) && leq(y, w)) || leq(z, w)))
                .unwrap()
        };
        let glb = |x: usize, y: usize| {
            (0..n)
                .filter(|&z| leq(z, x) && leq(z, y))
                .find(|&z| (0..n).all(|w| !(leq(w, x) && leq(w, y)) || leq(w, z)))
                .unwrap()
        };
        let spec = AlgebraSpec {
            name: "N5".into(),
            size: n,
            labels: ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect(),
            join: (0..n).map(|x| (0..n).map(|y| lub(x, y)).collect()).collect(),
            meet: (0..n).map(|x| (0..n).map(|y| glb(x, y)).collect()).collect(),
            star: vec![4, 0, 0, 0, 0],
            quote: vec![4, 0, 0, 0, 0],
            zero: 0,
            one: 4,
        };
        match FiniteAlgebra::from_spec(spec).unwrap_err() {
            Error::LatticeAxiom { axiom, .. } => assert_eq!(axiom, "distributivity"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn closure_examples() {
        let d = builtin("4_dmba").unwrap();
        assert_eq!(subuniverse_closure(&d, &[]), vec![0, 3]);
        let a = d.element("a").unwrap();
        assert_eq!(subuniverse_closure(&d, &[a]), vec![0, 1, 2, 3]);
        let s = builtin("3_dblst").unwrap();
        assert_eq!(subuniverse_closure(&s, &[1]), vec![0, 1, 2]);
    }

    #[test]
    fn subalgebra_examples() {
        let l = Limits::default();
        assert_eq!(enumerate_subalgebras(&builtin("2").unwrap(), &l).unwrap(), vec![vec![0, 1]]);
        assert_eq!(
            enumerate_subalgebras(&builtin("4_dmba").unwrap(), &l).unwrap(),
            vec![vec![0, 3], vec![0, 1, 2, 3]]
        );
        assert_eq!(
            enumerate_subalgebras(&builtin("3_klst").unwrap(), &l).unwrap(),
            vec![vec![0, 2], vec![0, 1, 2]]
        );
    }

    #[test]
    fn bfs_and_subset_enumeration_agree() {
        let k = builtin("3_klst").unwrap();
        let t = builtin("2").unwrap();
        let p = direct_product(&[&k, &k, &t], &Limits::default()).unwrap();
        assert_eq!(p.size(), 18);
        let bfs = enumerate_subalgebras(&p, &Limits::default()).unwrap();
        // Brute force over all 2^18 seeds is too slow here; instead close
        // every seed of size <= 2 and confirm those all show up.
        let set: BTreeSet<_> = bfs.iter().cloned().collect();
        for x in 0..p.size() {
            for y in x..p.size() {
                assert!(set.contains(&subuniverse_closure(&p, &[x, y])));
            }
        }
        for s in &bfs {
            assert_eq!(&subuniverse_closure(&p, s), s);
        }
    }

    #[test]
    fn product_shape_round_trips() {
        let shape = ProductShape::new(vec![3, 2, 4]);
        for i in 0..shape.len() {
            assert_eq!(shape.index(&shape.coords(i)), i);
        }
        assert_eq!(shape.coords(23), vec![2, 1, 3]);
    }

    #[test]
    fn product_sizes_and_labels() {
        let l = Limits::default();
        let d = builtin("3_dblst").unwrap();
        let k = builtin("3_klst").unwrap();
        let p = direct_product(&[&d, &k], &l).unwrap();
        assert_eq!(p.size(), 9);
        assert_eq!(p.name(), "3_dblst*3_klst");
        assert_eq!(p.label(p.element("(a,1)").unwrap()), "(a,1)");
        assert_eq!(p.label(p.zero()), "(0,0)");
        let single = direct_product(&[&d], &l).unwrap();
        assert_eq!(single.to_spec().join, d.to_spec().join);
    }

    #[test]
    fn product_cap_is_enforced() {
        let l = Limits {
            product_elements: 10,
            ..Limits::default()
        };
        let d = builtin("3_dblst").unwrap();
        assert!(matches!(
            direct_product(&[&d, &d, &d], &l),
            Err(Error::CapExceeded { needed: 27, cap: 10, .. })
        ));
    }

    #[test]
    fn subalgebra_rejects_unclosed_sets() {
        let d = builtin("4_dmba").unwrap();
        assert!(d.subalgebra(&[0, 1, 3]).is_err());
        let two = d.subalgebra(&[0, 3]).unwrap();
        assert_eq!(two.size(), 2);
        assert_eq!(two.star(two.zero()), two.one());
    }
}
