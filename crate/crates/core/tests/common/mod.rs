//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the search code it is used to check.

#![allow(dead_code)]

use agkit_core::{Element, FiniteAlgebra};

/// Whether `map` preserves every operation and constant.
pub fn is_hom(s: &FiniteAlgebra, t: &FiniteAlgebra, map: &[Element]) -> bool {
    if map[s.zero()] != t.zero() || map[s.one()] != t.one() {
        return false;
    }
    for x in s.elements() {
        if map[s.star(x)] != t.star(map[x]) || map[s.quote(x)] != t.quote(map[x]) {
            return false;
        }
        for y in s.elements() {
            if map[s.join(x, y)] != t.join(map[x], map[y]) || map[s.meet(x, y)] != t.meet(map[x], map[y]) {
                return false;
            }
        }
    }
    true
}

/// Every map `s → t` that is a homomorphism, by scanning all `|t|^|s|` maps.
pub fn all_homs(s: &FiniteAlgebra, t: &FiniteAlgebra) -> Vec<Vec<Element>> {
    let (n, m) = (s.size(), t.size());
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut map = vec![0; n];
            for slot in map.iter_mut().rev() {
                *slot = code % m;
                code /= m;
            }
            map
        })
        .filter(|map| is_hom(s, t, map))
        .collect()
}

/// All set partitions of `0..n` as block labels (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(i + 1, n, cur, max.max(b), out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    go(1, n, &mut cur, 0, &mut out);
    out
}

/// Whether the partition given by block labels is a congruence.
pub fn is_congruence(a: &FiniteAlgebra, blocks: &[usize]) -> bool {
    for x in a.elements() {
        for y in a.elements() {
            if blocks[x] != blocks[y] {
                continue;
            }
            if blocks[a.star(x)] != blocks[a.star(y)] || blocks[a.quote(x)] != blocks[a.quote(y)] {
                return false;
            }
            for z in a.elements() {
                if blocks[a.join(x, z)] != blocks[a.join(y, z)] || blocks[a.meet(x, z)] != blocks[a.meet(y, z)] {
                    return false;
                }
            }
        }
    }
    true
}

/// The least congruence relating `x` and `y`, found as the congruence
/// containing the pair with the most blocks (congruences containing a pair
/// are closed under meets, so the least one is unique).
pub fn least_congruence_with(a: &FiniteAlgebra, x: Element, y: Element) -> Vec<usize> {
    all_partitions(a.size())
        .into_iter()
        .filter(|p| p[x] == p[y] && is_congruence(a, p))
        .max_by_key(|p| p.iter().max().copied().unwrap_or(0))
        .expect("the full relation is a congruence")
}
