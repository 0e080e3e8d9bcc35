use agkit_core::builtins::Catalog;
use agkit_core::term::{holds_in, parse_sentence};
use agkit_core::variety::{generated_subvariety, identity_holds, lemma_registry, VarietyDescriptor};
use agkit_core::{direct_product, Builtin, FiniteAlgebra};

fn products(max: usize) -> Vec<Vec<Builtin>> {
    let mut out: Vec<Vec<Builtin>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max {
        out = out
            .into_iter()
            .flat_map(|p| {
                let from = p.last().map_or(0, |b: &Builtin| b.ordinal());
                Builtin::ALL[from..].iter().map(move |&b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
        all.extend(out.iter().cloned());
    }
    all
}

fn build(c: &Catalog, factors: &[Builtin]) -> FiniteAlgebra {
    let algs: Vec<&FiniteAlgebra> = factors.iter().map(|&b| c.get(b)).collect();
    direct_product(&algs, c.limits()).unwrap()
}

#[test]
fn generated_variety_paths_agree_on_small_products() {
    let c = Catalog::default();
    let all = products(3);
    assert_eq!(all.len(), 34);
    for factors in all {
        let p = build(&c, &factors);
        let g = generated_subvariety(&c, &p).unwrap();
        assert!(g.agree(), "{}: {:?}", p.name(), g);
        // Products of SIs generate the join of their varieties.
        let mask = factors.iter().fold(1u8, |m, b| m | 1 << b.ordinal());
        assert_eq!(VarietyDescriptor::from_mask(mask).unwrap().name, g.by_base, "{}", p.name());
    }
}

#[test]
fn identities_agree_with_a_generating_product() {
    // The product of all SIs of a variety generates it, so an identity
    // holds in the variety exactly when it holds in that product.
    let c = Catalog::default();
    let mut sentences: Vec<_> = ["x \\/ x* = 1", "x* = x'", "x'' = x", "x*'' = x*", "x*' = x**", "x \\/ x' = 1"]
        .iter()
        .map(|s| parse_sentence(s).unwrap())
        .collect();
    for v in VarietyDescriptor::all() {
        sentences.extend(v.base_sentences().iter().cloned());
    }
    sentences.extend(
        lemma_registry()
            .into_iter()
            .filter(|r| r.sentence.vars().len() <= 2)
            .map(|r| r.sentence.without_premises()),
    );
    for v in VarietyDescriptor::all() {
        let p = build(&c, &v.si);
        for s in &sentences {
            if p.size().pow(s.vars().len() as u32) > 1_000_000 {
                continue;
            }
            assert_eq!(
                identity_holds(&c, &v, s).unwrap().holds,
                holds_in(&p, s, c.limits()).unwrap().holds,
                "{} on {s}",
                v.name
            );
        }
    }
}
