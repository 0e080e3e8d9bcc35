//! Deciding amalgamability of finite diagrams inside a variety.
//!
//! Take a diagram `B ← A → C` of embeddings `f`, `g`. Collect every pair
//! `(h: B → S, k: C → S)` with `S` an SI of the variety and `h∘f = k∘g`.
//! The diagram has an amalgam iff these pairs separate all points of `B`
//! (through `h`) and all points of `C` (through `k`). Then the product of
//! the targets of a separating family is an amalgam, with `f₁` and `g₁`
//! the tupled maps. Any amalgam restricts to a finite subdirect product of
//! SIs, whose projections give such a family.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{direct_product, enumerate_subalgebras, Element, FiniteAlgebra, ProductShape};
use crate::builtins::{Builtin, Catalog};
use crate::congruence::{cep_instance, classify};
use crate::error::{Error, Result};
use crate::limits::guard;
use crate::morphism::{enumerate_embeddings, enumerate_homs, preservation_failure, tuple_map, Homomorphism};
use crate::variety::{base_failure, check_almost_gautama, lemma_registry, quasi_identity_holds, VarietyDescriptor, VarietyName};

/// `B ← A → C` with both legs embeddings.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub base: FiniteAlgebra,
    pub left: FiniteAlgebra,
    pub right: FiniteAlgebra,
    pub f: Homomorphism,
    pub g: Homomorphism,
}

impl Diagram {
    pub fn new(base: FiniteAlgebra, left: FiniteAlgebra, right: FiniteAlgebra, f: Vec<Element>, g: Vec<Element>) -> Result<Self> {
        let f = Homomorphism::new(&base, &left, f)?;
        let g = Homomorphism::new(&base, &right, g)?;
        for (name, h) in [("f", &f), ("g", &g)] {
            if !h.is_injective() {
                return Err(Error::Invalid(format!("{name} is not injective")));
            }
        }
        Ok(Diagram { base, left, right, f, g })
    }

    /// Every diagram over the given algebras, one per pair of embeddings.
    pub fn all(base: &FiniteAlgebra, left: &FiniteAlgebra, right: &FiniteAlgebra) -> Result<Vec<Diagram>> {
        let fs = enumerate_embeddings(base, left)?;
        let gs = enumerate_embeddings(base, right)?;
        Ok(fs
            .iter()
            .flat_map(|f| {
                gs.iter().map(move |g| Diagram {
                    base: base.clone(),
                    left: left.clone(),
                    right: right.clone(),
                    f: f.clone(),
                    g: g.clone(),
                })
            })
            .collect())
    }

    pub fn summary(&self) -> DiagramSummary {
        DiagramSummary {
            base: self.base.name().to_string(),
            left: self.left.name().to_string(),
            right: self.right.name().to_string(),
            f: self.f.map().to_vec(),
            g: self.g.map().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramSummary {
    pub base: String,
    pub left: String,
    pub right: String,
    pub f: Vec<Element>,
    pub g: Vec<Element>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Left,
    Right,
}

/// Per SI: homomorphisms out of each side, and compatible pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCensus {
    pub si: Builtin,
    pub left_homs: usize,
    pub right_homs: usize,
    pub compatible_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmalgamationResult {
    /// `D` is the product of `factors`; `f1[i]` and `g1[i]` are the
    /// component maps into factor `i`.
    Amalgam {
        factors: Vec<Builtin>,
        f1: Vec<Vec<Element>>,
        g1: Vec<Vec<Element>>,
    },
    /// No compatible pair separates `pair` on `side`.
    Obstruction {
        side: Side,
        pair: (Element, Element),
        labels: (String, String),
        hom_census: Vec<HomCensus>,
    },
}

impl AmalgamationResult {
    pub fn is_amalgam(&self) -> bool {
        matches!(self, AmalgamationResult::Amalgam { .. })
    }
}

/// Rejects algebras outside the variety, naming the failing base sentence.
pub fn check_member(catalog: &Catalog, v: &VarietyDescriptor, algebra: &FiniteAlgebra) -> Result<()> {
    check_almost_gautama(algebra, catalog.limits())?;
    if let Some((sentence, witness)) = base_failure(algebra, v, catalog.limits())? {
        return Err(Error::NotInVariety {
            algebra: algebra.name().to_string(),
            variety: v.name.to_string(),
            sentence,
            witness,
        });
    }
    Ok(())
}

struct Pair {
    si: Builtin,
    h: Vec<Element>,
    k: Vec<Element>,
}

fn compatible_pairs(catalog: &Catalog, v: &VarietyDescriptor, d: &Diagram) -> Result<(Vec<Pair>, Vec<HomCensus>)> {
    let mut pairs = Vec::new();
    let mut census = Vec::new();
    for &si in &v.si {
        let s = catalog.get(si);
        let hs = enumerate_homs(&d.left, s, None)?;
        let ks = enumerate_homs(&d.right, s, None)?;
        let before = pairs.len();
        for h in &hs {
            for k in &ks {
                let commutes = d.base.elements().all(|a| h.apply(d.f.apply(a)) == k.apply(d.g.apply(a)));
                if commutes {
                    pairs.push(Pair {
                        si,
                        h: h.map().to_vec(),
                        k: k.map().to_vec(),
                    });
                }
            }
        }
        census.push(HomCensus {
            si,
            left_homs: hs.len(),
            right_homs: ks.len(),
            compatible_pairs: pairs.len() - before,
        });
    }
    Ok((pairs, census))
}

fn point_pairs(n: usize) -> impl Iterator<Item = (Element, Element)> {
    (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
}

pub fn decide_amalgamation(catalog: &Catalog, v: &VarietyDescriptor, d: &Diagram) -> Result<AmalgamationResult> {
    check_member(catalog, v, &d.left)?;
    check_member(catalog, v, &d.right)?;
    let (pairs, census) = compatible_pairs(catalog, v, d)?;

    // Factors are chosen in the order pairs of points need them; a pair
    // already told apart by a chosen factor needs nothing new.
    let mut chosen: Vec<usize> = Vec::new();
    for side in [Side::Left, Side::Right] {
        let (alg, pick): (&FiniteAlgebra, fn(&Pair) -> &Vec<Element>) = match side {
            Side::Left => (&d.left, |p| &p.h),
            Side::Right => (&d.right, |p| &p.k),
        };
        for (x, y) in point_pairs(alg.size()) {
            if chosen.iter().any(|&i| pick(&pairs[i])[x] != pick(&pairs[i])[y]) {
                continue;
            }
            match pairs.iter().position(|p| pick(p)[x] != pick(p)[y]) {
                Some(i) => chosen.push(i),
                None => {
                    return Ok(AmalgamationResult::Obstruction {
                        side,
                        pair: (x, y),
                        labels: (alg.label(x).to_string(), alg.label(y).to_string()),
                        hom_census: census,
                    })
                }
            }
        }
    }
    chosen.sort_unstable();
    Ok(AmalgamationResult::Amalgam {
        factors: chosen.iter().map(|&i| pairs[i].si).collect(),
        f1: chosen.iter().map(|&i| pairs[i].h.clone()).collect(),
        g1: chosen.iter().map(|&i| pairs[i].k.clone()).collect(),
    })
}

/// Re-checks a certificate without the search code: amalgams by checking
/// every component map and the commuting square (and, when `D` is small,
/// the tupled maps against the materialised product); obstructions by
/// scanning all maps from each side into each SI.
pub fn verify_result(catalog: &Catalog, v: &VarietyDescriptor, d: &Diagram, result: &AmalgamationResult) -> Result<()> {
    let fail = |why: String| Err(Error::Invalid(format!("certificate rejected: {why}")));
    match result {
        AmalgamationResult::Amalgam { factors, f1, g1 } => {
            if factors.is_empty() || factors.len() != f1.len() || factors.len() != g1.len() {
                return fail("factor lists disagree".into());
            }
            for (i, si) in factors.iter().enumerate() {
                if !v.contains(*si) {
                    return fail(format!("factor {si} is not an SI of {}", v.name));
                }
                let s = catalog.get(*si);
                if let Some(why) = preservation_failure(&d.left, s, &f1[i]) {
                    return fail(format!("f1 component {i}: {why}"));
                }
                if let Some(why) = preservation_failure(&d.right, s, &g1[i]) {
                    return fail(format!("g1 component {i}: {why}"));
                }
                if d.base.elements().any(|a| f1[i][d.f.apply(a)] != g1[i][d.g.apply(a)]) {
                    return fail(format!("square does not commute in component {i}"));
                }
            }
            for (name, alg, maps) in [("f1", &d.left, f1), ("g1", &d.right, g1)] {
                if let Some((x, y)) = point_pairs(alg.size()).find(|&(x, y)| maps.iter().all(|m| m[x] == m[y])) {
                    return fail(format!("{name} identifies {} and {}", alg.label(x), alg.label(y)));
                }
            }
            let sizes: Vec<usize> = factors.iter().map(|s| catalog.get(*s).size()).collect();
            let size: u128 = sizes.iter().map(|&s| s as u128).product();
            if size <= catalog.limits().table_elements as u128 {
                let algs: Vec<&FiniteAlgebra> = factors.iter().map(|s| catalog.get(*s)).collect();
                let dd = direct_product(&algs, catalog.limits())?;
                let shape = ProductShape::new(sizes);
                for (name, alg, maps) in [("f1", &d.left, f1), ("g1", &d.right, g1)] {
                    let homs: Vec<Homomorphism> = maps
                        .iter()
                        .zip(&algs)
                        .map(|(m, s)| Homomorphism::new(alg, s, m.clone()))
                        .collect::<Result<_>>()?;
                    let refs: Vec<&Homomorphism> = homs.iter().collect();
                    let tupled = tuple_map(&refs, &shape);
                    if let Some(why) = preservation_failure(alg, &dd, &tupled) {
                        return fail(format!("{name} into D: {why}"));
                    }
                }
            }
            Ok(())
        }
        AmalgamationResult::Obstruction { side, pair: (x, y), .. } => {
            for &si in &v.si {
                let s = catalog.get(si);
                let hs = all_homs_by_brute_force(&d.left, s, catalog)?;
                let ks = all_homs_by_brute_force(&d.right, s, catalog)?;
                for h in &hs {
                    for k in &ks {
                        if d.base.elements().any(|a| h[d.f.apply(a)] != k[d.g.apply(a)]) {
                            continue;
                        }
                        let m = if *side == Side::Left { h } else { k };
                        if m[*x] != m[*y] {
                            return fail(format!("a pair into {si} separates the reported points"));
                        }
                    }
                }
            }
            Ok(())
        }
    }
}

/// Every map `source → target`, kept when it is a homomorphism.
fn all_homs_by_brute_force(source: &FiniteAlgebra, target: &FiniteAlgebra, catalog: &Catalog) -> Result<Vec<Vec<Element>>> {
    let n = source.size();
    let m = target.size();
    let count = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    guard("brute-force map scan", count, catalog.limits().assignments)?;
    let mut out = Vec::new();
    let mut map = vec![0; n];
    loop {
        if preservation_failure(source, target, &map).is_none() {
            out.push(map.clone());
        }
        // Odometer increment, last position fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramResult {
    pub diagram: DiagramSummary,
    pub result: AmalgamationResult,
    pub verified: bool,
    /// For obstructions: a registered contradiction valid in the variety
    /// that covers the same pair of SIs.
    pub contradiction_record: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApReport {
    pub variety: VarietyName,
    pub has_ap: bool,
    pub hereditarily_si: bool,
    pub cep_spot_checks: bool,
    pub cep_instances: usize,
    pub certificates_verified: bool,
    pub diagrams: Vec<DiagramResult>,
}

impl ApReport {
    pub fn obstructions(&self) -> impl Iterator<Item = &DiagramResult> {
        self.diagrams.iter().filter(|d| !d.result.is_amalgam())
    }
}

/// Whether every subalgebra of every SI of `v` is SI.
pub fn hereditarily_si(catalog: &Catalog, v: &VarietyDescriptor) -> Result<bool> {
    for &si in &v.si {
        let s = catalog.get(si);
        for sub in enumerate_subalgebras(s, catalog.limits())? {
            if !classify(&s.subalgebra(&sub)?, catalog.limits())?.subdirectly_irreducible {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// CEP on every embedding of an SI into an SI or a product of two SIs.
/// Returns whether all hold and how many embeddings were checked.
pub fn cep_spot_checks(catalog: &Catalog, v: &VarietyDescriptor) -> Result<(bool, usize)> {
    let limits = catalog.limits();
    let mut hosts: Vec<FiniteAlgebra> = v.si.iter().map(|&s| catalog.get(s).clone()).collect();
    for (i, &s) in v.si.iter().enumerate() {
        for &t in &v.si[i..] {
            hosts.push(direct_product(&[catalog.get(s), catalog.get(t)], limits)?);
        }
    }
    let mut ok = true;
    let mut count = 0;
    for &si in &v.si {
        let sub = catalog.get(si);
        for host in &hosts {
            for e in enumerate_embeddings(sub, host)? {
                count += 1;
                ok &= cep_instance(sub, host, e.map(), limits)?.holds;
            }
        }
    }
    Ok((ok, count))
}

fn contradiction_for(catalog: &Catalog, v: &VarietyDescriptor, left: &str, right: &str) -> Result<Option<String>> {
    for r in lemma_registry() {
        let Some((l, rr)) = r.diagram else { continue };
        let names = [l.name(), rr.name()];
        if names.contains(&left) && names.contains(&right) && quasi_identity_holds(catalog, v, &r.sentence)?.holds {
            return Ok(Some(r.id));
        }
    }
    Ok(None)
}

/// Decides every diagram of SIs of `v` over every pair of embeddings, after
/// checking that the SIs are hereditarily SI and spot-checking CEP.
pub fn classify_ap(catalog: &Catalog, v: &VarietyDescriptor) -> Result<ApReport> {
    let hsi = hereditarily_si(catalog, v)?;
    let (cep, cep_instances) = cep_spot_checks(catalog, v)?;
    let mut diagrams = Vec::new();
    for &a in &v.si {
        for &b in &v.si {
            for &c in &v.si {
                diagrams.extend(Diagram::all(catalog.get(a), catalog.get(b), catalog.get(c))?);
            }
        }
    }
    let results = diagrams
        .par_iter()
        .map(|d| {
            let result = decide_amalgamation(catalog, v, d)?;
            let verified = verify_result(catalog, v, d, &result).is_ok();
            let contradiction_record = if result.is_amalgam() {
                None
            } else {
                contradiction_for(catalog, v, d.left.name(), d.right.name())?
            };
            Ok(DiagramResult {
                diagram: d.summary(),
                result,
                verified,
                contradiction_record,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApReport {
        variety: v.name,
        has_ap: results.iter().all(|r| r.result.is_amalgam()),
        hereditarily_si: hsi,
        cep_spot_checks: cep,
        cep_instances,
        certificates_verified: results.iter().all(|r| r.verified),
        diagrams: results,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointEmbedding {
    pub left: Builtin,
    pub right: Builtin,
    pub jointly_embeddable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApplicationsReport {
    pub variety: VarietyName,
    pub has_ap: bool,
    pub cep: bool,
    /// Transferability: AP together with CEP.
    pub tp: bool,
    /// Residual smallness; the SIs here are finite in number and size.
    pub rs: bool,
    /// Enough injectives: TP together with residual smallness.
    pub ei: bool,
    /// Distinct SI pairs, amalgamated over 2 (which embeds everywhere).
    pub jep_on_si_pairs: Vec<JointEmbedding>,
    /// Locally finite, finite language and AP.
    pub model_companion: bool,
    /// False when some diagram of SIs over 2 is obstructed. True means no
    /// such diagram was found, which proves membership only when the
    /// variety has AP.
    pub two_in_amal: bool,
}

pub fn applications(catalog: &Catalog, v: &VarietyDescriptor) -> Result<ApplicationsReport> {
    applications_from(catalog, v, &classify_ap(catalog, v)?)
}

/// As [`applications`], reusing a finished AP classification of `v`.
pub fn applications_from(catalog: &Catalog, v: &VarietyDescriptor, ap: &ApReport) -> Result<ApplicationsReport> {
    let cep = ap.cep_spot_checks;
    let tp = ap.has_ap && cep;
    let rs = true;
    let two = catalog.get(Builtin::Two);
    let mut jep = Vec::new();
    for (i, &s) in v.si.iter().enumerate() {
        for &t in &v.si[i + 1..] {
            let ok = Diagram::all(two, catalog.get(s), catalog.get(t))?
                .iter()
                .map(|d| decide_amalgamation(catalog, v, d).map(|r| r.is_amalgam()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            jep.push(JointEmbedding {
                left: s,
                right: t,
                jointly_embeddable: ok,
            });
        }
    }
    let two_in_amal = !ap.obstructions().any(|d| d.diagram.base == Builtin::Two.name());
    Ok(ApplicationsReport {
        variety: v.name,
        has_ap: ap.has_ap,
        cep,
        tp,
        rs,
        ei: tp && rs,
        jep_on_si_pairs: jep,
        model_companion: ap.has_ap,
        two_in_amal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    pub diagram: DiagramSummary,
    pub result: AmalgamationResult,
}

/// Looks for a diagram over `base` with SI legs that has no amalgam. None
/// means no refutation was found, not that `base` is an amalgamation base.
pub fn refute_amal_base(catalog: &Catalog, v: &VarietyDescriptor, base: &FiniteAlgebra) -> Result<Option<Refutation>> {
    check_member(catalog, v, base)?;
    for (i, &b) in v.si.iter().enumerate() {
        for &c in &v.si[i..] {
            for d in Diagram::all(base, catalog.get(b), catalog.get(c))? {
                let result = decide_amalgamation(catalog, v, &d)?;
                if !result.is_amalgam() {
                    return Ok(Some(Refutation {
                        diagram: d.summary(),
                        result,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::variety::variety;

    fn diagram(a: &str, b: &str, c: &str) -> Diagram {
        Diagram::all(&builtin(a).unwrap(), &builtin(b).unwrap(), &builtin(c).unwrap())
            .unwrap()
            .remove(0)
    }

    fn decide(v: &str, d: &Diagram) -> AmalgamationResult {
        decide_amalgamation(&Catalog::default(), &variety(v).unwrap(), d).unwrap()
    }

    #[test]
    fn gautama_obstruction() {
        let d = diagram("2", "3_dblst", "3_klst");
        let r = decide("G", &d);
        match &r {
            AmalgamationResult::Obstruction {
                side, pair, hom_census, ..
            } => {
                assert_eq!(*side, Side::Left);
                assert_eq!(*pair, (0, 1));
                assert!(hom_census.iter().all(|c| c.compatible_pairs == 0));
            }
            other => panic!("{other:?}"),
        }
        assert!(verify_result(&Catalog::default(), &variety("G").unwrap(), &d, &r).is_ok());
    }

    #[test]
    fn regular_double_stone_amalgam() {
        let d = diagram("2", "3_dblst", "3_dblst");
        let r = decide("RDBLST", &d);
        match &r {
            AmalgamationResult::Amalgam { factors, f1, g1 } => {
                assert_eq!(factors, &vec![Builtin::ThreeDblst]);
                assert_eq!(f1, &vec![vec![0, 1, 2]]);
                assert_eq!(g1, &vec![vec![0, 1, 2]]);
            }
            other => panic!("{other:?}"),
        }
        assert!(verify_result(&Catalog::default(), &variety("RDBLST").unwrap(), &d, &r).is_ok());
    }

    #[test]
    fn identity_diagram_needs_one_factor() {
        let m = builtin("4_dmba").unwrap();
        let id = Homomorphism::identity(&m).map().to_vec();
        let d = Diagram::new(m.clone(), m.clone(), m, id.clone(), id).unwrap();
        match decide("DMBA", &d) {
            AmalgamationResult::Amalgam { factors, .. } => assert_eq!(factors.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn known_obstructions() {
        for (v, b, c) in [
            ("V_DBLST_DMBA", "3_dblst", "4_dmba"),
            ("V_KLST_DMBA", "3_klst", "4_dmba"),
            ("AG", "3_dblst", "4_dmba"),
            ("AG", "3_klst", "4_dmba"),
        ] {
            let d = diagram("2", b, c);
            let r = decide(v, &d);
            assert!(!r.is_amalgam(), "{v} {b} {c}");
            assert!(verify_result(&Catalog::default(), &variety(v).unwrap(), &d, &r).is_ok());
        }
    }

    #[test]
    fn forged_certificates_are_rejected() {
        let c = Catalog::default();
        let v = variety("G").unwrap();
        let d = diagram("2", "3_dblst", "3_dblst");
        let forged = AmalgamationResult::Amalgam {
            factors: vec![Builtin::Two],
            f1: vec![vec![0, 0, 1]],
            g1: vec![vec![0, 0, 1]],
        };
        assert!(verify_result(&c, &v, &d, &forged).is_err());
        let forged = AmalgamationResult::Obstruction {
            side: Side::Left,
            pair: (0, 1),
            labels: ("0".into(), "a".into()),
            hom_census: vec![],
        };
        assert!(verify_result(&c, &v, &d, &forged).is_err());
    }

    #[test]
    fn members_are_checked() {
        let d = diagram("2", "3_dblst", "3_klst");
        let e = decide_amalgamation(&Catalog::default(), &variety("RDBLST").unwrap(), &d).unwrap_err();
        assert!(matches!(e, Error::NotInVariety { .. }));
    }

    #[test]
    fn classification_of_small_varieties() {
        let c = Catalog::default();
        let ba = classify_ap(&c, &variety("BA").unwrap()).unwrap();
        assert!(ba.has_ap && ba.hereditarily_si && ba.cep_spot_checks && ba.certificates_verified);
        let g = classify_ap(&c, &variety("G").unwrap()).unwrap();
        assert!(!g.has_ap);
        assert!(g.obstructions().all(|o| o.contradiction_record.is_some()));
        assert!(classify_ap(&c, &variety("DMBA").unwrap()).unwrap().has_ap);
    }

    #[test]
    fn applications_and_amalgamation_bases() {
        let c = Catalog::default();
        let app = applications(&c, &variety("RKLST").unwrap()).unwrap();
        assert!(app.tp && app.ei && app.two_in_amal);
        let g = applications(&c, &variety("G").unwrap()).unwrap();
        let pair = g
            .jep_on_si_pairs
            .iter()
            .find(|j| j.left == Builtin::ThreeDblst && j.right == Builtin::ThreeKlst)
            .unwrap();
        assert!(!pair.jointly_embeddable);
        assert!(!g.two_in_amal);
        let two = builtin("2").unwrap();
        let r = refute_amal_base(&c, &variety("G").unwrap(), &two).unwrap().unwrap();
        assert_eq!((r.diagram.left.as_str(), r.diagram.right.as_str()), ("3_dblst", "3_klst"));
        assert!(refute_amal_base(&c, &variety("BA").unwrap(), &two).unwrap().is_none());
        let r = refute_amal_base(&c, &variety("AG").unwrap(), &two).unwrap().unwrap();
        assert_eq!(r.diagram.left, "3_dblst");
    }
}
