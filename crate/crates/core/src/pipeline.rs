//! The full verification run: every check the workbench knows, compared
//! with the shipped expectations, as one report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::algebra::{direct_product, FiniteAlgebra, Fragment};
use crate::amalgamation::{applications_from, classify_ap, decide_amalgamation, refute_amal_base, verify_result, Diagram};
use crate::axioms::{satisfies_axiom_system, AxiomSystem, SystemName};
use crate::builtins::{Builtin, Catalog};
use crate::congruence::{check_sc, classify};
use crate::error::{Error, Result};
use crate::report::{Record, Report};
use crate::term::{holds_in, parse_sentence};
use crate::variety::{discriminator_is_term_op_in, lemma_suite, verify_bases, VarietyDescriptor, VarietyName};

pub const EXPECTATIONS_TEXT: &str = include_str!("../data/expectations.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct DiagramExpectation {
    pub variety: VarietyName,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub version: u32,
    pub ap: BTreeMap<VarietyName, bool>,
    #[serde(default)]
    pub obstruction: Vec<DiagramExpectation>,
    #[serde(default)]
    pub jep_failure: Vec<DiagramExpectation>,
}

impl Expectations {
    pub fn has_ap(&self, v: VarietyName) -> Result<bool> {
        self.ap
            .get(&v)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("no AP expectation for {v}")))
    }
}

pub fn parse_expectations(text: &str) -> Result<Expectations> {
    let e: Expectations = toml::from_str(text).map_err(|e| Error::Invalid(format!("expectations: {e}")))?;
    if e.version != 1 {
        return Err(Error::Invalid(format!("expectations version {} is not supported", e.version)));
    }
    if let Some(v) = VarietyName::ALL.iter().find(|v| !e.ap.contains_key(v)) {
        return Err(Error::Invalid(format!("expectations: no AP entry for {v}")));
    }
    Ok(e)
}

pub fn expectations() -> Expectations {
    parse_expectations(EXPECTATIONS_TEXT).expect("shipped expectations parse")
}

/// Runs everything with the shipped expectations.
pub fn verify_all(catalog: &Catalog) -> Report {
    Report::new(
        vec!["agkit".into(), "verify-paper".into()],
        verification_records(catalog, &expectations()),
    )
}

fn sentence_record(id: String, label: &str, alg: &FiniteAlgebra, text: &str, expected: bool, catalog: &Catalog) -> Record {
    let run = || -> Result<(bool, String)> {
        let v = holds_in(alg, &parse_sentence(text)?, catalog.limits())?;
        Ok((v.holds, v.describe_witness(alg)))
    };
    match run() {
        Ok((holds, witness)) => Record::expect(
            id,
            format!("{label} on {}", alg.name()),
            expected,
            holds,
            json!({"sentence": text, "witness": witness}),
        ),
        Err(e) => Record::error(id, label, expected, &e),
    }
}

pub fn verification_records(catalog: &Catalog, exp: &Expectations) -> Vec<Record> {
    let limits = catalog.limits();
    let mut records = Vec::new();

    // Axioms and the two star-regularity identities.
    let ag = AxiomSystem::get(SystemName::AlmostGautama);
    for b in Builtin::ALL {
        let alg = catalog.get(b);
        records.push(match satisfies_axiom_system(alg, &ag, limits) {
            Ok(r) => Record::expect(
                format!("axioms/{b}"),
                format!("{b} satisfies the Almost Gautama axioms"),
                true,
                r.holds,
                r.first_failure()
                    .map(|c| json!({"axiom": c.axiom, "sentence": c.sentence, "witness": c.witness})),
            ),
            Err(e) => Record::error(format!("axioms/{b}"), "Almost Gautama axioms", true, &e),
        });
        records.push(sentence_record(
            format!("star-regular/{b}"),
            "x*' = x**",
            alg,
            "x*' = x**",
            b != Builtin::FourDmba,
            catalog,
        ));
        records.push(sentence_record(
            format!("weak-star-regular/{b}"),
            "x*'' = x*",
            alg,
            "x*'' = x*",
            true,
            catalog,
        ));
    }
    let dblst = catalog.get(Builtin::ThreeDblst);
    records.push(sentence_record(
        "regular/3_dblst".into(),
        "x /\\ x' <= y \\/ y*",
        dblst,
        "x /\\ x' <= y \\/ y*",
        true,
        catalog,
    ));
    records.push(sentence_record(
        "regular-1/3_dblst".into(),
        "x /\\ x'*' <= y \\/ y*",
        dblst,
        "x /\\ x'*' <= y \\/ y*",
        true,
        catalog,
    ));

    // Simple, SI, DI and the complement condition, on builtins and on
    // products of two distinct builtins.
    let si_record = |id: String, alg: &FiniteAlgebra, expected: bool| match classify(alg, limits) {
        Ok(c) => {
            let sc = check_sc(alg);
            let observed = json!({"simple": c.simple, "si": c.subdirectly_irreducible, "di": c.directly_indecomposable, "sc": sc.sc});
            let expected = json!({"simple": expected, "si": expected, "di": expected, "sc": expected});
            Record::expect(
                id,
                format!("simple, SI, DI and SC for {}", alg.name()),
                expected,
                observed,
                json!({"congruences": c.congruence_count, "sc_witness": sc.sc_witness.map(|w| alg.label(w).to_string())}),
            )
        }
        Err(e) => Record::error(id, "SI classification", expected, &e),
    };
    for b in Builtin::ALL {
        records.push(si_record(format!("si/{b}"), catalog.get(b), true));
    }
    for (i, &b) in Builtin::ALL.iter().enumerate() {
        for &c in &Builtin::ALL[i + 1..] {
            let id = format!("si/{b}x{c}");
            records.push(match direct_product(&[catalog.get(b), catalog.get(c)], limits) {
                Ok(p) => si_record(id, &p, false),
                Err(e) => Record::error(id, "SI classification", false, &e),
            });
        }
    }

    // Base matrix.
    match verify_bases(catalog) {
        Ok(m) => records.extend(m.cells.iter().map(|c| {
            Record::expect(
                format!("base/{}/{}", c.si, c.variety),
                format!("{} satisfies the base of {}", c.si, c.variety),
                c.member,
                c.satisfied,
                &c.failure,
            )
        })),
        Err(e) => records.push(Record::error("base", "base matrix", true, &e)),
    }

    // Discriminator.
    for b in Builtin::ALL {
        let alg = catalog.get(b);
        for (suffix, fragment, expected) in [("", Fragment::Full, true), ("-lattice", Fragment::Lattice, false)] {
            let id = format!("discriminator{suffix}/{b}");
            let label = format!(
                "discriminator is a term operation of {b}{}",
                if expected { "" } else { "'s lattice reduct" }
            );
            records.push(match discriminator_is_term_op_in(alg, fragment, limits) {
                Ok(r) => Record::expect(id, label, expected, r.holds, json!({"subuniverses": r.subuniverses_checked})),
                Err(e) => Record::error(id, label, expected, &e),
            });
        }
    }

    // Lemma registry.
    match lemma_suite(catalog, None) {
        Ok(rep) => records.extend(rep.results.iter().map(|r| {
            Record::expect(
                format!("lemma/{}", r.id),
                format!("{} holds in {}", r.description, r.variety),
                r.expected,
                r.observed,
                json!({"sentence": r.sentence, "countermodel": r.countermodel}),
            )
        })),
        Err(e) => records.push(Record::error("lemma", "lemma registry", true, &e)),
    }

    // AP classification and what follows from it, one variety at a time.
    let per_variety: Vec<Vec<Record>> = VarietyName::ALL
        .par_iter()
        .map(|&name| variety_records(catalog, exp, name))
        .collect();
    records.extend(per_variety.into_iter().flatten());

    // Named diagrams over 2.
    let two = catalog.get(Builtin::Two);
    for o in &exp.obstruction {
        let id = format!("obstruction/{}/{},{}", o.variety, o.left, o.right);
        let label = format!("no amalgam for 2 -> {}, {} in {}", o.left, o.right, o.variety);
        let expected = json!({"obstructed": true, "verified": true});
        let run = || -> Result<Record> {
            let v = VarietyDescriptor::get(o.variety);
            let (b, c) = (catalog.get(o.left.parse()?), catalog.get(o.right.parse()?));
            let mut all_obstructed = true;
            let mut all_verified = true;
            let mut certs = Vec::new();
            for d in Diagram::all(two, b, c)? {
                let r = decide_amalgamation(catalog, &v, &d)?;
                all_obstructed &= !r.is_amalgam();
                all_verified &= verify_result(catalog, &v, &d, &r).is_ok();
                certs.push(r);
            }
            Ok(Record::expect(
                &id,
                &label,
                &expected,
                json!({"obstructed": all_obstructed, "verified": all_verified}),
                certs,
            ))
        };
        records.push(run().unwrap_or_else(|e| Record::error(&id, &label, &expected, &e)));
    }
    records
}

pub fn variety_records(catalog: &Catalog, exp: &Expectations, name: VarietyName) -> Vec<Record> {
    let v = VarietyDescriptor::get(name);
    let ap_expected = match exp.has_ap(name) {
        Ok(b) => b,
        Err(e) => return vec![Record::error(format!("ap/{name}"), "expectation", true, &e)],
    };
    let ap = match classify_ap(catalog, &v) {
        Ok(r) => r,
        Err(e) => {
            return vec![Record::error(
                format!("ap/{name}"),
                format!("{name} has the amalgamation property"),
                ap_expected,
                &e,
            )]
        }
    };
    let obstructions: Vec<_> = ap.obstructions().collect();
    let mut out = vec![
        Record::expect(
            format!("hsi/{name}"),
            format!("SIs of {name} are hereditarily SI"),
            true,
            ap.hereditarily_si,
            (),
        ),
        Record::expect(
            format!("cep/{name}"),
            format!("CEP on SI embeddings in {name}"),
            true,
            ap.cep_spot_checks,
            json!({"instances": ap.cep_instances}),
        ),
        Record::expect(
            format!("ap/{name}"),
            format!("{name} has the amalgamation property"),
            ap_expected,
            ap.has_ap,
            json!({"diagrams": ap.diagrams.len(), "obstructions": obstructions.iter().map(|o| &o.diagram).collect::<Vec<_>>()}),
        ),
        Record::expect(
            format!("ap-certificates/{name}"),
            format!("certificates for {name} re-verify"),
            true,
            ap.certificates_verified,
            (),
        ),
        Record::expect(
            format!("ap-contradictions/{name}"),
            format!("each obstruction in {name} has a valid contradiction record"),
            true,
            obstructions.iter().all(|o| o.contradiction_record.is_some()),
            obstructions.iter().map(|o| &o.contradiction_record).collect::<Vec<_>>(),
        ),
    ];
    match applications_from(catalog, &v, &ap) {
        Ok(app) => {
            for (field, observed) in [
                ("tp", app.tp),
                ("ei", app.ei),
                ("model-companion", app.model_companion),
                ("two-in-amal", app.two_in_amal),
            ] {
                out.push(Record::expect(
                    format!("applications/{name}/{field}"),
                    format!("{field} for {name}"),
                    ap_expected,
                    observed,
                    (),
                ));
            }
            let jep = app.jep_on_si_pairs.iter().all(|j| j.jointly_embeddable);
            out.push(Record::expect(
                format!("applications/{name}/jep"),
                format!("SIs of {name} embed jointly"),
                ap_expected,
                jep,
                &app.jep_on_si_pairs,
            ));
            for f in exp.jep_failure.iter().filter(|f| f.variety == name) {
                let found = app
                    .jep_on_si_pairs
                    .iter()
                    .find(|j| {
                        (j.left.name(), j.right.name()) == (f.left.as_str(), f.right.as_str())
                            || (j.right.name(), j.left.name()) == (f.left.as_str(), f.right.as_str())
                    })
                    .map(|j| j.jointly_embeddable);
                out.push(Record::expect(
                    format!("jep/{name}/{},{}", f.left, f.right),
                    format!("{} and {} embed jointly in {name}", f.left, f.right),
                    Some(false),
                    found,
                    (),
                ));
            }
        }
        Err(e) => out.push(Record::error(format!("applications/{name}"), "applications", ap_expected, &e)),
    }
    out.push(match refute_amal_base(catalog, &v, catalog.get(Builtin::Two)) {
        Ok(r) => Record::expect(
            format!("refute-two/{name}"),
            format!("2 refuted as an amalgamation base of {name}"),
            !ap_expected,
            r.is_some(),
            r,
        ),
        Err(e) => Record::error(format!("refute-two/{name}"), "amalgamation base refutation", !ap_expected, &e),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_expectations_parse() {
        let e = expectations();
        assert_eq!(e.ap.values().filter(|&&b| b).count(), 4);
        assert_eq!(e.obstruction.len(), 5);
        assert!(parse_expectations("version = 2\n[ap]\n").is_err());
        assert!(parse_expectations("version = 1\n[ap]\nBA = true\n").is_err());
    }

    #[test]
    fn full_run_passes() {
        let r = verify_all(&Catalog::default());
        let failed: Vec<_> = r.records.iter().filter(|x| !x.ok).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(r.ap_lattice().is_some());
    }
}
