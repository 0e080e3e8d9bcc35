use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use agkit_core::amalgamation::{applications_from, classify_ap, decide_amalgamation, verify_result, AmalgamationResult, Diagram};
use agkit_core::builtins::Catalog;
use agkit_core::congruence::{check_sc, classify, congruence_lattice};
use agkit_core::morphism::enumerate_homs;
use agkit_core::pipeline::{expectations, variety_records, verification_records};
use agkit_core::report::{Record, Report};
use agkit_core::term::parse_sentence;
use agkit_core::variety::{free_algebra, generated_subvariety, lemma_suite, quasi_identity_holds, variety, VarietyDescriptor, VarietyName};
use agkit_core::{direct_product, load_algebra, Builtin, Error, FiniteAlgebra, Result};

use crate::{AlgebraCommand, Command};

pub struct Output {
    pub report: Report,
    pub text: String,
}

/// Builtin name, path to an algebra file, or a `*`-separated product.
fn resolve(catalog: &Catalog, arg: &str) -> Result<FiniteAlgebra> {
    if let Ok(b) = arg.parse::<Builtin>() {
        return Ok(catalog.get(b).clone());
    }
    if Path::new(arg).is_file() {
        return load_algebra(&std::fs::read_to_string(arg)?);
    }
    if arg.contains('*') {
        let factors = arg.split('*').map(|a| resolve(catalog, a.trim())).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
        return direct_product(&refs, catalog.limits());
    }
    Err(Error::NotFound {
        kind: "algebra",
        name: arg.to_string(),
    })
}

fn show_map(source: &FiniteAlgebra, target: &FiniteAlgebra, map: &[usize]) -> String {
    source
        .elements()
        .map(|x| format!("{}->{}", source.label(x), target.label(map[x])))
        .collect::<Vec<_>>()
        .join(" ")
}

fn show_blocks(alg: &FiniteAlgebra, blocks: &[Vec<usize>]) -> String {
    let inner: Vec<String> = blocks
        .iter()
        .map(|b| b.iter().map(|&x| alg.label(x)).collect::<Vec<_>>().join(","))
        .collect();
    format!("{{{}}}", inner.join(" | "))
}

pub fn run(catalog: &Catalog, command: Command, argv: Vec<String>) -> Result<Output> {
    let mut text = String::new();
    let records = match command {
        Command::Algebra(AlgebraCommand::Show { algebra }) => {
            let a = resolve(catalog, &algebra)?;
            let _ = writeln!(text, "{} ({} elements)\n{}", a.name(), a.size(), a.render_tables());
            vec![Record::info("algebra", a.name(), a.to_spec())]
        }
        Command::Check { variety: v, sentence } => {
            let v = variety(&v)?;
            let s = parse_sentence(&sentence)?;
            let verdict = quasi_identity_holds(catalog, &v, &s)?;
            match &verdict.countermodel {
                None => {
                    let _ = writeln!(text, "{s}: holds in {}", v.name);
                }
                Some(c) => {
                    let _ = writeln!(text, "{s}: fails in {} (countermodel {} with {})", v.name, c.algebra, c.described);
                }
            }
            vec![Record::expect(
                "check",
                format!("{s} in {}", v.name),
                true,
                verdict.holds,
                &verdict.countermodel,
            )]
        }
        Command::Homs { source, target } => {
            let (a, b) = (resolve(catalog, &source)?, resolve(catalog, &target)?);
            let homs = enumerate_homs(&a, &b, None)?;
            let _ = writeln!(
                text,
                "{} homomorphism{} {} -> {}",
                homs.len(),
                if homs.len() == 1 { "" } else { "s" },
                a.name(),
                b.name()
            );
            for h in &homs {
                let kind = match (h.is_injective(), h.is_surjective()) {
                    (true, true) => "iso",
                    (true, false) => "embedding",
                    (false, true) => "onto",
                    (false, false) => "",
                };
                let _ = writeln!(text, "  {}  {kind}", show_map(&a, &b, h.map()));
            }
            vec![Record::info("homs", format!("{} -> {}", a.name(), b.name()), &homs)]
        }
        Command::Congruences { algebra } => {
            let a = resolve(catalog, &algebra)?;
            let con = congruence_lattice(&a, catalog.limits())?;
            let _ = writeln!(text, "{} congruences of {}", con.len(), a.name());
            for p in con.congruences() {
                let _ = writeln!(text, "  {}", show_blocks(&a, &p.blocks()));
            }
            vec![Record::info("congruences", a.name(), con.congruences())]
        }
        Command::Classify { algebra } => {
            let a = resolve(catalog, &algebra)?;
            let c = classify(&a, catalog.limits())?;
            let sc = check_sc(&a);
            let generated = generated_subvariety(catalog, &a);
            let _ = writeln!(text, "{}: {} elements, {} congruences", a.name(), a.size(), c.congruence_count);
            let _ = writeln!(text, "  simple: {}", c.simple);
            let _ = writeln!(text, "  subdirectly irreducible: {}", c.subdirectly_irreducible);
            let _ = writeln!(text, "  directly indecomposable: {}", c.directly_indecomposable);
            if let Some(m) = &c.monolith {
                let _ = writeln!(text, "  monolith: {}", show_blocks(&a, &m.blocks()));
            }
            let _ = writeln!(
                text,
                "  x /\\ x'* = 0 for x < 1: {}{}",
                sc.sc,
                sc.sc_witness.map(|w| format!(" (fails at {})", a.label(w))).unwrap_or_default()
            );
            let _ = writeln!(
                text,
                "  x \\/ x* = 1 only at 0, 1: {}{}",
                sc.complement_dichotomy,
                sc.complement_witness
                    .map(|w| format!(" (fails at {})", a.label(w)))
                    .unwrap_or_default()
            );
            match &generated {
                Ok(g) => {
                    let _ = writeln!(text, "  generates: {}", g.by_base);
                }
                Err(e) => {
                    let _ = writeln!(text, "  generates: ({e})");
                }
            }
            vec![Record::info(
                "classify",
                a.name(),
                json!({
                    "classification": c,
                    "sc": sc,
                    "generated": generated.as_ref().map_err(|e| e.to_string()),
                }),
            )]
        }
        Command::Amalgamate {
            variety: v,
            base,
            left,
            right,
        } => {
            let v = variety(&v)?;
            let (a, b, c) = (resolve(catalog, &base)?, resolve(catalog, &left)?, resolve(catalog, &right)?);
            let diagrams = Diagram::all(&a, &b, &c)?;
            if diagrams.is_empty() {
                let _ = writeln!(text, "no diagrams: {} does not embed in both sides", a.name());
            }
            let mut records = Vec::new();
            for (i, d) in diagrams.iter().enumerate() {
                let r = decide_amalgamation(catalog, &v, d)?;
                let verified = verify_result(catalog, &v, d, &r).is_ok();
                let _ = writeln!(
                    text,
                    "diagram {i}: f = {}; g = {}",
                    show_map(&a, &b, d.f.map()),
                    show_map(&a, &c, d.g.map())
                );
                match &r {
                    AmalgamationResult::Amalgam { factors, f1, g1 } => {
                        let names: Vec<&str> = factors.iter().map(|f| f.name()).collect();
                        let _ = writeln!(text, "  amalgam D = {}", names.join(" x "));
                        for (k, f) in factors.iter().enumerate() {
                            let s = catalog.get(*f);
                            let _ = writeln!(text, "    f1[{k}]: {}", show_map(&b, s, &f1[k]));
                            let _ = writeln!(text, "    g1[{k}]: {}", show_map(&c, s, &g1[k]));
                        }
                    }
                    AmalgamationResult::Obstruction {
                        side, labels, hom_census, ..
                    } => {
                        let _ = writeln!(
                            text,
                            "  obstruction: {side:?} pair ({}, {}) cannot be separated",
                            labels.0, labels.1
                        );
                        for h in hom_census {
                            let _ = writeln!(
                                text,
                                "    {}: {} left homs, {} right homs, {} compatible",
                                h.si, h.left_homs, h.right_homs, h.compatible_pairs
                            );
                        }
                    }
                }
                let _ = writeln!(text, "  certificate verified: {verified}");
                records.push(Record::expect(
                    format!("amalgamate/{i}"),
                    format!("certificate for diagram {i} in {}", v.name),
                    true,
                    verified,
                    json!({"diagram": d.summary(), "result": r}),
                ));
            }
            records
        }
        Command::ClassifyAp(choice) => {
            let names = match choice.variety {
                Some(v) => vec![v.parse::<VarietyName>()?],
                None => VarietyName::ALL.to_vec(),
            };
            let exp = expectations();
            let mut records = Vec::new();
            let _ = writeln!(
                text,
                "{:<14} {:>6} {:>9} {:>10} {:>13}",
                "variety", "AP", "expected", "diagrams", "obstructions"
            );
            for name in names {
                let ap = classify_ap(catalog, &VarietyDescriptor::get(name))?;
                let expected = exp.has_ap(name)?;
                let _ = writeln!(
                    text,
                    "{:<14} {:>6} {:>9} {:>10} {:>13}",
                    name.as_str(),
                    yes_no(ap.has_ap),
                    yes_no(expected),
                    ap.diagrams.len(),
                    ap.obstructions().count()
                );
                records.extend(
                    variety_records(catalog, &exp, name)
                        .into_iter()
                        .filter(|r| ["ap/", "ap-", "hsi/", "cep/"].iter().any(|p| r.id.starts_with(p))),
                );
            }
            records
        }
        Command::Lemmas { variety: v } => {
            let only = v.map(|v| v.parse::<VarietyName>()).transpose()?;
            let rep = lemma_suite(catalog, only)?;
            for r in &rep.results {
                let _ = writeln!(text, "{:<4} {:<44} {}", if r.ok() { "ok" } else { "FAIL" }, r.id, r.sentence);
                if let Some(c) = &r.countermodel {
                    let _ = writeln!(text, "     countermodel: {} with {}", c.algebra, c.described);
                }
            }
            let _ = writeln!(
                text,
                "{} of {} records hold",
                rep.results.iter().filter(|r| r.ok()).count(),
                rep.results.len()
            );
            rep.results
                .iter()
                .map(|r| {
                    Record::expect(
                        format!("lemma/{}", r.id),
                        &r.description,
                        r.expected,
                        r.observed,
                        json!({"sentence": r.sentence, "countermodel": r.countermodel}),
                    )
                })
                .collect()
        }
        Command::Applications { variety: v } => {
            let v = variety(&v)?;
            let ap = classify_ap(catalog, &v)?;
            let app = applications_from(catalog, &v, &ap)?;
            let _ = writeln!(text, "{}", v.name);
            for (k, b) in [
                ("AP", app.has_ap),
                ("CEP", app.cep),
                ("TP", app.tp),
                ("RS", app.rs),
                ("EI", app.ei),
                ("model companion", app.model_companion),
                ("2 not refuted as amalgamation base", app.two_in_amal),
            ] {
                let _ = writeln!(text, "  {k}: {}", yes_no(b));
            }
            for j in &app.jep_on_si_pairs {
                let _ = writeln!(text, "  {} and {} embed jointly: {}", j.left, j.right, yes_no(j.jointly_embeddable));
            }
            variety_records(catalog, &expectations(), v.name)
                .into_iter()
                .filter(|r| ["applications/", "jep/", "refute-two/"].iter().any(|p| r.id.starts_with(p)))
                .collect()
        }
        Command::Free { variety: v, n, cap } => {
            let v = variety(&v)?;
            let free = free_algebra(catalog, &v, n, cap.unwrap_or(catalog.limits().free_elements))?;
            let _ = writeln!(text, "F_{}({n}) has {} elements", v.name, free.size());
            if free.size() <= 64 {
                for e in 0..free.size() {
                    let _ = writeln!(
                        text,
                        "  {:<5} {}",
                        free.label(e),
                        free.term_of(e).map(|t| t.to_string()).unwrap_or_default()
                    );
                }
            }
            vec![Record::info(
                format!("free/{}/{n}", v.name),
                format!("size of the free algebra of {} on {n} generators", v.name),
                free.size(),
            )]
        }
        Command::VerifyPaper { out } => {
            let report = Report::new(argv.clone(), verification_records(catalog, &expectations()));
            if let Some(path) = out {
                std::fs::write(path, report.to_canonical_json())?;
            }
            text = report.to_markdown();
            return Ok(Output { report, text });
        }
    };
    Ok(Output {
        report: Report::new(argv, records),
        text,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
