//! The lemma registry: quasi-identities behind the non-amalgamation
//! arguments, each checked in its variety.

use rayon::prelude::*;
use serde::Serialize;

use super::{quasi_identity_holds, Countermodel, VarietyDescriptor, VarietyName};
use crate::builtins::{Builtin, Catalog};
use crate::error::{Error, Result};
use crate::term::{parse_sentence, Sentence};

/// The registry shipped with the crate.
pub const REGISTRY_TEXT: &str = include_str!("../../data/lemmas.txt");

const FORMAT_LINE: &str = "format 1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaRecord {
    pub id: String,
    pub variety: VarietyName,
    pub text: String,
    #[serde(skip)]
    pub sentence: Sentence,
    pub description: String,
    /// For contradiction records, the two SIs whose diagram over 2 the
    /// record refutes.
    pub diagram: Option<(Builtin, Builtin)>,
}

/// Parses a registry: a `format 1` line, then one record per line with
/// fields separated by ` | `. Blank lines and `#` comments are skipped.
pub fn parse_registry(text: &str) -> Result<Vec<LemmaRecord>> {
    let mut out: Vec<LemmaRecord> = Vec::new();
    let mut seen_format = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |e: Error| Error::Line {
            line: i + 1,
            source: Box::new(e),
        };
        if !seen_format {
            if line != FORMAT_LINE {
                return Err(at(Error::Invalid(format!("expected `{FORMAT_LINE}`, found `{line}`"))));
            }
            seen_format = true;
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(at(Error::Invalid(format!("expected 5 fields, found {}", fields.len()))));
        }
        let variety: VarietyName = fields[1].parse().map_err(at)?;
        let sentence = parse_sentence(fields[2]).map_err(at)?;
        let diagram = match fields[4] {
            "" => None,
            d => {
                let (l, r) = d
                    .split_once(',')
                    .ok_or_else(|| at(Error::Invalid(format!("diagram `{d}` is not `left,right`"))))?;
                Some((l.trim().parse().map_err(at)?, r.trim().parse().map_err(at)?))
            }
        };
        if out.iter().any(|r| r.id == fields[0]) {
            return Err(at(Error::Invalid(format!("duplicate id `{}`", fields[0]))));
        }
        out.push(LemmaRecord {
            id: fields[0].to_string(),
            variety,
            text: fields[2].to_string(),
            sentence,
            description: fields[3].to_string(),
            diagram,
        });
    }
    if !seen_format {
        return Err(Error::Invalid("registry has no format line".into()));
    }
    Ok(out)
}

pub fn lemma_registry() -> Vec<LemmaRecord> {
    parse_registry(REGISTRY_TEXT).expect("shipped registry parses")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaResult {
    pub id: String,
    pub variety: VarietyName,
    pub sentence: String,
    pub description: String,
    pub expected: bool,
    pub observed: bool,
    pub countermodel: Option<Countermodel>,
}

impl LemmaResult {
    pub fn ok(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub results: Vec<LemmaResult>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(LemmaResult::ok)
    }
}

/// Checks every record (or those of one variety), sorted by id. Every
/// record is expected to hold.
pub fn lemma_suite(catalog: &Catalog, only: Option<VarietyName>) -> Result<LemmaReport> {
    let records: Vec<LemmaRecord> = lemma_registry()
        .into_iter()
        .filter(|r| only.is_none_or(|v| r.variety == v))
        .collect();
    let mut results = records
        .par_iter()
        .map(|r| {
            let verdict = quasi_identity_holds(catalog, &VarietyDescriptor::get(r.variety), &r.sentence)?;
            Ok(LemmaResult {
                id: r.id.clone(),
                variety: r.variety,
                sentence: r.text.clone(),
                description: r.description.clone(),
                expected: true,
                observed: verdict.holds,
                countermodel: verdict.countermodel,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(LemmaReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_registry_parses() {
        let r = lemma_registry();
        let contradictions = r.iter().filter(|x| x.diagram.is_some()).count();
        assert_eq!(contradictions, 5);
        let lemmas = r.iter().filter(|x| x.diagram.is_none() && !x.id.ends_with(".bare")).count();
        assert_eq!(lemmas, 20);
    }

    #[test]
    fn every_record_holds() {
        let report = lemma_suite(&Catalog::default(), None).unwrap();
        for r in &report.results {
            assert!(r.ok(), "{} fails: {:?}", r.id, r.countermodel);
        }
    }

    #[test]
    fn contradiction_conclusions_fail_without_premises() {
        // The contradictions carry content: the bare conclusion is not an
        // identity of the variety.
        let c = Catalog::default();
        for r in lemma_registry().iter().filter(|r| r.diagram.is_some()) {
            let v = VarietyDescriptor::get(r.variety);
            let bare = r.sentence.without_premises();
            assert!(!quasi_identity_holds(&c, &v, &bare).unwrap().holds, "{}", r.id);
        }
    }

    #[test]
    fn malformed_registries() {
        assert!(parse_registry("x = x | AG | x = x | d |").is_err());
        assert!(parse_registry("format 1\na | AG | x = | d |").is_err());
        assert!(parse_registry("format 1\na | XX | x = x | d |").is_err());
        assert!(parse_registry("format 1\na | AG | x = x | d | 2").is_err());
        assert!(parse_registry("format 1\na | AG | x = x | d |\na | AG | x = x | d |").is_err());
        assert_eq!(parse_registry("format 1\na | AG | x = x | d | 2,4_dmba").unwrap().len(), 1);
    }

    #[test]
    fn premise_dropped_checks_in_boolean_algebras() {
        let c = Catalog::default();
        let ba = VarietyDescriptor::get(VarietyName::Ba);
        let r = lemma_registry().into_iter().find(|r| r.id == "ag/regular-part-complement").unwrap();
        assert!(quasi_identity_holds(&c, &ba, &r.sentence.without_premises()).unwrap().holds);
    }
}
