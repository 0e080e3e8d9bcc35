//! Check records, canonical JSON and markdown rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub label: String,
    pub expected: Value,
    pub observed: Value,
    pub ok: bool,
    /// Certificate, witness or error text.
    pub detail: Value,
}

impl Record {
    /// A record whose verdict is `observed == expected`.
    pub fn expect(
        id: impl Into<String>,
        label: impl Into<String>,
        expected: impl Serialize,
        observed: impl Serialize,
        detail: impl Serialize,
    ) -> Self {
        let expected = to_value(expected);
        let observed = to_value(observed);
        Record {
            id: id.into(),
            label: label.into(),
            ok: expected == observed,
            expected,
            observed,
            detail: to_value(detail),
        }
    }

    /// An informational record with no expectation; always ok.
    pub fn info(id: impl Into<String>, label: impl Into<String>, observed: impl Serialize) -> Self {
        Record {
            id: id.into(),
            label: label.into(),
            expected: Value::Null,
            observed: to_value(observed),
            ok: true,
            detail: Value::Null,
        }
    }

    /// A check that could not run.
    pub fn error(id: impl Into<String>, label: impl Into<String>, expected: impl Serialize, err: &crate::error::Error) -> Self {
        Record {
            id: id.into(),
            label: label.into(),
            expected: to_value(expected),
            observed: Value::String("error".into()),
            ok: false,
            detail: Value::String(err.to_string()),
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("record fields serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub failed_ids: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: Vec<String>, records: Vec<Record>) -> Self {
        let failed_ids: Vec<String> = records.iter().filter(|r| !r.ok).map(|r| r.id.clone()).collect();
        Report {
            schema: SCHEMA,
            tool: "agkit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            summary: Summary {
                records: records.len(),
                passed: records.len() - failed_ids.len(),
                failed: failed_ids.len(),
                failed_ids,
            },
            records,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn record(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Pretty JSON with object keys sorted at every level.
    pub fn to_canonical_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&canonical(to_value(self))).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        let _ = writeln!(md, "# agkit report\n");
        let _ = writeln!(md, "Command: `{}`  ", self.command.join(" "));
        let _ = writeln!(
            md,
            "Records: {}, passed: {}, failed: {}\n",
            self.summary.records, self.summary.passed, self.summary.failed
        );
        if let Some(lattice) = self.ap_lattice() {
            let _ = writeln!(md, "## Amalgamation property\n\n```\n{lattice}```\n");
        }
        let _ = writeln!(md, "## Records\n");
        let _ = writeln!(md, "| id | check | expected | observed | ok |");
        let _ = writeln!(md, "|---|---|---|---|---|");
        for r in &self.records {
            let _ = writeln!(
                md,
                "| `{}` | {} | {} | {} | {} |",
                r.id,
                r.label,
                cell(&r.expected),
                cell(&r.observed),
                if r.ok { "yes" } else { "**NO**" }
            );
        }
        md
    }

    /// The lattice of subvarieties, bottom up, each marked with its AP
    /// verdict, when the report has one for every variety.
    pub fn ap_lattice(&self) -> Option<String> {
        let mark = |v: &str| -> Option<String> {
            let r = self.record(&format!("ap/{v}"))?;
            Some(format!("{v} [{}]", if r.observed == Value::Bool(true) { "AP" } else { "no AP" }))
        };
        let rows: Vec<Vec<String>> = [
            vec!["AG"],
            vec!["V_DBLST_DMBA", "G", "V_KLST_DMBA"],
            vec!["RDBLST", "DMBA", "RKLST"],
            vec!["BA"],
        ]
        .iter()
        .map(|row| row.iter().map(|v| mark(v)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
        let width = 72;
        let mut out = String::new();
        for (i, row) in rows.iter().enumerate() {
            let slot = width / row.len();
            let mut line = String::new();
            for name in row {
                let pad = slot.saturating_sub(name.len());
                let _ = write!(line, "{}{}{}", " ".repeat(pad / 2), name, " ".repeat(pad - pad / 2));
            }
            let _ = writeln!(out, "{}", line.trim_end());
            if i + 1 < rows.len() {
                let _ = writeln!(out);
            }
        }
        let _ = writeln!(out, "\nOrder is inclusion: a variety lies below every variety above it whose");
        let _ = writeln!(out, "subdirectly irreducibles include its own.");
        Some(out)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.replace('|', "\\|"),
        other => other.to_string().replace('|', "\\|"),
    }
}

fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new(
            vec!["agkit".into(), "test".into()],
            vec![
                Record::expect("b", "second", true, true, Value::Null),
                Record::expect("a", "first", 3, 4, "x=a"),
                Record::info("c", "third", vec![1, 2]),
            ],
        )
    }

    #[test]
    fn summary_counts_failures() {
        let r = sample();
        assert_eq!(r.summary.failed, 1);
        assert_eq!(r.summary.failed_ids, vec!["a".to_string()]);
        assert!(!r.all_ok());
    }

    #[test]
    fn canonical_json_round_trips() {
        let r = sample();
        let text = r.to_canonical_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_canonical_json(), text);
        assert!(text.find("\"command\"").unwrap() < text.find("\"records\"").unwrap());
        assert!(text.find("\"records\"").unwrap() < text.find("\"schema\"").unwrap());
    }

    #[test]
    fn markdown_lists_every_record() {
        let md = sample().to_markdown();
        assert!(md.contains("| `a` | first | 3 | 4 | **NO** |"));
        assert!(md.contains("| `c` |"));
        assert!(!md.contains("Amalgamation property"));
    }
}
