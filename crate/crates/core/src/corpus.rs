//! Batch evaluation over `source<TAB>expected` files.

use serde::{Deserialize, Serialize};

use crate::generator::{translate, OutcomeClass, TranslateOptions, Translation};
use crate::resources::LanguageResources;
use crate::transfer::TransferTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub line: usize,
    pub source: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub line: usize,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub got: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordResult {
    pub line: usize,
    pub source: String,
    pub expected: String,
    pub outcome: OutcomeClass,
    pub translation: Translation,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub total: usize,
    pub exact: usize,
    pub no_parse: usize,
    pub no_candidate: usize,
    /// Wrong first survivor, malformed lines and faults.
    pub mismatches: Vec<Mismatch>,
    pub records: Vec<RecordResult>,
}

impl CorpusReport {
    pub fn all_exact(&self) -> bool {
        self.exact == self.total
    }
}

/// Splits TSV text into records; malformed lines come back as mismatches.
/// Blank lines are ignored.
pub fn read_tsv(text: &str) -> (Vec<CorpusRecord>, Vec<Mismatch>) {
    let mut records = Vec::new();
    let mut bad = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        match fields.as_slice() {
            [source, expected] if !source.trim().is_empty() && !expected.trim().is_empty() => {
                records.push(CorpusRecord {
                    line,
                    source: source.trim().to_owned(),
                    expected: expected.trim().to_owned(),
                })
            }
            _ => bad.push(Mismatch {
                line,
                source: raw.to_owned(),
                expected: None,
                got: None,
                reason: format!(
                    "malformed line: expected 2 nonempty tab-separated fields, found {}",
                    fields.len()
                ),
            }),
        }
    }
    (records, bad)
}

/// Translates every record and compares the first-ranked survivor with the
/// expected surface. Report order follows input order.
pub fn run_corpus(
    text: &str,
    src: &LanguageResources,
    tgt: &LanguageResources,
    table: &TransferTable,
    opts: &TranslateOptions,
) -> CorpusReport {
    let (records, malformed) = read_tsv(text);
    let mut report = CorpusReport {
        total: records.len() + malformed.len(),
        ..CorpusReport::default()
    };
    let mut mismatches: Vec<Mismatch> = malformed;
    for r in records {
        let expected = r.expected.split_whitespace().collect::<Vec<_>>().join(" ");
        let t = match translate(&r.source, src, tgt, table, opts) {
            Ok(t) => t,
            Err(e) => {
                mismatches.push(Mismatch {
                    line: r.line,
                    source: r.source,
                    expected: Some(r.expected),
                    got: None,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let outcome = t.outcome();
        match outcome {
            OutcomeClass::NoParse => report.no_parse += 1,
            OutcomeClass::NoCandidate => report.no_candidate += 1,
            OutcomeClass::Translated if t.survivors[0] == expected => report.exact += 1,
            OutcomeClass::Translated => mismatches.push(Mismatch {
                line: r.line,
                source: r.source.clone(),
                expected: Some(r.expected.clone()),
                got: Some(t.survivors[0].clone()),
                reason: "first survivor differs from expected".to_owned(),
            }),
        }
        report.records.push(RecordResult {
            line: r.line,
            source: r.source,
            expected: r.expected,
            outcome,
            translation: t,
        });
    }
    mismatches.sort_by_key(|m| m.line);
    report.mismatches = mismatches;
    report
}
