//! Target-side realization and the translation pipeline.
//!
//! Every expanded target derivation is anchored, combined and finalized in
//! the target grammar. Combinations whose features clash are kept as failed
//! candidates with the clash that killed them; the rest are linearized.

use serde::{Deserialize, Serialize};

use crate::avm::{Clash, FeatureStructure};
use crate::derivation::{replay_checked, DerivationTree};
use crate::derived::{Failure, Schedule, Stage};
use crate::error::{Error, Result};
use crate::gorn::GornAddress;
use crate::lexicon::LexicalEntry;
use crate::parser::{parse, tokenize, ParseOptions};
use crate::resources::LanguageResources;
use crate::transfer::{TransferTable, DEFAULT_EXPANSION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Survived,
    Failed,
}

/// A clash as reported to users: where it happened and the two structures
/// that would not unify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub stage: Stage,
    pub lemma: String,
    pub tree: String,
    pub addr: GornAddress,
    pub path: String,
    pub atoms: (String, String),
    pub left: FeatureStructure,
    pub right: FeatureStructure,
}

impl FailureRecord {
    pub fn clash(&self) -> Clash {
        Clash {
            path: self
                .path
                .split('.')
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
                .collect(),
            left: self.atoms.0.clone(),
            right: self.atoms.1.clone(),
        }
    }
}

impl From<Failure> for FailureRecord {
    fn from(f: Failure) -> Self {
        FailureRecord {
            stage: f.stage,
            lemma: f.lemma,
            tree: f.tree,
            addr: f.address,
            path: f.clash.path_string(),
            atoms: (f.clash.left, f.clash.right),
            left: f.left,
            right: f.right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateResult {
    /// Lemma choices in derivation preorder.
    pub lemmas: Vec<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    /// With senses and surface forms filled in when the candidate survived.
    pub derivation: DerivationTree,
    /// Restricted feature paths over the chosen entries; survivors only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specificity: Option<usize>,
}

/// Senses for one derivation node, each with its generation form.
fn senses<'a>(node: &DerivationTree, res: &'a LanguageResources) -> Result<Vec<&'a LexicalEntry>> {
    let mut out: Vec<&LexicalEntry> = Vec::new();
    for e in res.lexicon.entries_for(&node.lemma, &node.tree) {
        if !out.iter().any(|o| o.sense == e.sense) {
            out.push(e);
        }
    }
    if out.is_empty() {
        return Err(Error::MissingEntry {
            lemma: node.lemma.clone(),
            tree: node.tree.clone(),
        });
    }
    Ok(out)
}

fn instantiate(d: &DerivationTree, choice: &[&LexicalEntry], next: &mut usize) -> DerivationTree {
    let e = choice[*next];
    *next += 1;
    let mut out = DerivationTree::for_entry(&d.tree, e);
    for edge in &d.children {
        let mut edge = edge.clone();
        edge.child = instantiate(&edge.child, choice, next);
        out.children.push(edge);
    }
    out
}

/// Replays a target derivation in the target grammar. Lemmas with several
/// senses are tried in lexicon order; the first combination that survives
/// wins, and if none does the first combination's failure is reported.
pub fn realize(
    deriv: &DerivationTree,
    res: &LanguageResources,
    schedule: Schedule,
) -> Result<CandidateResult> {
    let nodes = deriv.nodes();
    let options = nodes
        .iter()
        .map(|n| senses(n, res))
        .collect::<Result<Vec<_>>>()?;
    let lemmas: Vec<String> = deriv.lemmas().into_iter().map(str::to_owned).collect();
    let mut first_failure = None;
    let mut index = vec![0usize; options.len()];
    loop {
        let choice: Vec<&LexicalEntry> = index.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        let concrete = instantiate(deriv, &choice, &mut 0);
        match replay_checked(&concrete, res, schedule)? {
            Ok(checked) => {
                return Ok(CandidateResult {
                    lemmas,
                    status: Status::Survived,
                    failure: None,
                    surface: Some(checked.yield_tokens().join(" ")),
                    derivation: concrete,
                    specificity: Some(choice.iter().map(|e| e.specificity()).sum()),
                });
            }
            Err(f) => {
                first_failure.get_or_insert(f);
            }
        }
        let mut k = index.len();
        loop {
            if k == 0 {
                return Ok(CandidateResult {
                    lemmas,
                    status: Status::Failed,
                    failure: first_failure.map(FailureRecord::from),
                    surface: None,
                    derivation: deriv.clone(),
                    specificity: None,
                });
            }
            k -= 1;
            index[k] += 1;
            if index[k] < options[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// Survivors ordered by specificity (most specific first), then by lemma
/// choices; duplicate surfaces keep their best-ranked occurrence.
pub fn rank(candidates: &[CandidateResult]) -> Vec<&CandidateResult> {
    let mut survivors: Vec<&CandidateResult> = candidates
        .iter()
        .filter(|c| c.status == Status::Survived)
        .collect();
    survivors.sort_by(|a, b| {
        b.specificity
            .cmp(&a.specificity)
            .then_with(|| a.lemmas.cmp(&b.lemmas))
    });
    let mut seen = std::collections::BTreeSet::new();
    survivors.retain(|c| seen.insert(c.surface.clone()));
    survivors
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeClass {
    Translated,
    NoParse,
    NoCandidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Translation {
    pub source: String,
    /// Number of source derivations.
    pub parses: usize,
    /// Ranked, de-duplicated surviving surfaces.
    pub survivors: Vec<String>,
    /// Every candidate in expansion order, across all source derivations.
    pub candidates: Vec<CandidateResult>,
}

impl Translation {
    pub fn outcome(&self) -> OutcomeClass {
        if self.parses == 0 {
            OutcomeClass::NoParse
        } else if self.survivors.is_empty() {
            OutcomeClass::NoCandidate
        } else {
            OutcomeClass::Translated
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("translation serializes")
    }
}

#[derive(Debug, Clone)]
pub struct TranslateOptions {
    pub max_expansion: usize,
    pub schedule: Schedule,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            max_expansion: DEFAULT_EXPANSION_CAP,
            schedule: Schedule::Eager,
        }
    }
}

pub fn check_languages(
    src: &LanguageResources,
    tgt: &LanguageResources,
    table: &TransferTable,
) -> Result<()> {
    for (expected, found) in [
        (&table.source_lang, &src.language),
        (&table.target_lang, &tgt.language),
    ] {
        if expected != found {
            return Err(Error::LanguageMismatch {
                expected: expected.clone(),
                found: found.clone(),
            });
        }
    }
    Ok(())
}

/// Tokenize, parse, map each source derivation, expand, realize.
pub fn translate(
    sentence: &str,
    src: &LanguageResources,
    tgt: &LanguageResources,
    table: &TransferTable,
    opts: &TranslateOptions,
) -> Result<Translation> {
    check_languages(src, tgt, table)?;
    let tokens = tokenize(sentence)?;
    let parses = parse(
        &tokens,
        src,
        &ParseOptions {
            schedule: opts.schedule,
            ..ParseOptions::default()
        },
    )?;
    let mut candidates = Vec::new();
    for p in &parses {
        let skeleton = table.map_derivation(&p.derivation)?;
        for d in skeleton.expand(opts.max_expansion)? {
            candidates.push(realize(&d, tgt, opts.schedule)?);
        }
    }
    let survivors = rank(&candidates)
        .into_iter()
        .filter_map(|c| c.surface.clone())
        .collect();
    Ok(Translation {
        source: sentence.to_owned(),
        parses: parses.len(),
        survivors,
        candidates,
    })
}
