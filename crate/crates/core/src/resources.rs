//! Per-language grammar files: trees, lexicon and ontology in one JSON
//! document.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::avm::DEFAULT_MAX_DEPTH;
use crate::error::{Error, Result, Violation};
use crate::grammar::{ElementaryTree, Grammar};
use crate::lexicon::{validate_lexicon, Lexicon, Ontology, RawEntry};

pub const GRAMMAR_SCHEMA_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrammarFile {
    schema: u32,
    language: String,
    ontology: Ontology,
    trees: Vec<ElementaryTree>,
    lexicon: Vec<RawEntry>,
}

#[derive(Debug, Clone)]
pub struct LanguageResources {
    pub language: String,
    pub grammar: Grammar,
    pub lexicon: Lexicon,
    pub ontology: Ontology,
    terminals: BTreeSet<String>,
}

impl LanguageResources {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GrammarFile = serde_json::from_str(text).map_err(|source| Error::Json {
            path: "<grammar>".into(),
            source,
        })?;
        Self::from_file(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let file: GrammarFile = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        Self::from_file(file)
    }

    fn from_file(file: GrammarFile) -> Result<Self> {
        if file.schema != GRAMMAR_SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported grammar schema version {} (expected {GRAMMAR_SCHEMA_VERSION})",
                file.schema
            )));
        }
        let mut trees = file.trees;
        for t in &mut trees {
            t.language = file.language.clone();
            for (_, node) in t.nodes() {
                node.top.check(DEFAULT_MAX_DEPTH)?;
                node.bottom.check(DEFAULT_MAX_DEPTH)?;
            }
            t.normalize()
                .map_err(|e| Error::Format(format!("tree `{}`: {e}", t.name)))?;
        }
        let mut entries = Vec::new();
        for raw in file.lexicon {
            entries.extend(raw.expand(&file.language)?);
        }
        for e in &entries {
            let structures = [&e.semfeats, &e.syn]
                .into_iter()
                .chain(e.equations.iter().map(|q| &q.fs))
                .chain(e.restrictions.iter().map(|r| &r.fs));
            for fs in structures {
                fs.check(DEFAULT_MAX_DEPTH)?;
            }
        }
        let terminals = trees
            .iter()
            .flat_map(|t| t.terminal_words().into_iter().map(str::to_owned))
            .collect();
        let mut ontology = file.ontology;
        ontology.language = file.language.clone();
        Ok(LanguageResources {
            grammar: Grammar::new(&file.language, trees),
            lexicon: Lexicon::new(&file.language, entries),
            ontology,
            language: file.language,
            terminals,
        })
    }

    /// Words that occur as fixed co-anchors in some tree.
    pub fn terminal_words(&self) -> &BTreeSet<String> {
        &self.terminals
    }

    /// Grammar, lexicon and ontology checks together.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.grammar.validate();
        out.extend(validate_lexicon(
            &self.lexicon,
            &self.ontology,
            &self.grammar,
        ));
        out
    }
}
