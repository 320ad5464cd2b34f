//! Per-language syntactic lexicon and semantic ontology.
//!
//! A lexical entry names the trees it anchors, its own semantic categories
//! (`semfeats`), inflectional features (`syn`), feature equations on
//! arbitrary nodes of its trees, and selectional restrictions on argument
//! slots. Inflection is table driven: each surface form is its own entry.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::avm::{resolve, Bindings, FeatureStructure, Unifier};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::gorn::GornAddress;
use crate::grammar::{Category, ElementaryTree, Grammar};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ontology {
    #[serde(default)]
    pub language: String,
    /// Declared semantic features and their allowed atoms.
    pub features: BTreeMap<String, BTreeSet<String>>,
    /// Features every noun must value explicitly.
    #[serde(default)]
    pub selectional: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Top,
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub addr: GornAddress,
    pub slot: Slot,
    pub fs: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub addr: GornAddress,
    pub fs: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexicalEntry {
    pub surface: Vec<String>,
    pub lemma: String,
    /// Sense identifier; equal to `lemma` unless the lemma is split into
    /// senses that share surfaces.
    pub sense: String,
    pub language: String,
    pub pos: Category,
    pub trees: Vec<String>,
    pub semfeats: FeatureStructure,
    pub equations: Vec<Equation>,
    pub restrictions: Vec<Restriction>,
    pub syn: FeatureStructure,
}

impl LexicalEntry {
    pub fn is_noun(&self) -> bool {
        self.pos.as_str() == "N"
    }

    /// Total number of restricted feature paths; the ranking key for
    /// competing translations.
    pub fn specificity(&self) -> usize {
        self.restrictions.iter().map(|r| r.fs.path_count()).sum()
    }

    /// Sense label for display, if distinct from the lemma.
    pub fn sense_label(&self) -> Option<&str> {
        (self.sense != self.lemma).then_some(self.sense.as_str())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSurface {
    Tokens(Vec<String>),
    Text(String),
}

impl RawSurface {
    fn tokens(self) -> Vec<String> {
        match self {
            RawSurface::Tokens(t) => t,
            RawSurface::Text(s) => s.split_whitespace().map(str::to_owned).collect(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    surface: RawSurface,
    #[serde(default)]
    syn: FeatureStructure,
}

/// File representation: one item per sense, with one or more surface forms.
/// The first form is the one used when generating.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawEntry {
    lemma: String,
    sense: Option<String>,
    pos: Category,
    trees: Vec<String>,
    #[serde(default)]
    semfeats: FeatureStructure,
    #[serde(default)]
    equations: Vec<Equation>,
    #[serde(default)]
    restrictions: Vec<Restriction>,
    surface: Option<RawSurface>,
    #[serde(default)]
    syn: FeatureStructure,
    #[serde(default)]
    forms: Vec<RawForm>,
}

impl RawEntry {
    pub(crate) fn expand(self, language: &str) -> Result<Vec<LexicalEntry>> {
        let mut forms = self.forms;
        if let Some(surface) = self.surface {
            forms.insert(
                0,
                RawForm {
                    surface,
                    syn: self.syn,
                },
            );
        }
        if forms.is_empty() {
            return Err(Error::Format(format!(
                "lexical entry `{}` has no surface form",
                self.lemma
            )));
        }
        let sense = self.sense.unwrap_or_else(|| self.lemma.clone());
        forms
            .into_iter()
            .map(|f| {
                let surface = f.surface.tokens();
                if surface.is_empty() {
                    return Err(Error::Format(format!("empty surface for `{}`", self.lemma)));
                }
                Ok(LexicalEntry {
                    surface,
                    lemma: self.lemma.clone(),
                    sense: sense.clone(),
                    language: language.to_owned(),
                    pos: self.pos.clone(),
                    trees: self.trees.clone(),
                    semfeats: self.semfeats.clone(),
                    equations: self.equations.clone(),
                    restrictions: self.restrictions.clone(),
                    syn: f.syn,
                })
            })
            .collect()
    }
}

/// A stretch of input matched during lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment<'a> {
    /// Every entry whose surface is the longest match at `start`.
    Entries {
        start: usize,
        len: usize,
        entries: Vec<&'a LexicalEntry>,
    },
    /// A token that only occurs as a fixed co-anchor word in some tree.
    Terminal { position: usize },
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    pub language: String,
    entries: Vec<LexicalEntry>,
    by_first_token: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn new(language: impl Into<String>, entries: Vec<LexicalEntry>) -> Self {
        let mut by_first_token: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_first_token
                .entry(e.surface[0].clone())
                .or_default()
                .push(i);
        }
        Lexicon {
            language: language.into(),
            entries,
            by_first_token,
        }
    }

    pub fn entries(&self) -> &[LexicalEntry] {
        &self.entries
    }

    pub fn has_lemma(&self, lemma: &str) -> bool {
        self.entries.iter().any(|e| e.lemma == lemma)
    }

    /// Entries for `lemma` that anchor `tree`, in file order.
    pub fn entries_for<'a, 'q>(
        &'a self,
        lemma: &'q str,
        tree: &'q str,
    ) -> impl Iterator<Item = &'a LexicalEntry> + use<'a, 'q> {
        self.entries
            .iter()
            .filter(move |e| e.lemma == lemma && e.trees.iter().any(|t| t == tree))
    }

    /// Greedy left-to-right longest-match segmentation. Tokens that are not
    /// entries but appear in `terminals` are passed through as co-anchors.
    pub fn lookup<'a>(
        &'a self,
        tokens: &[String],
        terminals: &BTreeSet<String>,
    ) -> Result<Vec<Segment<'a>>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let mut best: Option<(usize, Vec<&LexicalEntry>)> = None;
            for &ix in self.by_first_token.get(&tokens[i]).into_iter().flatten() {
                let e = &self.entries[ix];
                let n = e.surface.len();
                if tokens.len() - i < n || tokens[i..i + n] != e.surface[..] {
                    continue;
                }
                match &mut best {
                    Some((len, v)) if *len == n => v.push(e),
                    Some((len, _)) if *len > n => {}
                    _ => best = Some((n, vec![e])),
                }
            }
            match best {
                Some((len, entries)) => {
                    out.push(Segment::Entries {
                        start: i,
                        len,
                        entries,
                    });
                    i += len;
                }
                None if terminals.contains(&tokens[i]) => {
                    out.push(Segment::Terminal { position: i });
                    i += 1;
                }
                None => {
                    return Err(Error::UnknownToken {
                        token: tokens[i].clone(),
                        position: i,
                    })
                }
            }
        }
        Ok(out)
    }
}

/// Instantiates `tree` for `entry`: fills the anchor, merges the entry's own
/// features into the bottom of the anchor's parent, applies equations and
/// restrictions, and renames every variable apart with `instance`.
///
/// The result is resolved, so it carries no bindings of its own.
pub fn anchor(
    entry: &LexicalEntry,
    tree: &ElementaryTree,
    instance: usize,
) -> Result<ElementaryTree> {
    if !entry.trees.contains(&tree.name) {
        return Err(Error::TreeNotSelected {
            lemma: entry.lemma.clone(),
            tree: tree.name.clone(),
        });
    }
    let fresh = |v: &str| format!("{v}#{instance}");
    let mut out = tree.clone();
    rename_tree(&mut out.root, &fresh);

    let anchor_addr = out
        .anchor_address()
        .ok_or_else(|| Error::Format(format!("tree `{}` has no anchor", tree.name)))?;
    out.node_at_mut(&anchor_addr)?.words = entry.surface.clone();
    let host = anchor_addr.parent().unwrap_or_else(GornAddress::root);

    let mut updates: Vec<(GornAddress, Slot, FeatureStructure)> = vec![
        (
            host.clone(),
            Slot::Bottom,
            entry.semfeats.rename_vars(&fresh),
        ),
        (host, Slot::Bottom, entry.syn.rename_vars(&fresh)),
    ];
    updates.extend(
        entry
            .equations
            .iter()
            .map(|e| (e.addr.clone(), e.slot, e.fs.rename_vars(&fresh))),
    );
    updates.extend(
        entry
            .restrictions
            .iter()
            .map(|r| (r.addr.clone(), Slot::Top, r.fs.rename_vars(&fresh))),
    );

    let unifier = Unifier::default();
    let mut env = Bindings::new();
    for (addr, slot, fs) in updates {
        let node = out.node_at_mut(&addr)?;
        let target = match slot {
            Slot::Top => &mut node.top,
            Slot::Bottom => &mut node.bottom,
        };
        match unifier.unify(target, &fs, &env)? {
            Ok((merged, e)) => {
                *target = merged;
                env = e;
            }
            Err(clash) => {
                return Err(Error::AnchorClash {
                    lemma: entry.lemma.clone(),
                    tree: tree.name.clone(),
                    address: addr,
                    clash: Box::new(clash),
                })
            }
        }
    }
    resolve_tree(&mut out.root, &env);
    Ok(out)
}

fn rename_tree(node: &mut crate::grammar::TreeNode, f: &impl Fn(&str) -> String) {
    node.top = node.top.rename_vars(f);
    node.bottom = node.bottom.rename_vars(f);
    for c in &mut node.children {
        rename_tree(c, f);
    }
}

fn resolve_tree(node: &mut crate::grammar::TreeNode, env: &Bindings) {
    node.top = resolve(&node.top, env);
    node.bottom = resolve(&node.bottom, env);
    for c in &mut node.children {
        resolve_tree(c, env);
    }
}

/// Reports undeclared features and atoms, nouns missing selectional
/// features, unknown trees, dangling equation/restriction addresses, and
/// entries that cannot be anchored.
pub fn validate_lexicon(
    lexicon: &Lexicon,
    ontology: &Ontology,
    grammar: &Grammar,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for f in &ontology.selectional {
        if !ontology.features.contains_key(f) {
            out.push(Violation::new(
                ViolationKind::Ontology,
                format!("ontology {}", ontology.language),
                format!("selectional feature `{f}` is not declared"),
            ));
        }
    }

    let mut seen = BTreeSet::new();
    for entry in lexicon.entries() {
        let loc = format!("lexicon {}", entry.sense);
        // Sense-level checks once per sense, not once per surface form.
        let first_form = seen.insert(entry.sense.clone());

        if first_form {
            for (what, fs) in std::iter::once(("semfeats", &entry.semfeats))
                .chain(entry.restrictions.iter().map(|r| ("restriction", &r.fs)))
            {
                for (name, _) in fs.iter() {
                    if !ontology.features.contains_key(name) {
                        out.push(Violation::new(
                            ViolationKind::UndeclaredFeature,
                            loc.clone(),
                            format!("{what} feature `{name}` is not in the ontology"),
                        ));
                    }
                }
            }
            if entry.is_noun() {
                for f in &ontology.selectional {
                    if entry.semfeats.get(f).is_none() {
                        out.push(Violation::new(
                            ViolationKind::MissingSelectional,
                            loc.clone(),
                            format!("noun does not value selectional feature `{f}`"),
                        ));
                    }
                }
            }
        }

        let structures = std::iter::once(&entry.semfeats)
            .chain(std::iter::once(&entry.syn))
            .chain(entry.equations.iter().map(|e| &e.fs))
            .chain(entry.restrictions.iter().map(|r| &r.fs));
        for fs in structures {
            for (name, atom) in fs.atoms() {
                if let Some(allowed) = ontology.features.get(name) {
                    if !allowed.contains(atom) {
                        out.push(Violation::new(
                            ViolationKind::UndeclaredAtom,
                            loc.clone(),
                            format!("value `{atom}` is not declared for feature `{name}`"),
                        ));
                    }
                }
            }
        }

        for tree_name in &entry.trees {
            let Ok(tree) = grammar.tree(tree_name) else {
                out.push(Violation::new(
                    ViolationKind::UnknownTree,
                    loc.clone(),
                    format!("selects unknown tree `{tree_name}`"),
                ));
                continue;
            };
            let addrs = entry
                .equations
                .iter()
                .map(|e| &e.addr)
                .chain(entry.restrictions.iter().map(|r| &r.addr));
            let mut dangling = false;
            for addr in addrs {
                if tree.node_at(addr).is_err() {
                    dangling = true;
                    out.push(Violation::new(
                        ViolationKind::DanglingAddress,
                        loc.clone(),
                        format!("address {addr} does not resolve in tree `{tree_name}`"),
                    ));
                }
            }
            if !dangling {
                if let Err(e) = anchor(entry, tree, 0) {
                    out.push(Violation::new(
                        ViolationKind::AnchorClash,
                        loc.clone(),
                        e.to_string(),
                    ));
                }
            }
        }
    }
    out
}
