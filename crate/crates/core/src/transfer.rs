//! Concept-keyed lexical transfer between two languages.
//!
//! A source lemma maps to the union of the target lemma sets of every
//! concept it belongs to; tree links say where in the target tree each
//! source attachment lands. Mapping a source derivation yields a skeleton
//! whose lexical slots hold candidate sets, and expanding the skeleton
//! yields one target derivation per combination.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::derivation::{DerivationEdge, DerivationTree, Operation};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::gorn::GornAddress;
use crate::grammar::{NodeKind, TreeKind};
use crate::resources::LanguageResources;

pub const TRANSFER_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_EXPANSION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptMap {
    pub concept: String,
    pub source_lemmas: BTreeSet<String>,
    pub target_lemmas: BTreeSet<String>,
}

/// A fixed target attachment with no source counterpart, such as an article
/// the source language does not have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Insertion {
    pub op: Operation,
    pub addr: GornAddress,
    pub tree: String,
    pub lemma: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeLink {
    pub src_tree: String,
    /// `None` drops the source tree; only allowed for childless adjoined
    /// trees.
    pub tgt_tree: Option<String>,
    #[serde(default)]
    pub links: Vec<(GornAddress, GornAddress)>,
    #[serde(default)]
    pub insert: Vec<Insertion>,
}

impl TreeLink {
    pub fn target_address(&self, src: &GornAddress) -> Option<&GornAddress> {
        self.links.iter().find(|(s, _)| s == src).map(|(_, t)| t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferTable {
    pub version: u32,
    pub source_lang: String,
    pub target_lang: String,
    pub concepts: Vec<ConceptMap>,
    pub tree_links: Vec<TreeLink>,
}

impl TransferTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let t: TransferTable = serde_json::from_str(text).map_err(|source| Error::Json {
            path: "<transfer>".into(),
            source,
        })?;
        t.check_version()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let t: TransferTable = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        t.check_version()
    }

    fn check_version(self) -> Result<Self> {
        if self.version != TRANSFER_SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported transfer table version {} (expected {TRANSFER_SCHEMA_VERSION})",
                self.version
            )));
        }
        Ok(self)
    }

    pub fn link(&self, src_tree: &str) -> Result<&TreeLink> {
        self.tree_links
            .iter()
            .find(|l| l.src_tree == src_tree)
            .ok_or_else(|| Error::MissingTreeLink(src_tree.to_owned()))
    }

    /// Union of the target sets of every concept containing `lemma`.
    pub fn candidates(&self, lemma: &str) -> Result<BTreeSet<String>> {
        let mut found = false;
        let mut out = BTreeSet::new();
        for c in self
            .concepts
            .iter()
            .filter(|c| c.source_lemmas.contains(lemma))
        {
            found = true;
            out.extend(c.target_lemmas.iter().cloned());
        }
        if !found {
            return Err(Error::UnknownLemma(lemma.to_owned()));
        }
        Ok(out)
    }

    /// Checks the table against the grammars of both languages.
    pub fn validate(&self, src: &LanguageResources, tgt: &LanguageResources) -> Vec<Violation> {
        let mut out = Vec::new();
        for (expected, res, side) in [
            (&self.source_lang, src, "source"),
            (&self.target_lang, tgt, "target"),
        ] {
            if *expected != res.language {
                out.push(Violation::new(
                    ViolationKind::LanguageMismatch,
                    format!("{side} language"),
                    format!("table expects `{expected}`, grammar is `{}`", res.language),
                ));
            }
        }
        if !out.is_empty() {
            return out;
        }

        for c in &self.concepts {
            let loc = format!("concept {}", c.concept);
            if c.concept.is_empty() {
                out.push(Violation::new(
                    ViolationKind::UnknownLemma,
                    "concept",
                    "empty concept id",
                ));
            }
            for (lemmas, res) in [(&c.source_lemmas, src), (&c.target_lemmas, tgt)] {
                for l in lemmas.iter().filter(|l| !res.lexicon.has_lemma(l)) {
                    out.push(Violation::new(
                        ViolationKind::UnknownLemma,
                        &loc,
                        format!("`{l}` is not in the {} lexicon", res.language),
                    ));
                }
            }
        }

        let mut seen = BTreeSet::new();
        for link in &self.tree_links {
            let loc = format!("link {}", link.src_tree);
            if !seen.insert(&link.src_tree) {
                out.push(Violation::new(
                    ViolationKind::LinkKind,
                    &loc,
                    "duplicate link for source tree",
                ));
            }
            let Ok(s) = src.grammar.tree(&link.src_tree) else {
                out.push(Violation::new(
                    ViolationKind::UnknownTree,
                    &loc,
                    format!("no source tree `{}`", link.src_tree),
                ));
                continue;
            };
            let Some(tgt_name) = &link.tgt_tree else {
                if s.kind != TreeKind::Auxiliary
                    || !link.links.is_empty()
                    || !link.insert.is_empty()
                {
                    out.push(Violation::new(
                        ViolationKind::LinkKind,
                        &loc,
                        "only auxiliary trees without links or insertions can be dropped",
                    ));
                }
                continue;
            };
            let Ok(t) = tgt.grammar.tree(tgt_name) else {
                out.push(Violation::new(
                    ViolationKind::UnknownTree,
                    &loc,
                    format!("no target tree `{tgt_name}`"),
                ));
                continue;
            };
            if s.kind != t.kind {
                out.push(Violation::new(
                    ViolationKind::LinkKind,
                    &loc,
                    format!(
                        "{} tree linked to {} tree `{}`",
                        s.kind.name(),
                        t.kind.name(),
                        t.name
                    ),
                ));
            }
            for (sa, ta) in &link.links {
                let (sn, tn) = match (s.node_at(sa), t.node_at(ta)) {
                    (Ok(sn), Ok(tn)) => (sn, tn),
                    (Err(_), _) => {
                        out.push(Violation::new(
                            ViolationKind::DanglingAddress,
                            &loc,
                            format!("{} has no node {sa}", s.name),
                        ));
                        continue;
                    }
                    (_, Err(_)) => {
                        out.push(Violation::new(
                            ViolationKind::DanglingAddress,
                            &loc,
                            format!("{} has no node {ta}", t.name),
                        ));
                        continue;
                    }
                };
                let operable = |n: &crate::grammar::TreeNode| match n.kind {
                    NodeKind::Substitution => Some(Operation::Substitution),
                    NodeKind::Interior if n.adjoinable => Some(Operation::Adjunction),
                    _ => None,
                };
                match (operable(sn), operable(tn)) {
                    (Some(a), Some(b)) if a == b => {}
                    _ => out.push(Violation::new(
                        ViolationKind::LinkKind,
                        &loc,
                        format!("{sa} -> {ta} does not pair nodes open to the same operation"),
                    )),
                }
            }
            for ins in &link.insert {
                let iloc = format!("{loc} insert {}", ins.lemma);
                match t.node_at(&ins.addr) {
                    Err(_) => out.push(Violation::new(
                        ViolationKind::DanglingAddress,
                        &iloc,
                        format!("{} has no node {}", t.name, ins.addr),
                    )),
                    Ok(n) => {
                        let ok = match ins.op {
                            Operation::Substitution => n.kind == NodeKind::Substitution,
                            Operation::Adjunction => n.kind == NodeKind::Interior && n.adjoinable,
                        };
                        if !ok {
                            out.push(Violation::new(
                                ViolationKind::LinkKind,
                                &iloc,
                                format!("node {} does not accept {:?}", ins.addr, ins.op),
                            ));
                        }
                    }
                }
                if tgt.grammar.tree(&ins.tree).is_err() {
                    out.push(Violation::new(
                        ViolationKind::UnknownTree,
                        &iloc,
                        format!("no target tree `{}`", ins.tree),
                    ));
                } else if tgt
                    .lexicon
                    .entries_for(&ins.lemma, &ins.tree)
                    .next()
                    .is_none()
                {
                    out.push(Violation::new(
                        ViolationKind::UnknownLemma,
                        &iloc,
                        format!("`{}` does not anchor `{}`", ins.lemma, ins.tree),
                    ));
                }
            }
        }
        out
    }

    /// Maps a source derivation to a skeleton of candidate sets.
    pub fn map_derivation(&self, src: &DerivationTree) -> Result<TargetSkeleton> {
        let link = self.link(&src.tree)?;
        let Some(tree) = &link.tgt_tree else {
            return Err(Error::IllegalDeletion {
                tree: src.tree.clone(),
                reason: "it is the root of the derivation",
            });
        };
        let candidates = self.candidates(&src.lemma)?;
        if candidates.is_empty() {
            return Err(Error::EmptyCandidates(src.lemma.clone()));
        }
        let mut children = Vec::new();
        for edge in &src.children {
            let child_link = self.link(&edge.child.tree)?;
            if child_link.tgt_tree.is_none() {
                if edge.op != Operation::Adjunction {
                    return Err(Error::IllegalDeletion {
                        tree: edge.child.tree.clone(),
                        reason: "it is substituted",
                    });
                }
                if !edge.child.children.is_empty() {
                    return Err(Error::IllegalDeletion {
                        tree: edge.child.tree.clone(),
                        reason: "it has attachments of its own",
                    });
                }
                continue;
            }
            let address =
                link.target_address(&edge.address)
                    .ok_or_else(|| Error::MissingAddressLink {
                        tree: src.tree.clone(),
                        address: edge.address.clone(),
                    })?;
            children.push(SkeletonEdge {
                op: edge.op,
                address: address.clone(),
                child: self.map_derivation(&edge.child)?,
            });
        }
        for ins in &link.insert {
            children.push(SkeletonEdge {
                op: ins.op,
                address: ins.addr.clone(),
                child: TargetSkeleton {
                    tree: ins.tree.clone(),
                    source: None,
                    candidates: BTreeSet::from([ins.lemma.clone()]),
                    children: Vec::new(),
                },
            });
        }
        children.sort_by(|a, b| (&a.address, a.op).cmp(&(&b.address, b.op)));
        Ok(TargetSkeleton {
            tree: tree.clone(),
            source: Some(src.lemma.clone()),
            candidates,
            children,
        })
    }
}

/// Target derivation shape with a candidate set at every lexical slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSkeleton {
    pub tree: String,
    /// Source lemma this slot translates; `None` for inserted material.
    pub source: Option<String>,
    pub candidates: BTreeSet<String>,
    pub children: Vec<SkeletonEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonEdge {
    pub op: Operation,
    pub address: GornAddress,
    pub child: TargetSkeleton,
}

impl TargetSkeleton {
    /// Slots in preorder.
    pub fn slots(&self) -> Vec<&TargetSkeleton> {
        let mut out = vec![self];
        for e in &self.children {
            out.extend(e.child.slots());
        }
        out
    }

    /// Number of derivations `expand` would produce.
    pub fn product_size(&self) -> u128 {
        self.slots()
            .iter()
            .map(|s| s.candidates.len() as u128)
            .fold(1u128, |acc, n| acc.saturating_mul(n))
    }

    /// Every combination of candidates, first slot varying slowest.
    pub fn expand(&self, cap: usize) -> Result<Vec<DerivationTree>> {
        let size = self.product_size();
        if size > cap as u128 {
            return Err(Error::ExpansionCap { size, cap });
        }
        let slots: Vec<Vec<&String>> = self
            .slots()
            .iter()
            .map(|s| s.candidates.iter().collect())
            .collect();
        let mut out = Vec::with_capacity(size as usize);
        let mut choice = vec![0usize; slots.len()];
        if slots.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        loop {
            let mut next = 0;
            out.push(self.build(&slots, &choice, &mut next));
            let mut k = slots.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < slots[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    }

    fn build(&self, slots: &[Vec<&String>], choice: &[usize], next: &mut usize) -> DerivationTree {
        let i = *next;
        *next += 1;
        let mut d = DerivationTree::leaf(&self.tree, slots[i][choice[i]].as_str());
        for e in &self.children {
            d.children.push(DerivationEdge {
                op: e.op,
                address: e.address.clone(),
                child: e.child.build(slots, choice, next),
            });
        }
        d
    }

    /// Indented rendering with candidate sets.
    pub fn to_text(&self) -> String {
        fn go(s: &TargetSkeleton, prefix: String, depth: usize, out: &mut String) {
            let set: Vec<&str> = s.candidates.iter().map(String::as_str).collect();
            out.push_str(&format!(
                "{}{prefix}{} {{{}}}\n",
                "  ".repeat(depth),
                s.tree,
                set.join(", ")
            ));
            for e in &s.children {
                let op = match e.op {
                    Operation::Substitution => "subst",
                    Operation::Adjunction => "adjoin",
                };
                go(&e.child, format!("{op} {}: ", e.address), depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, String::new(), 0, &mut out);
        out
    }
}

/// Per-lemma candidate sets for every slot, keyed by source lemma.
pub fn candidate_table(skel: &TargetSkeleton) -> BTreeMap<String, BTreeSet<String>> {
    skel.slots()
        .into_iter()
        .filter_map(|s| s.source.clone().map(|l| (l, s.candidates.clone())))
        .collect()
}
