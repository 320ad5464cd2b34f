//! Derivation trees: which elementary trees combined where.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::avm::{Bindings, Unifier};
use crate::derived::{adjoin, finalize, substitute, CheckedTree, DerivedTree, Outcome, Schedule};
use crate::error::{Error, Result};
use crate::gorn::GornAddress;
use crate::lexicon::{anchor, LexicalEntry};
use crate::resources::LanguageResources;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Substitution,
    Adjunction,
}

impl Operation {
    fn short(self) -> &'static str {
        match self {
            Operation::Substitution => "subst",
            Operation::Adjunction => "adjoin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivationTree {
    pub tree: String,
    pub lemma: String,
    /// Lexicon sense, when the lemma is split into several.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<String>,
    /// Surface form of the anchor; unset in target derivations until they
    /// are realized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<Vec<String>>,
    #[serde(default)]
    pub children: Vec<DerivationEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivationEdge {
    pub op: Operation,
    pub address: GornAddress,
    pub child: DerivationTree,
}

impl DerivationTree {
    pub fn leaf(tree: impl Into<String>, lemma: impl Into<String>) -> Self {
        DerivationTree {
            tree: tree.into(),
            lemma: lemma.into(),
            sense: None,
            surface: None,
            children: Vec::new(),
        }
    }

    pub fn for_entry(tree: &str, entry: &LexicalEntry) -> Self {
        DerivationTree {
            tree: tree.to_owned(),
            lemma: entry.lemma.clone(),
            sense: entry.sense_label().map(str::to_owned),
            surface: Some(entry.surface.clone()),
            children: Vec::new(),
        }
    }

    /// Sorts children by address, then operation, recursively.
    pub fn canonicalize(&mut self) {
        for e in &mut self.children {
            e.child.canonicalize();
        }
        self.children
            .sort_by(|a, b| (&a.address, a.op).cmp(&(&b.address, b.op)));
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|e| e.child.size()).sum::<usize>()
    }

    /// Lemmas in preorder.
    pub fn lemmas(&self) -> Vec<&str> {
        let mut out = vec![self.lemma.as_str()];
        for e in &self.children {
            out.extend(e.child.lemmas());
        }
        out
    }

    pub fn nodes(&self) -> Vec<&DerivationTree> {
        let mut out = vec![self];
        for e in &self.children {
            out.extend(e.child.nodes());
        }
        out
    }

    fn label(&self) -> String {
        let mut s = format!("{}[{}", self.tree, self.lemma);
        if let Some(sense) = &self.sense {
            let _ = write!(s, "/{sense}");
        }
        s.push(']');
        if let Some(surface) = &self.surface {
            let _ = write!(s, " \"{}\"", surface.join(" "));
        }
        s
    }

    /// Compact single-line form used for ordering and set comparison.
    pub fn canonical(&self) -> String {
        let mut s = self.label();
        if !self.children.is_empty() {
            s.push('(');
            for (i, e) in self.children.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                let _ = write!(s, "{}@{} {}", e.op.short(), e.address, e.child.canonical());
            }
            s.push(')');
        }
        s
    }

    /// Indented multi-line rendering.
    pub fn to_text(&self) -> String {
        fn go(
            t: &DerivationTree,
            prefix: Option<(Operation, &GornAddress)>,
            depth: usize,
            out: &mut String,
        ) {
            out.push_str(&"  ".repeat(depth));
            if let Some((op, addr)) = prefix {
                let _ = write!(out, "{} {addr}: ", op.short());
            }
            out.push_str(&t.label());
            out.push('\n');
            for e in &t.children {
                go(&e.child, Some((e.op, &e.address)), depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, None, 0, &mut out);
        out
    }
}

/// Finds the lexical entry a derivation node names.
pub fn entry_for<'a>(
    node: &DerivationTree,
    res: &'a LanguageResources,
) -> Result<&'a LexicalEntry> {
    res.lexicon
        .entries_for(&node.lemma, &node.tree)
        .find(|e| {
            node.sense.as_deref().is_none_or(|s| s == e.sense)
                && node.surface.as_ref().is_none_or(|s| *s == e.surface)
        })
        .ok_or_else(|| Error::MissingEntry {
            lemma: node.lemma.clone(),
            tree: node.tree.clone(),
        })
}

/// Rebuilds the derived tree: children first, then their combination into
/// the parent's anchored instance.
pub fn replay(
    deriv: &DerivationTree,
    res: &LanguageResources,
    schedule: Schedule,
) -> Outcome<(DerivedTree, Bindings)> {
    let mut next_instance = 0;
    replay_node(deriv, res, schedule, &mut next_instance)
}

fn replay_node(
    node: &DerivationTree,
    res: &LanguageResources,
    schedule: Schedule,
    next_instance: &mut usize,
) -> Outcome<(DerivedTree, Bindings)> {
    let entry = entry_for(node, res)?;
    let tree = res.grammar.tree(&node.tree)?;
    let instance = *next_instance;
    *next_instance += 1;
    let anchored = anchor(entry, tree, instance)?;
    let mut host = DerivedTree::from_elementary(&anchored, instance, &entry.lemma);
    let mut env = Bindings::new();
    for edge in &node.children {
        let (child, child_env) = match replay_node(&edge.child, res, schedule, next_instance)? {
            Ok(r) => r,
            Err(f) => return Ok(Err(f)),
        };
        env = match Unifier::default().merge_bindings(&env, &child_env)? {
            Ok(e) => e,
            Err(clash) => {
                return Err(Error::Format(format!(
                    "instance variables overlap: {clash}"
                )))
            }
        };
        let combined = match edge.op {
            crate::derivation::Operation::Substitution => {
                substitute(&host, &edge.address, &child, &env, schedule)?
            }
            crate::derivation::Operation::Adjunction => {
                adjoin(&host, &edge.address, &child, &env, schedule)?
            }
        };
        match combined {
            Ok((t, e)) => {
                host = t;
                env = e;
            }
            Err(f) => return Ok(Err(f)),
        }
    }
    Ok(Ok((host, env)))
}

/// Replays and finalizes.
pub fn replay_checked(
    deriv: &DerivationTree,
    res: &LanguageResources,
    schedule: Schedule,
) -> Outcome<CheckedTree> {
    match replay(deriv, res, schedule)? {
        Ok((tree, env)) => finalize(&tree, &env),
        Err(f) => Ok(Err(f)),
    }
}
