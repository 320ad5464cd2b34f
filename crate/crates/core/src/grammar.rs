//! Elementary trees and their well-formedness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::avm::{FeatureStructure, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::gorn::GornAddress;

/// Syntactic category symbol such as `S`, `NP` or `V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Category(String);

impl Category {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if s.is_empty() {
            Err(Error::Format("empty category".into()))
        } else {
            Ok(Category(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Category {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Category::new(s)
    }
}

impl From<Category> for String {
    fn from(c: Category) -> String {
        c.0
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Interior,
    Substitution,
    Foot,
    Anchor,
    Terminal,
}

impl NodeKind {
    pub fn is_leaf(self) -> bool {
        self != NodeKind::Interior
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    Initial,
    Auxiliary,
}

impl TreeKind {
    pub fn name(self) -> &'static str {
        match self {
            TreeKind::Initial => "initial",
            TreeKind::Auxiliary => "auxiliary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawNode")]
pub struct TreeNode {
    pub cat: Category,
    pub kind: NodeKind,
    pub top: FeatureStructure,
    pub bottom: FeatureStructure,
    pub adjoinable: bool,
    /// Surface tokens: the fixed word of a terminal, or the lexical anchor's
    /// tokens once the tree is anchored.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeNode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    cat: Category,
    kind: NodeKind,
    #[serde(default)]
    top: FeatureStructure,
    #[serde(default)]
    bottom: FeatureStructure,
    adjoinable: Option<bool>,
    word: Option<String>,
    #[serde(default)]
    words: Vec<String>,
    #[serde(default)]
    children: Vec<TreeNode>,
}

impl From<RawNode> for TreeNode {
    fn from(raw: RawNode) -> Self {
        let mut words = raw.words;
        words.extend(raw.word);
        TreeNode {
            adjoinable: raw.adjoinable.unwrap_or(raw.kind == NodeKind::Interior),
            cat: raw.cat,
            kind: raw.kind,
            top: raw.top,
            bottom: raw.bottom,
            words,
            children: raw.children,
        }
    }
}

impl TreeNode {
    fn walk<'a>(&'a self, addr: GornAddress, out: &mut Vec<(GornAddress, &'a TreeNode)>) {
        out.push((addr.clone(), self));
        for (i, c) in self.children.iter().enumerate() {
            c.walk(addr.child(i as u32 + 1), out);
        }
    }

    pub(crate) fn at_steps_mut(&mut self, steps: &[u32]) -> Option<&mut TreeNode> {
        match steps.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get_mut(i as usize - 1)?.at_steps_mut(rest),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryTree {
    pub name: String,
    #[serde(default)]
    pub language: String,
    pub kind: TreeKind,
    pub root: TreeNode,
}

impl ElementaryTree {
    pub fn node_at(&self, addr: &GornAddress) -> Result<&TreeNode> {
        let dangling = || Error::DanglingAddress {
            tree: self.name.clone(),
            address: addr.clone(),
        };
        let mut node = &self.root;
        for &i in addr.steps().ok_or_else(dangling)? {
            node = node.children.get(i as usize - 1).ok_or_else(dangling)?;
        }
        Ok(node)
    }

    pub fn node_at_mut(&mut self, addr: &GornAddress) -> Result<&mut TreeNode> {
        let name = self.name.clone();
        addr.steps()
            .and_then(|s| self.root.at_steps_mut(s))
            .ok_or(Error::DanglingAddress {
                tree: name,
                address: addr.clone(),
            })
    }

    /// All nodes in preorder with their addresses.
    pub fn nodes(&self) -> Vec<(GornAddress, &TreeNode)> {
        let mut out = Vec::new();
        self.root.walk(GornAddress::root(), &mut out);
        out
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> Vec<(GornAddress, &TreeNode)> {
        self.nodes()
            .into_iter()
            .filter(|(_, n)| n.kind == kind)
            .collect()
    }

    pub fn anchor_address(&self) -> Option<GornAddress> {
        self.nodes_of_kind(NodeKind::Anchor)
            .into_iter()
            .next()
            .map(|(a, _)| a)
    }

    pub fn foot_address(&self) -> Option<GornAddress> {
        self.nodes_of_kind(NodeKind::Foot)
            .into_iter()
            .next()
            .map(|(a, _)| a)
    }

    /// Fixed co-anchor words in frontier order.
    pub fn terminal_words(&self) -> Vec<&str> {
        self.nodes_of_kind(NodeKind::Terminal)
            .into_iter()
            .flat_map(|(_, n)| n.words.iter().map(String::as_str))
            .collect()
    }

    /// Makes foot and substitution nodes carry a single structure in both
    /// slots.
    pub fn normalize(&mut self) -> std::result::Result<(), String> {
        fn go(node: &mut TreeNode, addr: GornAddress) -> std::result::Result<(), String> {
            if matches!(node.kind, NodeKind::Foot | NodeKind::Substitution) {
                let merged = match crate::avm::unify(&node.top, &node.bottom, &Default::default()) {
                    Ok(Ok((fs, env))) => crate::avm::resolve(&fs, &env),
                    Ok(Err(c)) => return Err(format!("top/bottom clash at {addr}: {c}")),
                    Err(e) => return Err(e.to_string()),
                };
                node.top = merged.clone();
                node.bottom = merged;
            }
            for (i, c) in node.children.iter_mut().enumerate() {
                go(c, addr.child(i as u32 + 1))?;
            }
            Ok(())
        }
        go(&mut self.root, GornAddress::root())
    }

    /// Every violated well-formedness invariant, with its address.
    pub fn validate(&self) -> Vec<Violation> {
        let loc = |addr: Option<&GornAddress>| match addr {
            Some(a) => format!("tree {} @ {a}", self.name),
            None => format!("tree {}", self.name),
        };
        let mut out = Vec::new();
        let nodes = self.nodes();
        let anchors: Vec<_> = nodes
            .iter()
            .filter(|(_, n)| n.kind == NodeKind::Anchor)
            .collect();
        let feet: Vec<_> = nodes
            .iter()
            .filter(|(_, n)| n.kind == NodeKind::Foot)
            .collect();

        match anchors.len() {
            0 => out.push(Violation::new(
                ViolationKind::MissingAnchor,
                loc(None),
                "no anchor node",
            )),
            1 => {}
            n => out.push(Violation::new(
                ViolationKind::MultipleAnchors,
                loc(Some(&anchors[1].0)),
                format!("{n} anchor nodes"),
            )),
        }
        match (self.kind, feet.len()) {
            (TreeKind::Auxiliary, 0) => out.push(Violation::new(
                ViolationKind::MissingFoot,
                loc(None),
                "auxiliary tree has no foot node",
            )),
            (TreeKind::Auxiliary, 1) => {
                let (addr, foot) = feet[0];
                if foot.cat != self.root.cat {
                    out.push(Violation::new(
                        ViolationKind::FootCategory,
                        loc(Some(addr)),
                        format!("foot {} differs from root {}", foot.cat, self.root.cat),
                    ));
                }
            }
            (TreeKind::Auxiliary, n) => out.push(Violation::new(
                ViolationKind::MultipleFeet,
                loc(Some(&feet[1].0)),
                format!("{n} foot nodes"),
            )),
            (TreeKind::Initial, 0) => {}
            (TreeKind::Initial, _) => out.push(Violation::new(
                ViolationKind::UnexpectedFoot,
                loc(Some(&feet[0].0)),
                "initial tree has a foot node",
            )),
        }
        for (addr, node) in &nodes {
            if node.kind.is_leaf() && !node.children.is_empty() {
                out.push(Violation::new(
                    ViolationKind::LeafWithChildren,
                    loc(Some(addr)),
                    format!("{:?} node has children", node.kind),
                ));
            }
            if node.kind == NodeKind::Interior && node.children.is_empty() {
                out.push(Violation::new(
                    ViolationKind::EmptyInterior,
                    loc(Some(addr)),
                    "interior node without children",
                ));
            }
            if node.kind == NodeKind::Terminal && node.words.is_empty() {
                out.push(Violation::new(
                    ViolationKind::MissingWord,
                    loc(Some(addr)),
                    "terminal node without a word",
                ));
            }
            for fs in [&node.top, &node.bottom] {
                if let Err(e) = fs.check(DEFAULT_MAX_DEPTH) {
                    out.push(Violation::new(
                        ViolationKind::BadFeatures,
                        loc(Some(addr)),
                        e.to_string(),
                    ));
                }
            }
        }
        out
    }
}

/// The trees of one language, in file order.
#[derive(Debug, Clone, Default)]
pub struct Grammar {
    pub language: String,
    trees: Vec<ElementaryTree>,
    index: BTreeMap<String, usize>,
}

impl Grammar {
    pub fn new(language: impl Into<String>, trees: Vec<ElementaryTree>) -> Self {
        let mut index = BTreeMap::new();
        for (i, t) in trees.iter().enumerate() {
            index.entry(t.name.clone()).or_insert(i);
        }
        Grammar {
            language: language.into(),
            trees,
            index,
        }
    }

    pub fn tree(&self, name: &str) -> Result<&ElementaryTree> {
        self.index
            .get(name)
            .map(|&i| &self.trees[i])
            .ok_or_else(|| Error::UnknownTree(name.to_owned()))
    }

    pub fn trees(&self) -> &[ElementaryTree] {
        &self.trees
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, t) in self.trees.iter().enumerate() {
            if self.index[&t.name] != i {
                out.push(Violation::new(
                    ViolationKind::DuplicateTree,
                    format!("tree {}", t.name),
                    "tree name defined more than once",
                ));
            }
            out.extend(t.validate());
        }
        out
    }
}
