//! Derived trees and the feature-checked TAG operations on them.
//!
//! Every derived node remembers the elementary-tree instance and Gorn
//! address it came from, so operations are always addressed against the
//! elementary tree at the base of the host, however much has been spliced
//! into it already.
//!
//! Feature bookkeeping:
//! - substitution unifies the slot's top with the incoming root's top;
//! - adjunction unifies the site's top with the auxiliary root's top and the
//!   site's bottom with the foot's bottom;
//! - finalization unifies top with bottom at every node.
//!
//! Under [`Schedule::Deferred`] the first two are recorded and only carried
//! out by [`finalize`].

use serde::{Deserialize, Serialize};

use crate::avm::{resolve, Bindings, Clash, FeatureStructure, Unifier};
use crate::error::{Error, Result};
use crate::gorn::GornAddress;
use crate::grammar::{Category, ElementaryTree, NodeKind, TreeKind, TreeNode};
use crate::lexicon::Slot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Unify at every combination.
    #[default]
    Eager,
    /// Postpone all unification to finalization.
    Deferred,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Origin {
    pub instance: usize,
    pub tree: String,
    pub lemma: String,
    pub address: GornAddress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Substitution,
    Adjunction,
    Finalize,
}

/// A unification failure located in the derivation. `left` and `right` are
/// the resolved structures that were being unified (host side first), so
/// the clash can be reproduced with a single standalone unify call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub lemma: String,
    pub tree: String,
    pub address: GornAddress,
    pub clash: Clash,
    pub left: FeatureStructure,
    pub right: FeatureStructure,
}

pub type Outcome<T> = Result<std::result::Result<T, Failure>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedNode {
    pub cat: Category,
    pub kind: NodeKind,
    pub top: FeatureStructure,
    pub bottom: FeatureStructure,
    pub adjoinable: bool,
    pub adjoined: bool,
    pub words: Vec<String>,
    pub children: Vec<DerivedNode>,
    pub origin: Origin,
}

impl DerivedNode {
    fn from_tree(node: &TreeNode, origin: &Origin) -> Self {
        DerivedNode {
            cat: node.cat.clone(),
            kind: node.kind,
            top: node.top.clone(),
            bottom: node.bottom.clone(),
            adjoinable: node.adjoinable,
            adjoined: false,
            words: node.words.clone(),
            children: node
                .children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let o = Origin {
                        address: origin.address.child(i as u32 + 1),
                        ..origin.clone()
                    };
                    DerivedNode::from_tree(c, &o)
                })
                .collect(),
            origin: origin.clone(),
        }
    }

    fn find_mut(&mut self, instance: usize, address: &GornAddress) -> Option<&mut DerivedNode> {
        if self.origin.instance == instance && self.origin.address == *address {
            return Some(self);
        }
        self.children
            .iter_mut()
            .find_map(|c| c.find_mut(instance, address))
    }

    fn find_kind_mut(&mut self, kind: NodeKind) -> Option<&mut DerivedNode> {
        if self.kind == kind {
            return Some(self);
        }
        self.children.iter_mut().find_map(|c| c.find_kind_mut(kind))
    }

    fn count(&self) -> usize {
        1 + self.children.iter().map(DerivedNode::count).sum::<usize>()
    }

    fn frontier<'a>(&'a self, out: &mut Vec<&'a str>) {
        if matches!(self.kind, NodeKind::Anchor | NodeKind::Terminal) {
            out.extend(self.words.iter().map(String::as_str));
        }
        for c in &self.children {
            c.frontier(out);
        }
    }

    fn first_of_kind(&self, kind: NodeKind) -> Option<&DerivedNode> {
        if self.kind == kind {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.first_of_kind(kind))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pending {
    stage: Stage,
    /// Host site the constraint came from, for failure reports.
    site: Origin,
    target_instance: usize,
    target_address: GornAddress,
    slot: Slot,
    fs: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedTree {
    pub root: DerivedNode,
    pub kind: TreeKind,
    /// Instance at the base of this tree; operation addresses refer to it.
    pub base: Origin,
    pending: Vec<Pending>,
}

impl DerivedTree {
    /// Wraps an (anchored) elementary tree as instance `instance`.
    pub fn from_elementary(tree: &ElementaryTree, instance: usize, lemma: &str) -> Self {
        let origin = Origin {
            instance,
            tree: tree.name.clone(),
            lemma: lemma.to_owned(),
            address: GornAddress::root(),
        };
        DerivedTree {
            root: DerivedNode::from_tree(&tree.root, &origin),
            kind: tree.kind,
            base: origin,
            pending: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    /// Anchor and terminal words, left to right.
    pub fn yield_tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.root.frontier(&mut out);
        out.into_iter().map(str::to_owned).collect()
    }

    fn site(&mut self, address: &GornAddress) -> Result<&mut DerivedNode> {
        let (instance, tree) = (self.base.instance, self.base.tree.clone());
        self.root
            .find_mut(instance, address)
            .ok_or(Error::DanglingAddress {
                tree,
                address: address.clone(),
            })
    }
}

fn unify_or_fail(
    unifier: &Unifier,
    left: &FeatureStructure,
    right: &FeatureStructure,
    env: &Bindings,
    stage: Stage,
    site: &Origin,
) -> Outcome<(FeatureStructure, Bindings)> {
    Ok(match unifier.unify(left, right, env)? {
        Ok(r) => Ok(r),
        Err(clash) => Err(Failure {
            stage,
            lemma: site.lemma.clone(),
            tree: site.tree.clone(),
            address: site.address.clone(),
            clash,
            left: resolve(left, env),
            right: resolve(right, env),
        }),
    })
}

macro_rules! try_unify {
    ($e:expr) => {
        match $e? {
            Ok(v) => v,
            Err(f) => return Ok(Err(f)),
        }
    };
}

/// Replaces the substitution leaf at `addr` (in the host's base tree) with
/// the root of `sub`.
pub fn substitute(
    host: &DerivedTree,
    addr: &GornAddress,
    sub: &DerivedTree,
    env: &Bindings,
    schedule: Schedule,
) -> Outcome<(DerivedTree, Bindings)> {
    if sub.kind != TreeKind::Initial {
        return Err(Error::TreeKindMismatch {
            tree: sub.base.tree.clone(),
            expected: "initial",
            found: sub.kind.name(),
        });
    }
    let mut out = host.clone();
    let tree = out.base.tree.clone();
    let leaf = out.site(addr)?.clone();
    if leaf.kind != NodeKind::Substitution {
        return Err(Error::NotSubstitutionNode {
            tree,
            address: addr.clone(),
        });
    }
    if leaf.cat != sub.root.cat {
        return Err(Error::CategoryMismatch {
            tree,
            address: addr.clone(),
            expected: leaf.cat.to_string(),
            found: sub.root.cat.to_string(),
        });
    }
    let site = leaf.origin;
    let mut incoming = sub.root.clone();
    let mut env = env.clone();
    match schedule {
        Schedule::Eager => {
            let (top, e) = try_unify!(unify_or_fail(
                &Unifier::default(),
                &leaf.top,
                &incoming.top,
                &env,
                Stage::Substitution,
                &site
            ));
            incoming.top = top;
            env = e;
        }
        Schedule::Deferred => out.pending.push(Pending {
            stage: Stage::Substitution,
            site,
            target_instance: incoming.origin.instance,
            target_address: incoming.origin.address.clone(),
            slot: Slot::Top,
            fs: leaf.top.clone(),
        }),
    }
    *out.site(addr)? = incoming;
    out.pending.extend(sub.pending.iter().cloned());
    Ok(Ok((out, env)))
}

/// Splices `aux` in at the interior node `addr` of the host's base tree; the
/// node's subtree ends up below the foot.
pub fn adjoin(
    host: &DerivedTree,
    addr: &GornAddress,
    aux: &DerivedTree,
    env: &Bindings,
    schedule: Schedule,
) -> Outcome<(DerivedTree, Bindings)> {
    if aux.kind != TreeKind::Auxiliary {
        return Err(Error::TreeKindMismatch {
            tree: aux.base.tree.clone(),
            expected: "auxiliary",
            found: aux.kind.name(),
        });
    }
    let mut out = host.clone();
    let tree = out.base.tree.clone();
    let site_node = out.site(addr)?;
    if site_node.adjoined {
        return Err(Error::AlreadyAdjoined {
            tree,
            address: addr.clone(),
        });
    }
    if site_node.kind != NodeKind::Interior || !site_node.adjoinable {
        return Err(Error::NotAdjoinable {
            tree,
            address: addr.clone(),
        });
    }
    if site_node.cat != aux.root.cat {
        return Err(Error::CategoryMismatch {
            tree,
            address: addr.clone(),
            expected: site_node.cat.to_string(),
            found: aux.root.cat.to_string(),
        });
    }
    let site = site_node.origin.clone();
    let site_top = site_node.top.clone();
    let site_bottom = site_node.bottom.clone();
    let moved_children = std::mem::take(&mut site_node.children);

    let mut spliced = aux.root.clone();
    let foot = spliced
        .first_of_kind(NodeKind::Foot)
        .cloned()
        .ok_or_else(|| Error::Format(format!("auxiliary tree `{}` has no foot", aux.base.tree)))?;
    let mut env = env.clone();
    let unifier = Unifier::default();
    let mut pending = Vec::new();
    let (root_top, foot_bottom) = match schedule {
        Schedule::Eager => {
            let (t, e) = try_unify!(unify_or_fail(
                &unifier,
                &site_top,
                &spliced.top,
                &env,
                Stage::Adjunction,
                &site
            ));
            let (b, e) = try_unify!(unify_or_fail(
                &unifier,
                &site_bottom,
                &foot.bottom,
                &e,
                Stage::Adjunction,
                &site
            ));
            env = e;
            (t, b)
        }
        Schedule::Deferred => {
            pending.push(Pending {
                stage: Stage::Adjunction,
                site: site.clone(),
                target_instance: spliced.origin.instance,
                target_address: spliced.origin.address.clone(),
                slot: Slot::Top,
                fs: site_top,
            });
            pending.push(Pending {
                stage: Stage::Adjunction,
                site: site.clone(),
                target_instance: site.instance,
                target_address: site.address.clone(),
                slot: Slot::Bottom,
                fs: site_bottom,
            });
            (spliced.top.clone(), foot.bottom.clone())
        }
    };
    spliced.top = root_top;
    let foot_node = spliced
        .find_kind_mut(NodeKind::Foot)
        .expect("foot located above");
    *foot_node = DerivedNode {
        cat: foot.cat.clone(),
        kind: NodeKind::Interior,
        top: foot.top.clone(),
        bottom: foot_bottom,
        adjoinable: false,
        adjoined: true,
        words: Vec::new(),
        children: moved_children,
        origin: site,
    };
    *out.site(addr)? = spliced;
    out.pending.extend(aux.pending.iter().cloned());
    out.pending.extend(pending);
    Ok(Ok((out, env)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedNode {
    pub cat: Category,
    pub features: FeatureStructure,
    pub words: Vec<String>,
    pub origin: Origin,
    pub children: Vec<CheckedNode>,
}

impl CheckedNode {
    fn frontier<'a>(&'a self, out: &mut Vec<&'a str>) {
        out.extend(self.words.iter().map(String::as_str));
        for c in &self.children {
            c.frontier(out);
        }
    }
}

/// A derived tree whose top and bottom structures have been collapsed and
/// resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedTree {
    pub root: CheckedNode,
    pub env: Bindings,
}

impl CheckedTree {
    pub fn yield_tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.root.frontier(&mut out);
        out.into_iter().map(str::to_owned).collect()
    }

    /// Bracketed rendering with features, one node per line.
    pub fn to_text(&self) -> String {
        fn go(n: &CheckedNode, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(n.cat.as_str());
            if !n.words.is_empty() {
                out.push_str(&format!(" \"{}\"", n.words.join(" ")));
            }
            if !n.features.is_empty() {
                out.push_str(&format!(" {}", n.features));
            }
            out.push('\n');
            for c in &n.children {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(&self.root, 0, &mut out);
        out
    }
}

/// Carries out deferred constraints, then unifies top with bottom at every
/// node in preorder.
pub fn finalize(tree: &DerivedTree, env: &Bindings) -> Outcome<CheckedTree> {
    if let Some(open) = tree.root.first_of_kind(NodeKind::Substitution) {
        return Err(Error::UnfilledSlot {
            tree: open.origin.tree.clone(),
            lemma: open.origin.lemma.clone(),
            address: open.origin.address.clone(),
        });
    }
    let unifier = Unifier::default();
    let mut root = tree.root.clone();
    let mut env = env.clone();
    for p in &tree.pending {
        let node = root
            .find_mut(p.target_instance, &p.target_address)
            .ok_or_else(|| Error::DanglingAddress {
                tree: p.site.tree.clone(),
                address: p.target_address.clone(),
            })?;
        let target = match p.slot {
            Slot::Top => &mut node.top,
            Slot::Bottom => &mut node.bottom,
        };
        let (merged, e) = try_unify!(unify_or_fail(
            &unifier, &p.fs, target, &env, p.stage, &p.site
        ));
        *target = merged;
        env = e;
    }

    fn collapse(node: &DerivedNode, unifier: &Unifier, env: &mut Bindings) -> Outcome<CheckedNode> {
        let (features, e) = try_unify!(unify_or_fail(
            unifier,
            &node.top,
            &node.bottom,
            env,
            Stage::Finalize,
            &node.origin
        ));
        *env = e;
        let mut children = Vec::with_capacity(node.children.len());
        for c in &node.children {
            children.push(try_unify!(collapse(c, unifier, env)));
        }
        let words = if matches!(node.kind, NodeKind::Anchor | NodeKind::Terminal) {
            node.words.clone()
        } else {
            Vec::new()
        };
        Ok(Ok(CheckedNode {
            cat: node.cat.clone(),
            features,
            words,
            origin: node.origin.clone(),
            children,
        }))
    }

    fn resolve_all(node: &mut CheckedNode, env: &Bindings) {
        node.features = resolve(&node.features, env);
        for c in &mut node.children {
            resolve_all(c, env);
        }
    }

    let mut checked = try_unify!(collapse(&root, &unifier, &mut env));
    resolve_all(&mut checked, &env);
    Ok(Ok(CheckedTree { root: checked, env }))
}
