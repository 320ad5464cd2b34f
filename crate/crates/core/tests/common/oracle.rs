//! Reference implementations used to check the engine.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use lextag_core::derivation::{replay_checked, DerivationEdge};
use lextag_core::grammar::{NodeKind, TreeKind, TreeNode};
use lextag_core::{
    DerivationTree, Error, FeatureStructure, FeatureValue, GornAddress, LanguageResources,
    LexicalEntry, Operation, Schedule,
};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Leaf {
    Atom(String),
    Empty,
}

fn flatten(fs: &FeatureStructure, prefix: &mut Vec<String>, out: &mut BTreeMap<Vec<String>, Leaf>) {
    for (k, v) in fs.iter() {
        prefix.push(k.clone());
        match v {
            FeatureValue::Atom(a) => {
                out.insert(prefix.clone(), Leaf::Atom(a.clone()));
            }
            FeatureValue::Struct(s) if s.is_empty() => {
                out.insert(prefix.clone(), Leaf::Empty);
            }
            FeatureValue::Struct(s) => flatten(s, prefix, out),
            FeatureValue::Var(v) => panic!("reference unifier takes ground input, found {v}"),
        }
        prefix.pop();
    }
}

fn insert_path(fs: &mut FeatureStructure, path: &[String], leaf: &Leaf) {
    let (head, rest) = path.split_first().expect("paths are nonempty");
    if rest.is_empty() {
        let v = match leaf {
            Leaf::Atom(a) => FeatureValue::atom(a.clone()),
            Leaf::Empty => match fs.get(head) {
                Some(existing) => existing.clone(),
                None => FeatureValue::Struct(FeatureStructure::new()),
            },
        };
        fs.insert(head.clone(), v);
        return;
    }
    let mut inner = match fs.get(head) {
        Some(FeatureValue::Struct(s)) => s.clone(),
        _ => FeatureStructure::new(),
    };
    insert_path(&mut inner, rest, leaf);
    fs.insert(head.clone(), FeatureValue::Struct(inner));
}

fn is_strict_prefix(p: &[String], q: &[String]) -> bool {
    p.len() < q.len() && q[..p.len()] == *p
}

/// Definitional unification of ground structures: the union of both path
/// sets, failing at the lexicographically first path where an atom meets a
/// different atom or a structure.
pub fn reference_unify(
    a: &FeatureStructure,
    b: &FeatureStructure,
) -> Result<FeatureStructure, Vec<String>> {
    let (mut pa, mut pb) = (BTreeMap::new(), BTreeMap::new());
    flatten(a, &mut Vec::new(), &mut pa);
    flatten(b, &mut Vec::new(), &mut pb);
    let mut clashes: BTreeSet<Vec<String>> = BTreeSet::new();
    for (p, x) in &pa {
        match (x, pb.get(p)) {
            (Leaf::Atom(x), Some(Leaf::Atom(y))) if x != y => {
                clashes.insert(p.clone());
            }
            (Leaf::Atom(_), Some(Leaf::Empty)) | (Leaf::Empty, Some(Leaf::Atom(_))) => {
                clashes.insert(p.clone());
            }
            _ => {}
        }
    }
    for (left, right) in [(&pa, &pb), (&pb, &pa)] {
        for (p, x) in left {
            if matches!(x, Leaf::Atom(_)) && right.keys().any(|q| is_strict_prefix(p, q)) {
                clashes.insert(p.clone());
            }
        }
    }
    if let Some(first) = clashes.into_iter().next() {
        return Err(first);
    }
    let mut out = FeatureStructure::new();
    for (p, leaf) in pa.iter().chain(pb.iter()) {
        insert_path(&mut out, p, leaf);
    }
    Ok(out)
}

/// Exhaustive derivation enumeration: every derivation whose trees' words
/// fit in the input's token multiset, using at most `bound` elementary
/// trees, replayed eagerly and kept if its yield is exactly `tokens`.
pub fn brute_force_parse(
    tokens: &[String],
    res: &LanguageResources,
    start: &str,
    bound: usize,
) -> Result<Vec<DerivationTree>, Error> {
    let mut budget: BTreeMap<String, usize> = BTreeMap::new();
    for t in tokens {
        *budget.entry(t.clone()).or_default() += 1;
    }
    let mut pairs = Vec::new();
    for e in res.lexicon.entries() {
        for name in &e.trees {
            pairs.push((e, res.grammar.tree(name)?));
        }
    }
    let gen = Generator {
        pairs,
        exceeded: Cell::new(false),
    };
    let mut found = BTreeMap::new();
    for (d, _, _) in gen.trees(start, TreeKind::Initial, &budget, bound) {
        if let Ok(checked) = replay_checked(&d, res, Schedule::Eager)? {
            if checked.yield_tokens() == tokens {
                found.insert(d.canonical(), d);
            }
        }
    }
    if gen.exceeded.get() {
        return Err(Error::BoundExceeded(bound));
    }
    Ok(found.into_values().collect())
}

type Budget = BTreeMap<String, usize>;

struct Generator<'a> {
    pairs: Vec<(&'a LexicalEntry, &'a lextag_core::ElementaryTree)>,
    exceeded: Cell<bool>,
}

fn take(budget: &Budget, words: &[String]) -> Option<Budget> {
    let mut b = budget.clone();
    for w in words {
        let n = b.get_mut(w)?;
        if *n == 0 {
            return None;
        }
        *n -= 1;
    }
    Some(b)
}

fn sites(node: &TreeNode, addr: GornAddress, out: &mut Vec<(GornAddress, Operation, String)>) {
    match node.kind {
        NodeKind::Substitution => {
            out.push((addr.clone(), Operation::Substitution, node.cat.to_string()))
        }
        NodeKind::Interior if node.adjoinable => {
            out.push((addr.clone(), Operation::Adjunction, node.cat.to_string()))
        }
        _ => {}
    }
    for (i, c) in node.children.iter().enumerate() {
        sites(c, addr.child(i as u32 + 1), out);
    }
}

impl Generator<'_> {
    /// Derivations rooted in a tree of `kind` with root category `cat`,
    /// with the budget left over and the number of trees used.
    fn trees(
        &self,
        cat: &str,
        kind: TreeKind,
        budget: &Budget,
        room: usize,
    ) -> Vec<(DerivationTree, Budget, usize)> {
        let mut out = Vec::new();
        for (entry, tree) in &self.pairs {
            if tree.kind != kind || tree.root.cat.as_str() != cat {
                continue;
            }
            let mut words = entry.surface.clone();
            words.extend(tree.terminal_words().into_iter().map(str::to_owned));
            let Some(left) = take(budget, &words) else {
                continue;
            };
            if room == 0 {
                self.exceeded.set(true);
                continue;
            }
            let mut all = Vec::new();
            sites(&tree.root, GornAddress::root(), &mut all);
            let base = DerivationTree::for_entry(&tree.name, entry);
            self.fill(&base, &all, left, room - 1, 1, &mut out);
        }
        out
    }

    fn fill(
        &self,
        partial: &DerivationTree,
        remaining: &[(GornAddress, Operation, String)],
        budget: Budget,
        room: usize,
        used: usize,
        out: &mut Vec<(DerivationTree, Budget, usize)>,
    ) {
        let Some(((addr, op, cat), rest)) = remaining.split_first() else {
            let mut d = partial.clone();
            d.canonicalize();
            out.push((d, budget, used));
            return;
        };
        let kind = match op {
            Operation::Substitution => TreeKind::Initial,
            Operation::Adjunction => {
                self.fill(partial, rest, budget.clone(), room, used, out);
                TreeKind::Auxiliary
            }
        };
        for (child, left, n) in self.trees(cat, kind, &budget, room) {
            let mut next = partial.clone();
            next.children.push(DerivationEdge {
                op: *op,
                address: addr.clone(),
                child,
            });
            self.fill(&next, rest, left, room - n, used + n, out);
        }
    }
}

/// Renames variables by order of first occurrence.
pub fn alpha_normal(fs: &FeatureStructure) -> FeatureStructure {
    fn go(fs: &FeatureStructure, names: &mut BTreeMap<String, String>) -> FeatureStructure {
        fs.iter()
            .map(|(k, v)| {
                let v = match v {
                    FeatureValue::Var(x) => {
                        let n = names.len();
                        FeatureValue::var(
                            names
                                .entry(x.clone())
                                .or_insert_with(|| format!("?_{n}"))
                                .clone(),
                        )
                    }
                    FeatureValue::Struct(s) => FeatureValue::Struct(go(s, names)),
                    a => a.clone(),
                };
                (k.clone(), v)
            })
            .collect()
    }
    go(fs, &mut BTreeMap::new())
}
