//! Chart parser for lexicalized TAG.
//!
//! Parsing runs in two phases. Recognition is a bottom-up dotted-tree chart
//! over the anchored tree instances selected by the input; it ignores
//! features and records every way each item was built. Extraction then walks
//! the resulting forest from the goal items, assembling each tree instance's
//! attachments with the feature-checked grammar operations and dropping any
//! combination that fails to unify.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::rc::Rc;

use crate::avm::{Bindings, Unifier};
use crate::derivation::{replay_checked, DerivationEdge, DerivationTree, Operation};
use crate::derived::{adjoin, finalize, substitute, CheckedTree, DerivedTree, Schedule};
use crate::error::{Error, Result};
use crate::gorn::GornAddress;
use crate::grammar::{Category, ElementaryTree, NodeKind, TreeKind};
use crate::lexicon::{anchor, LexicalEntry, Segment};
use crate::resources::LanguageResources;

const EXTRA_PUNCTUATION: &[char] = &[
    '。', '、', '，', '！', '？', '；', '：', '「', '」', '『', '』',
];

/// Splits on whitespace and strips punctuation from both ends of each token.
pub fn tokenize(sentence: &str) -> Result<Vec<String>> {
    let tokens: Vec<String> = sentence
        .split_whitespace()
        .map(|t| {
            t.trim_matches(|c: char| c.is_ascii_punctuation() || EXTRA_PUNCTUATION.contains(&c))
        })
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect();
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(tokens)
}

/// A tree anchored by one lexical entry at a fixed input span.
#[derive(Debug, Clone)]
pub struct AnchoredTree<'a> {
    pub entry: &'a LexicalEntry,
    pub tree: &'a ElementaryTree,
    pub start: usize,
    pub len: usize,
}

/// Every (entry, tree) pairing for every span matched by lookup.
pub fn select_trees<'a>(
    tokens: &[String],
    res: &'a LanguageResources,
) -> Result<Vec<AnchoredTree<'a>>> {
    let mut out = Vec::new();
    for segment in res.lexicon.lookup(tokens, res.terminal_words())? {
        if let Segment::Entries {
            start,
            len,
            entries,
        } = segment
        {
            for entry in entries {
                for name in &entry.trees {
                    out.push(AnchoredTree {
                        entry,
                        tree: res.grammar.tree(name)?,
                        start,
                        len,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Root category of complete parses.
    pub start: String,
    pub schedule: Schedule,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            start: "S".to_owned(),
            schedule: Schedule::Eager,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parse {
    pub derivation: DerivationTree,
    pub derived: CheckedTree,
}

/// All complete derivations of `tokens`, ordered by canonical form.
pub fn parse(
    tokens: &[String],
    res: &LanguageResources,
    opts: &ParseOptions,
) -> Result<Vec<Parse>> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    let selected = select_trees(tokens, res)?;
    let mut chart = Chart::new(tokens, &selected);
    chart.recognize();
    let goals = chart.goals(&opts.start);

    let mut anchored = Vec::with_capacity(selected.len());
    for (i, s) in selected.iter().enumerate() {
        anchored.push(anchor(s.entry, s.tree, i)?);
    }
    let mut extractor = Extractor {
        chart: &chart,
        anchored: &anchored,
        schedule: opts.schedule,
        edges: HashMap::new(),
        results: HashMap::new(),
    };

    let mut found: BTreeMap<String, Parse> = BTreeMap::new();
    for goal in goals {
        for r in extractor.instance_results(goal)?.iter() {
            let checked = match (&r.built, opts.schedule) {
                (Some((tree, env)), Schedule::Eager) => finalize(tree, env)?,
                _ => replay_checked(&r.derivation, res, opts.schedule)?,
            };
            if let Ok(derived) = checked {
                found
                    .entry(r.derivation.canonical())
                    .or_insert_with(|| Parse {
                        derivation: r.derivation.clone(),
                        derived,
                    });
            }
        }
    }
    Ok(found.into_values().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Pos {
    /// The first `d` children are recognized.
    Prefix(usize),
    /// Fully recognized below, before adjunction.
    Bot,
    /// Recognized including any adjunction.
    Top,
}

type Foot = Option<(usize, usize)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    inst: usize,
    node: usize,
    pos: Pos,
    start: usize,
    end: usize,
    foot: Foot,
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Leaf,
    Extend {
        prefix: usize,
        child: usize,
    },
    Subst {
        root: usize,
    },
    /// Same attachments as another item of the same node.
    Same {
        from: usize,
    },
    Adjunction {
        bottom: usize,
        aux: usize,
    },
}

struct NodeInfo {
    address: GornAddress,
    kind: NodeKind,
    cat: Category,
    adjoinable: bool,
    words: Vec<String>,
    children: Vec<usize>,
    parent: Option<(usize, usize)>,
}

fn flatten(tree: &ElementaryTree) -> Vec<NodeInfo> {
    fn go(
        node: &crate::grammar::TreeNode,
        address: GornAddress,
        parent: Option<(usize, usize)>,
        out: &mut Vec<NodeInfo>,
    ) -> usize {
        let ix = out.len();
        out.push(NodeInfo {
            address: address.clone(),
            kind: node.kind,
            cat: node.cat.clone(),
            adjoinable: node.kind == NodeKind::Interior && node.adjoinable,
            words: node.words.clone(),
            children: Vec::new(),
            parent,
        });
        for (d, c) in node.children.iter().enumerate() {
            let child = go(c, address.child(d as u32 + 1), Some((ix, d)), out);
            out[ix].children.push(child);
        }
        ix
    }
    let mut out = Vec::new();
    go(&tree.root, GornAddress::root(), None, &mut out);
    out
}

fn join_feet(a: Foot, b: Foot) -> Option<Foot> {
    match (a, b) {
        (Some(_), Some(_)) => None,
        (f, None) | (None, f) => Some(f),
    }
}

struct Chart<'a, 't> {
    tokens: &'a [String],
    selected: &'a [AnchoredTree<'t>],
    nodes: Vec<Rc<Vec<NodeInfo>>>,
    items: Vec<Item>,
    backs: Vec<Vec<Back>>,
    ids: HashMap<Item, usize>,
    agenda: VecDeque<usize>,
    prefix_by_end: HashMap<(usize, usize, usize, usize), Vec<usize>>,
    top_by_start: HashMap<(usize, usize, usize), Vec<usize>>,
    bottom_by_span: HashMap<(Category, usize, usize), Vec<usize>>,
    aux_by_foot: HashMap<(Category, usize, usize), Vec<usize>>,
    substitution_sites: HashMap<Category, Vec<(usize, usize)>>,
}

impl<'a, 't> Chart<'a, 't> {
    fn new(tokens: &'a [String], selected: &'a [AnchoredTree<'t>]) -> Self {
        let mut shapes: HashMap<&str, Rc<Vec<NodeInfo>>> = HashMap::new();
        let nodes: Vec<_> = selected
            .iter()
            .map(|s| {
                shapes
                    .entry(s.tree.name.as_str())
                    .or_insert_with(|| Rc::new(flatten(s.tree)))
                    .clone()
            })
            .collect();
        let mut substitution_sites: HashMap<Category, Vec<(usize, usize)>> = HashMap::new();
        for (inst, ns) in nodes.iter().enumerate() {
            for (ix, n) in ns.iter().enumerate() {
                if n.kind == NodeKind::Substitution {
                    substitution_sites
                        .entry(n.cat.clone())
                        .or_default()
                        .push((inst, ix));
                }
            }
        }
        Chart {
            tokens,
            selected,
            nodes,
            items: Vec::new(),
            backs: Vec::new(),
            ids: HashMap::new(),
            agenda: VecDeque::new(),
            prefix_by_end: HashMap::new(),
            top_by_start: HashMap::new(),
            bottom_by_span: HashMap::new(),
            aux_by_foot: HashMap::new(),
            substitution_sites,
        }
    }

    fn add(&mut self, item: Item, back: Back) {
        match self.ids.get(&item) {
            Some(&id) => self.backs[id].push(back),
            None => {
                let id = self.items.len();
                self.items.push(item);
                self.backs.push(vec![back]);
                self.ids.insert(item, id);
                self.agenda.push_back(id);
            }
        }
    }

    /// Items that are complete as soon as the node is reached: leaves and
    /// empty prefixes.
    fn seed(&mut self) {
        let n = self.tokens.len();
        for inst in 0..self.selected.len() {
            let shape = self.nodes[inst].clone();
            let sel = &self.selected[inst];
            for (ix, node) in shape.iter().enumerate() {
                let leaf = |this: &mut Self, start, end, foot| {
                    this.add(
                        Item {
                            inst,
                            node: ix,
                            pos: Pos::Top,
                            start,
                            end,
                            foot,
                        },
                        Back::Leaf,
                    )
                };
                match node.kind {
                    NodeKind::Anchor => leaf(self, sel.start, sel.start + sel.len, None),
                    NodeKind::Terminal => {
                        let k = node.words.len();
                        for start in 0..=n.saturating_sub(k) {
                            if k > 0 && self.tokens[start..start + k] == node.words[..] {
                                leaf(self, start, start + k, None);
                            }
                        }
                    }
                    NodeKind::Foot => {
                        for p in 0..=n {
                            for q in p..=n {
                                leaf(self, p, q, Some((p, q)));
                            }
                        }
                    }
                    NodeKind::Interior => {
                        for start in 0..=n {
                            self.add(
                                Item {
                                    inst,
                                    node: ix,
                                    pos: Pos::Prefix(0),
                                    start,
                                    end: start,
                                    foot: None,
                                },
                                Back::Leaf,
                            );
                        }
                    }
                    NodeKind::Substitution => {}
                }
            }
        }
    }

    fn recognize(&mut self) {
        self.seed();
        while let Some(id) = self.agenda.pop_front() {
            let item = self.items[id];
            let shape = self.nodes[item.inst].clone();
            let node = &shape[item.node];
            match item.pos {
                Pos::Prefix(d) if d == node.children.len() => {
                    self.add(
                        Item {
                            pos: Pos::Bot,
                            ..item
                        },
                        Back::Same { from: id },
                    );
                }
                Pos::Prefix(d) => {
                    self.prefix_by_end
                        .entry((item.inst, item.node, d, item.end))
                        .or_default()
                        .push(id);
                    let child = node.children[d];
                    let tops = self
                        .top_by_start
                        .get(&(item.inst, child, item.end))
                        .cloned()
                        .unwrap_or_default();
                    for t in tops {
                        self.extend(id, t);
                    }
                }
                Pos::Bot => {
                    self.add(
                        Item {
                            pos: Pos::Top,
                            ..item
                        },
                        Back::Same { from: id },
                    );
                    if node.adjoinable {
                        let key = (node.cat.clone(), item.start, item.end);
                        self.bottom_by_span.entry(key.clone()).or_default().push(id);
                        for aux in self.aux_by_foot.get(&key).cloned().unwrap_or_default() {
                            self.adjunction(id, aux);
                        }
                    }
                }
                Pos::Top => {
                    if let Some((parent, d)) = node.parent {
                        self.top_by_start
                            .entry((item.inst, item.node, item.start))
                            .or_default()
                            .push(id);
                        let prefixes = self
                            .prefix_by_end
                            .get(&(item.inst, parent, d, item.start))
                            .cloned()
                            .unwrap_or_default();
                        for p in prefixes {
                            self.extend(p, id);
                        }
                        continue;
                    }
                    match (self.selected[item.inst].tree.kind, item.foot) {
                        (TreeKind::Initial, None) => {
                            let sites = self
                                .substitution_sites
                                .get(&node.cat)
                                .cloned()
                                .unwrap_or_default();
                            for (inst, ix) in sites {
                                if inst != item.inst {
                                    self.add(
                                        Item {
                                            inst,
                                            node: ix,
                                            pos: Pos::Top,
                                            start: item.start,
                                            end: item.end,
                                            foot: None,
                                        },
                                        Back::Subst { root: id },
                                    );
                                }
                            }
                        }
                        (TreeKind::Auxiliary, Some((p, q))) => {
                            let key = (node.cat.clone(), p, q);
                            self.aux_by_foot.entry(key.clone()).or_default().push(id);
                            for bottom in self.bottom_by_span.get(&key).cloned().unwrap_or_default()
                            {
                                self.adjunction(bottom, id);
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    fn extend(&mut self, prefix: usize, child: usize) {
        let (p, c) = (self.items[prefix], self.items[child]);
        let Pos::Prefix(d) = p.pos else { return };
        if let Some(foot) = join_feet(p.foot, c.foot) {
            self.add(
                Item {
                    pos: Pos::Prefix(d + 1),
                    end: c.end,
                    foot,
                    ..p
                },
                Back::Extend { prefix, child },
            );
        }
    }

    fn adjunction(&mut self, bottom: usize, aux: usize) {
        let (b, a) = (self.items[bottom], self.items[aux]);
        if b.inst == a.inst {
            return;
        }
        self.add(
            Item {
                pos: Pos::Top,
                start: a.start,
                end: a.end,
                ..b
            },
            Back::Adjunction { bottom, aux },
        );
    }

    fn goals(&self, start: &str) -> Vec<usize> {
        let n = self.tokens.len();
        (0..self.items.len())
            .filter(|&id| {
                let it = &self.items[id];
                let root = &self.nodes[it.inst][it.node];
                it.pos == Pos::Top
                    && root.parent.is_none()
                    && self.selected[it.inst].tree.kind == TreeKind::Initial
                    && root.cat.as_str() == start
                    && (it.start, it.end, it.foot) == (0, n, None)
            })
            .collect()
    }
}

struct Attachment {
    op: Operation,
    address: GornAddress,
    child: Rc<InstanceResult>,
}

struct InstanceResult {
    derivation: DerivationTree,
    /// Assembled tree and bindings; only kept under the eager schedule.
    built: Option<(DerivedTree, Bindings)>,
}

type Attachments = Rc<Vec<Vec<Rc<Attachment>>>>;

struct Extractor<'c, 'a, 't> {
    chart: &'c Chart<'a, 't>,
    anchored: &'c [ElementaryTree],
    schedule: Schedule,
    edges: HashMap<usize, Attachments>,
    results: HashMap<usize, Rc<Vec<Rc<InstanceResult>>>>,
}

impl Extractor<'_, '_, '_> {
    fn address(&self, item: usize) -> GornAddress {
        let it = &self.chart.items[item];
        self.chart.nodes[it.inst][it.node].address.clone()
    }

    /// Attachment lists for the part of an instance an item covers.
    fn attachments(&mut self, item: usize) -> Result<Attachments> {
        if let Some(a) = self.edges.get(&item) {
            return Ok(a.clone());
        }
        let mut out: Vec<Vec<Rc<Attachment>>> = Vec::new();
        for back in self.chart.backs[item].clone() {
            match back {
                Back::Leaf => out.push(Vec::new()),
                Back::Same { from } => out.extend(self.attachments(from)?.iter().cloned()),
                Back::Extend { prefix, child } => {
                    let left = self.attachments(prefix)?;
                    let right = self.attachments(child)?;
                    for l in left.iter() {
                        for r in right.iter() {
                            out.push(l.iter().chain(r.iter()).cloned().collect());
                        }
                    }
                }
                Back::Subst { root } => {
                    let address = self.address(item);
                    for r in self.instance_results(root)?.iter() {
                        out.push(vec![Rc::new(Attachment {
                            op: Operation::Substitution,
                            address: address.clone(),
                            child: r.clone(),
                        })]);
                    }
                }
                Back::Adjunction { bottom, aux } => {
                    let address = self.address(item);
                    let below = self.attachments(bottom)?;
                    let auxes = self.instance_results(aux)?;
                    for b in below.iter() {
                        for a in auxes.iter() {
                            let mut list = b.clone();
                            list.push(Rc::new(Attachment {
                                op: Operation::Adjunction,
                                address: address.clone(),
                                child: a.clone(),
                            }));
                            out.push(list);
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.edges.insert(item, out.clone());
        Ok(out)
    }

    /// Complete derivations rooted in the instance whose root item is
    /// `item`, with failing combinations removed under the eager schedule.
    fn instance_results(&mut self, item: usize) -> Result<Rc<Vec<Rc<InstanceResult>>>> {
        if let Some(r) = self.results.get(&item) {
            return Ok(r.clone());
        }
        let inst = self.chart.items[item].inst;
        let entry = self.chart.selected[inst].entry;
        let tree = &self.anchored[inst];
        let mut seen = BTreeMap::new();
        for list in self.attachments(item)?.iter() {
            let mut list: Vec<&Attachment> = list.iter().map(Rc::as_ref).collect();
            list.sort_by(|a, b| (&a.address, a.op).cmp(&(&b.address, b.op)));
            let mut derivation = DerivationTree::for_entry(&tree.name, entry);
            derivation.children = list
                .iter()
                .map(|a| DerivationEdge {
                    op: a.op,
                    address: a.address.clone(),
                    child: a.child.derivation.clone(),
                })
                .collect();
            let key = derivation.canonical();
            if seen.contains_key(&key) {
                continue;
            }
            let built = match self.schedule {
                Schedule::Deferred => None,
                Schedule::Eager => match self.assemble(inst, tree, &entry.lemma, &list)? {
                    Some(b) => Some(b),
                    None => continue,
                },
            };
            seen.insert(key, Rc::new(InstanceResult { derivation, built }));
        }
        let out = Rc::new(seen.into_values().collect::<Vec<_>>());
        self.results.insert(item, out.clone());
        Ok(out)
    }

    fn assemble(
        &self,
        inst: usize,
        tree: &ElementaryTree,
        lemma: &str,
        list: &[&Attachment],
    ) -> Result<Option<(DerivedTree, Bindings)>> {
        let mut host = DerivedTree::from_elementary(tree, inst, lemma);
        let mut env = Bindings::new();
        for a in list {
            let Some((child, child_env)) = &a.child.built else {
                return Ok(None);
            };
            env = match Unifier::default().merge_bindings(&env, child_env)? {
                Ok(e) => e,
                Err(_) => return Ok(None),
            };
            let combined = match a.op {
                Operation::Substitution => {
                    substitute(&host, &a.address, child, &env, Schedule::Eager)?
                }
                Operation::Adjunction => adjoin(&host, &a.address, child, &env, Schedule::Eager)?,
            };
            match combined {
                Ok((t, e)) => {
                    host = t;
                    env = e;
                }
                Err(_) => return Ok(None),
            }
        }
        Ok(Some((host, env)))
    }
}
