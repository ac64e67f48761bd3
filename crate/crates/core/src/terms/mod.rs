//! OSF terms, constraint clauses and the translations between them.
//!
//! Terms are stored as flat arenas in pre-order, so deep terms never need
//! recursion to build, compare, print or drop.

mod parse;
mod print;

pub use parse::{parse_clause, parse_term};
pub use print::{print_clause, print_term, TermStyle};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::TermError;
use crate::graphs::OsfGraph;
use crate::signature::{FeatureId, SortId};

/// A variable naming a node. User tags match `[A-Z][A-Za-z0-9_]*`;
/// generated tags start with `_`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(Arc<str>);

impl Tag {
    pub fn new(name: impl AsRef<str>) -> Self {
        Tag(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Tag {
    fn from(s: &str) -> Self {
        Tag::new(s)
    }
}

pub fn is_tag_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some('_') => {
            let rest = &name[1..];
            !rest.is_empty() && rest.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    }
}

/// Produces `_Z0`, `_Z1`, ... skipping any name already in use.
#[derive(Clone, Debug, Default)]
pub struct TagGen {
    used: HashSet<Tag>,
    next: usize,
}

impl TagGen {
    pub fn avoiding(used: impl IntoIterator<Item = Tag>) -> Self {
        TagGen {
            used: used.into_iter().collect(),
            next: 0,
        }
    }

    pub fn fresh(&mut self) -> Tag {
        loop {
            let tag = Tag::new(format!("_Z{}", self.next));
            self.next += 1;
            if self.used.insert(tag.clone()) {
                return tag;
            }
        }
    }
}

/// One occurrence `tag : sort(feature -> child, ...)`; children index into
/// the owning term's arena.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subterm {
    pub tag: Tag,
    pub sort: SortId,
    pub args: Vec<(FeatureId, usize)>,
}

impl Subterm {
    /// A bare `X` (equivalently `X : top`) with no arguments.
    pub fn is_trivial(&self) -> bool {
        self.sort == SortId::TOP && self.args.is_empty()
    }
}

/// An OSF term, not necessarily normal. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    nodes: Vec<Subterm>,
}

impl Term {
    pub fn leaf(tag: impl Into<Tag>, sort: SortId) -> Self {
        Term {
            nodes: vec![Subterm {
                tag: tag.into(),
                sort,
                args: Vec::new(),
            }],
        }
    }

    pub fn node(tag: impl Into<Tag>, sort: SortId, args: Vec<(FeatureId, Term)>) -> Self {
        let mut nodes = vec![Subterm {
            tag: tag.into(),
            sort,
            args: Vec::with_capacity(args.len()),
        }];
        for (f, child) in args {
            let offset = nodes.len();
            nodes[0].args.push((f, offset));
            nodes.extend(child.nodes.into_iter().map(|mut n| {
                for a in &mut n.args {
                    a.1 += offset;
                }
                n
            }));
        }
        Term { nodes }
    }

    pub fn root(&self) -> &Subterm {
        &self.nodes[0]
    }

    pub fn root_tag(&self) -> &Tag {
        &self.nodes[0].tag
    }

    pub fn nodes(&self) -> &[Subterm] {
        &self.nodes
    }

    pub fn node_at(&self, i: usize) -> &Subterm {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Distinct tags in order of first occurrence.
    pub fn tags(&self) -> Vec<Tag> {
        let mut seen = HashSet::new();
        self.nodes
            .iter()
            .filter(|n| seen.insert(n.tag.clone()))
            .map(|n| n.tag.clone())
            .collect()
    }

    /// Rename tags through `map`; unmapped tags are kept.
    pub fn rename(&self, map: &HashMap<Tag, Tag>) -> Term {
        Term {
            nodes: self
                .nodes
                .iter()
                .map(|n| Subterm {
                    tag: map.get(&n.tag).cloned().unwrap_or_else(|| n.tag.clone()),
                    sort: n.sort,
                    args: n.args.clone(),
                })
                .collect(),
        }
    }
}

/// Builds a term from nodes added in any order; `build` lays them out in
/// pre-order.
#[derive(Clone, Debug, Default)]
pub struct TermBuilder {
    nodes: Vec<Subterm>,
    attached: Vec<bool>,
}

impl TermBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, tag: impl Into<Tag>, sort: SortId) -> usize {
        self.nodes.push(Subterm {
            tag: tag.into(),
            sort,
            args: Vec::new(),
        });
        self.attached.push(false);
        self.nodes.len() - 1
    }

    /// Panics if `child` already has a parent.
    pub fn attach(&mut self, parent: usize, feature: FeatureId, child: usize) {
        assert!(!self.attached[child], "node {child} attached twice");
        self.attached[child] = true;
        self.nodes[parent].args.push((feature, child));
    }

    /// Nodes not reachable from `root` are discarded.
    pub fn build(self, root: usize) -> Term {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            order.push(i);
            stack.extend(self.nodes[i].args.iter().rev().map(|&(_, c)| c));
        }
        let mut new_index = vec![usize::MAX; self.nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut slots: Vec<Option<Subterm>> = self.nodes.into_iter().map(Some).collect();
        let nodes = order
            .iter()
            .map(|&old| {
                let mut n = slots[old].take().expect("node visited once");
                for a in &mut n.args {
                    a.1 = new_index[a.1];
                }
                n
            })
            .collect();
        Term { nodes }
    }
}

/// An atomic constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// `X : s`
    Sort(Tag, SortId),
    /// `X.f = Y`
    Feature(Tag, FeatureId, Tag),
    /// `X = Y`
    Eq(Tag, Tag),
}

impl Constraint {
    pub fn tags(&self) -> impl Iterator<Item = &Tag> {
        let (a, b) = match self {
            Constraint::Sort(x, _) => (x, None),
            Constraint::Feature(x, _, y) | Constraint::Eq(x, y) => (x, Some(y)),
        };
        std::iter::once(a).chain(b)
    }
}

/// A conjunction of constraints with an optional distinguished root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Clause {
    pub constraints: Vec<Constraint>,
    pub root: Option<Tag>,
}

impl Clause {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        Clause {
            constraints,
            root: None,
        }
    }

    pub fn with_root(mut self, root: Tag) -> Self {
        self.root = Some(root);
        self
    }

    /// Distinct tags in order of first appearance.
    pub fn tags(&self) -> Vec<Tag> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in self.root.iter().chain(self.constraints.iter().flat_map(|c| c.tags())) {
            if seen.insert(t.clone()) {
                out.push(t.clone());
            }
        }
        out
    }

    /// No equations, at most one sort (never `bot`) per tag, at most one
    /// value per (tag, feature).
    pub fn check_solved(&self) -> Result<(), TermError> {
        let mut sorted = HashSet::new();
        let mut featured = HashSet::new();
        for c in &self.constraints {
            match c {
                Constraint::Eq(x, y) => {
                    return Err(TermError::NotSolved(format!("equation {x} = {y}")))
                }
                Constraint::Sort(x, s) => {
                    if *s == SortId::BOT {
                        return Err(TermError::NotSolved(format!("{x} has sort bot")));
                    }
                    if !sorted.insert(x) {
                        return Err(TermError::NotSolved(format!("{x} sorted twice")));
                    }
                }
                Constraint::Feature(x, f, _) => {
                    if !featured.insert((x, *f)) {
                        return Err(TermError::NotSolved(format!("{x} has feature #{} twice", f.0)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_solved(&self) -> bool {
        self.check_solved().is_ok()
    }

    /// Root present and every tag reachable from it along feature constraints.
    pub fn check_rooted(&self) -> Result<(), TermError> {
        let root = self
            .root
            .as_ref()
            .ok_or_else(|| TermError::NotRooted("no root".into()))?;
        let mut succ: HashMap<&Tag, Vec<&Tag>> = HashMap::new();
        for c in &self.constraints {
            match c {
                Constraint::Feature(x, _, y) | Constraint::Eq(x, y) => {
                    succ.entry(x).or_default().push(y)
                }
                Constraint::Sort(..) => {}
            }
        }
        let mut seen: HashSet<&Tag> = HashSet::from([root]);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in succ.get(x).into_iter().flatten() {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        match self.tags().into_iter().find(|t| !seen.contains(t)) {
            Some(t) => Err(TermError::NotRooted(format!("{t} unreachable from {root}"))),
            None => Ok(()),
        }
    }

    /// Constraints as a multiset, for order-insensitive comparison.
    pub fn constraint_multiset(&self) -> Vec<Constraint> {
        let mut v = self.constraints.clone();
        v.sort();
        v
    }

    pub fn rename(&self, map: &HashMap<Tag, Tag>) -> Clause {
        let r = |t: &Tag| map.get(t).cloned().unwrap_or_else(|| t.clone());
        Clause {
            constraints: self
                .constraints
                .iter()
                .map(|c| match c {
                    Constraint::Sort(x, s) => Constraint::Sort(r(x), *s),
                    Constraint::Feature(x, f, y) => Constraint::Feature(r(x), *f, r(y)),
                    Constraint::Eq(x, y) => Constraint::Eq(r(x), r(y)),
                })
                .collect(),
            root: self.root.as_ref().map(r),
        }
    }
}

/// The clause of a term: one sort constraint per informative occurrence
/// (tags that only ever occur bare get a single `X : top`) and one feature
/// constraint per argument. Rooted at the term's root tag.
pub fn term_to_clause(term: &Term) -> Clause {
    let informative: HashSet<&Tag> = term
        .nodes()
        .iter()
        .filter(|n| !n.is_trivial())
        .map(|n| &n.tag)
        .collect();
    let mut topped: HashSet<&Tag> = HashSet::new();
    let mut constraints = Vec::new();
    for n in term.nodes() {
        if !n.is_trivial() {
            constraints.push(Constraint::Sort(n.tag.clone(), n.sort));
        } else if !informative.contains(&n.tag) && topped.insert(&n.tag) {
            constraints.push(Constraint::Sort(n.tag.clone(), SortId::TOP));
        }
        for &(f, c) in &n.args {
            constraints.push(Constraint::Feature(n.tag.clone(), f, term.node_at(c).tag.clone()));
        }
    }
    Clause {
        constraints,
        root: Some(term.root_tag().clone()),
    }
}

/// The normal term of a rooted solved clause. Tags without a sort
/// constraint get `top`.
pub fn clause_to_term(clause: &Clause) -> Result<NormalTerm, TermError> {
    clause.check_solved()?;
    clause.check_rooted()?;
    let root = clause.root.clone().expect("rooted");
    let mut labels = BTreeMap::new();
    let mut edges: BTreeMap<Tag, BTreeMap<FeatureId, Tag>> = BTreeMap::new();
    let mut order: HashMap<Tag, Vec<FeatureId>> = HashMap::new();
    for t in clause.tags() {
        labels.insert(t, SortId::TOP);
    }
    for c in &clause.constraints {
        match c {
            Constraint::Sort(x, s) => {
                labels.insert(x.clone(), *s);
            }
            Constraint::Feature(x, f, y) => {
                edges.entry(x.clone()).or_default().insert(*f, y.clone());
                order.entry(x.clone()).or_default().push(*f);
            }
            Constraint::Eq(..) => unreachable!("solved"),
        }
    }
    let graph = OsfGraph::from_parts(root, labels, edges)?;
    let term = crate::graphs::graph_to_term_ordered(&graph, |tag| {
        order.get(tag).cloned().unwrap_or_default()
    });
    Ok(NormalTerm { term, graph })
}

/// A term in normal form: no `bot`, distinct features per occurrence, and
/// each tag informative at most once.
///
/// Two normal terms are equal when they denote the same rooted graph; where
/// a shared structure is written and the order of arguments do not matter.
#[derive(Clone, Debug)]
pub struct NormalTerm {
    term: Term,
    graph: OsfGraph,
}

impl PartialEq for NormalTerm {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for NormalTerm {}

impl NormalTerm {
    pub fn new(term: Term) -> Result<Self, TermError> {
        let mut labels: BTreeMap<Tag, SortId> = BTreeMap::new();
        let mut edges: BTreeMap<Tag, BTreeMap<FeatureId, Tag>> = BTreeMap::new();
        let mut informative: HashSet<&Tag> = HashSet::new();
        for n in term.nodes() {
            if n.sort == SortId::BOT {
                return Err(TermError::NotNormal(format!("{} has sort bot", n.tag)));
            }
            labels.entry(n.tag.clone()).or_insert(SortId::TOP);
            if n.is_trivial() {
                continue;
            }
            if !informative.insert(&n.tag) {
                return Err(TermError::NotNormal(format!(
                    "{} is given structure more than once",
                    n.tag
                )));
            }
            labels.insert(n.tag.clone(), n.sort);
            let out = edges.entry(n.tag.clone()).or_default();
            for &(f, c) in &n.args {
                if out.insert(f, term.node_at(c).tag.clone()).is_some() {
                    return Err(TermError::NotNormal(format!(
                        "{} repeats feature #{}",
                        n.tag, f.0
                    )));
                }
            }
            if out.is_empty() {
                edges.remove(&n.tag);
            }
        }
        let graph = OsfGraph::from_parts(term.root_tag().clone(), labels, edges)?;
        Ok(NormalTerm { term, graph })
    }

    pub fn from_graph(graph: OsfGraph) -> Self {
        let term = crate::graphs::graph_to_term(&graph);
        NormalTerm { term, graph }
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn graph(&self) -> &OsfGraph {
        &self.graph
    }

    pub fn into_graph(self) -> OsfGraph {
        self.graph
    }

    pub fn root(&self) -> &Tag {
        self.graph.root()
    }

    /// Distinct tags in order of first occurrence in the term.
    pub fn tags(&self) -> Vec<Tag> {
        self.term.tags()
    }

    /// The sort given to `tag`, `top` if it only occurs bare.
    pub fn sort_of(&self, tag: &Tag) -> Option<SortId> {
        self.graph.label(tag)
    }

    pub fn feature_value(&self, tag: &Tag, f: FeatureId) -> Option<&Tag> {
        self.graph.successor(tag, f)
    }

    pub fn to_clause(&self) -> Clause {
        term_to_clause(&self.term)
    }
}
