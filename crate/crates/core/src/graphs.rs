//! Rooted OSF graphs, the graph algebra and structural equivalence.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::degree::Degree;
use crate::error::TermError;
use crate::lattice::SortLattice;
use crate::signature::{FeatureId, Signature, SortId};
use crate::terms::{Clause, Constraint, NormalTerm, Tag, Term, TermBuilder};

/// A rooted, node-labeled, feature-deterministic graph. Every node is
/// reachable from the root and no label is `bot`. Equality is identity of
/// tags, labels and edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OsfGraph {
    root: Tag,
    labels: BTreeMap<Tag, SortId>,
    edges: BTreeMap<Tag, BTreeMap<FeatureId, Tag>>,
}

impl OsfGraph {
    pub fn from_parts(
        root: Tag,
        labels: BTreeMap<Tag, SortId>,
        mut edges: BTreeMap<Tag, BTreeMap<FeatureId, Tag>>,
    ) -> Result<Self, TermError> {
        edges.retain(|_, out| !out.is_empty());
        if !labels.contains_key(&root) {
            return Err(TermError::MalformedGraph(format!("root {root} has no label")));
        }
        if let Some((t, _)) = labels.iter().find(|(_, &s)| s == SortId::BOT) {
            return Err(TermError::MalformedGraph(format!("{t} is labeled bot")));
        }
        for (x, out) in &edges {
            for y in std::iter::once(x).chain(out.values()) {
                if !labels.contains_key(y) {
                    return Err(TermError::MalformedGraph(format!("{y} has no label")));
                }
            }
        }
        let g = OsfGraph { root, labels, edges };
        let reachable = g.reachable_from(&g.root);
        if reachable.len() != g.labels.len() {
            let stray = g.labels.keys().find(|t| !reachable.contains(*t)).unwrap();
            return Err(TermError::MalformedGraph(format!("{stray} is unreachable")));
        }
        Ok(g)
    }

    pub fn root(&self) -> &Tag {
        &self.root
    }

    pub fn root_label(&self) -> SortId {
        self.labels[&self.root]
    }

    pub fn label(&self, tag: &Tag) -> Option<SortId> {
        self.labels.get(tag).copied()
    }

    pub fn labels(&self) -> &BTreeMap<Tag, SortId> {
        &self.labels
    }

    pub fn successor(&self, tag: &Tag, f: FeatureId) -> Option<&Tag> {
        self.edges.get(tag)?.get(&f)
    }

    /// Outgoing edges of `tag` in feature-id order.
    pub fn successors(&self, tag: &Tag) -> impl Iterator<Item = (FeatureId, &Tag)> {
        self.edges
            .get(tag)
            .into_iter()
            .flat_map(|out| out.iter().map(|(f, t)| (*f, t)))
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeMap::len).sum()
    }

    fn reachable_from(&self, start: &Tag) -> HashSet<Tag> {
        let mut seen = HashSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            for (_, y) in self.successors(&x) {
                if seen.insert(y.clone()) {
                    stack.push(y.clone());
                }
            }
        }
        seen
    }

    /// The maximal subgraph rooted at `tag`.
    pub fn restrict(&self, tag: &Tag) -> OsfGraph {
        let keep = self.reachable_from(tag);
        OsfGraph {
            root: tag.clone(),
            labels: self
                .labels
                .iter()
                .filter(|(t, _)| keep.contains(*t))
                .map(|(t, s)| (t.clone(), *s))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|(t, _)| keep.contains(*t))
                .map(|(t, out)| (t.clone(), out.clone()))
                .collect(),
        }
    }
}

pub fn term_to_graph(term: &NormalTerm) -> OsfGraph {
    term.graph().clone()
}

/// The normal term of a graph, arguments in feature-id order.
pub fn graph_to_term(graph: &OsfGraph) -> Term {
    graph_to_term_ordered(graph, |tag| {
        graph.successors(tag).map(|(f, _)| f).collect()
    })
}

/// Pre-order layout: each node is written in full at its first occurrence
/// and as a bare tag afterwards. `order` lists the features of a node in
/// the order they should appear.
pub(crate) fn graph_to_term_ordered(
    graph: &OsfGraph,
    order: impl Fn(&Tag) -> Vec<FeatureId>,
) -> Term {
    let mut b = TermBuilder::new();
    let mut written: HashSet<Tag> = HashSet::new();
    let mut root = None;
    let mut stack: Vec<(Option<(usize, FeatureId)>, Tag)> = vec![(None, graph.root.clone())];
    while let Some((parent, tag)) = stack.pop() {
        let node = if written.contains(&tag) {
            b.add(tag.clone(), SortId::TOP)
        } else {
            let node = b.add(tag.clone(), graph.labels[&tag]);
            for f in order(&tag).into_iter().rev() {
                let next = graph.successor(&tag, f).expect("ordered feature exists").clone();
                stack.push((Some((node, f)), next));
            }
            written.insert(tag);
            node
        };
        match parent {
            Some((p, f)) => b.attach(p, f, node),
            None => root = Some(node),
        }
    }
    b.build(root.expect("root"))
}

/// An element of the graph algebra: a concrete rooted graph, or the
/// unconstrained element reached by following `path` out of `origin` past
/// its last concrete node. Trivial elements are distinct for distinct
/// `(origin, path)` and carry sort `top`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphAlgebraElement {
    Concrete(OsfGraph),
    Trivial { origin: OsfGraph, path: Vec<FeatureId> },
}

impl GraphAlgebraElement {
    pub fn root_label(&self) -> SortId {
        match self {
            GraphAlgebraElement::Concrete(g) => g.root_label(),
            GraphAlgebraElement::Trivial { .. } => SortId::TOP,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GraphAlgebraElement::Trivial { .. })
    }

    /// `f` applied to this element.
    pub fn apply_feature(&self, f: FeatureId) -> GraphAlgebraElement {
        match self {
            GraphAlgebraElement::Concrete(g) => match g.successor(g.root(), f) {
                Some(y) => GraphAlgebraElement::Concrete(g.restrict(y)),
                None => GraphAlgebraElement::Trivial {
                    origin: g.clone(),
                    path: vec![f],
                },
            },
            GraphAlgebraElement::Trivial { origin, path } => {
                let mut path = path.clone();
                path.push(f);
                GraphAlgebraElement::Trivial {
                    origin: origin.clone(),
                    path,
                }
            }
        }
    }
}

/// Membership degree of an element in sort `s`.
pub fn sort_membership<D: Degree>(
    elem: &GraphAlgebraElement,
    s: SortId,
    lattice: &SortLattice<D>,
) -> D {
    lattice.degree(elem.root_label(), s)
}

/// The graph rooted at each tag of a solved clause. Tags without a sort
/// constraint are labeled `top`.
pub fn canonical_subgraphs(clause: &Clause) -> Result<BTreeMap<Tag, OsfGraph>, TermError> {
    clause.check_solved()?;
    let mut labels: BTreeMap<Tag, SortId> =
        clause.tags().into_iter().map(|t| (t, SortId::TOP)).collect();
    let mut edges: BTreeMap<Tag, BTreeMap<FeatureId, Tag>> = BTreeMap::new();
    for c in &clause.constraints {
        match c {
            Constraint::Sort(x, s) => {
                labels.insert(x.clone(), *s);
            }
            Constraint::Feature(x, f, y) => {
                edges.entry(x.clone()).or_default().insert(*f, y.clone());
            }
            Constraint::Eq(..) => unreachable!("solved"),
        }
    }
    let Some(any) = labels.keys().next().cloned() else {
        return Ok(BTreeMap::new());
    };
    let whole = OsfGraph {
        root: any,
        labels,
        edges,
    };
    Ok(whole
        .labels
        .keys()
        .map(|t| (t.clone(), whole.restrict(t)))
        .collect())
}

/// Remove non-root `top` leaves with a single incoming edge, repeatedly.
/// Such leaves carry no information.
pub fn canonical_form(graph: &OsfGraph) -> OsfGraph {
    let mut g = graph.clone();
    let mut indegree: HashMap<Tag, usize> = HashMap::new();
    for out in g.edges.values() {
        for y in out.values() {
            *indegree.entry(y.clone()).or_default() += 1;
        }
    }
    let mut parent: HashMap<Tag, (Tag, FeatureId)> = HashMap::new();
    for (x, out) in &g.edges {
        for (f, y) in out {
            parent.insert(y.clone(), (x.clone(), *f));
        }
    }
    let strippable = |g: &OsfGraph, indegree: &HashMap<Tag, usize>, t: &Tag| {
        *t != g.root
            && g.labels[t] == SortId::TOP
            && !g.edges.contains_key(t)
            && indegree.get(t) == Some(&1)
    };
    let mut queue: VecDeque<Tag> = g
        .labels
        .keys()
        .filter(|t| strippable(&g, &indegree, t))
        .cloned()
        .collect();
    while let Some(t) = queue.pop_front() {
        if !g.labels.contains_key(&t) || !strippable(&g, &indegree, &t) {
            continue;
        }
        let (p, f) = parent[&t].clone();
        g.labels.remove(&t);
        let out = g.edges.get_mut(&p).expect("parent edge");
        out.remove(&f);
        if out.is_empty() {
            g.edges.remove(&p);
        }
        if strippable(&g, &indegree, &p) {
            queue.push_back(p);
        }
    }
    g
}

/// Rooted isomorphism: same shape and labels up to renaming of tags.
pub fn isomorphic(g0: &OsfGraph, g1: &OsfGraph) -> bool {
    if g0.node_count() != g1.node_count() || g0.edge_count() != g1.edge_count() {
        return false;
    }
    let mut fwd: HashMap<&Tag, &Tag> = HashMap::new();
    let mut bwd: HashMap<&Tag, &Tag> = HashMap::new();
    let mut queue = VecDeque::from([(&g0.root, &g1.root)]);
    fwd.insert(&g0.root, &g1.root);
    bwd.insert(&g1.root, &g0.root);
    while let Some((a, b)) = queue.pop_front() {
        if g0.labels[a] != g1.labels[b] {
            return false;
        }
        let out0: Vec<_> = g0.successors(a).collect();
        let out1: Vec<_> = g1.successors(b).collect();
        if out0.len() != out1.len() {
            return false;
        }
        for ((f0, y0), (f1, y1)) in out0.into_iter().zip(out1) {
            if f0 != f1 {
                return false;
            }
            match (fwd.get(y0), bwd.get(y1)) {
                (None, None) => {
                    fwd.insert(y0, y1);
                    bwd.insert(y1, y0);
                    queue.push_back((y0, y1));
                }
                (Some(&m0), Some(&m1)) if m0 == y1 && m1 == y0 => {}
                _ => return false,
            }
        }
    }
    true
}

/// Whether two graphs denote the same element: equal after dropping
/// uninformative `top` leaves, up to tag renaming.
pub fn graph_equivalent(g0: &OsfGraph, g1: &OsfGraph) -> bool {
    isomorphic(&canonical_form(g0), &canonical_form(g1))
}

/// Graphviz rendering; the root is drawn with a double border.
pub fn graph_to_dot(graph: &OsfGraph, sig: &Signature) -> String {
    let mut out = String::from("digraph osf {\n");
    for (t, s) in &graph.labels {
        let shape = if *t == graph.root { "doublecircle" } else { "circle" };
        out.push_str(&format!(
            "  \"{t}\" [label=\"{t}: {}\", shape={shape}];\n",
            sig.sort_name(*s)
        ));
    }
    for (x, out_edges) in &graph.edges {
        for (f, y) in out_edges {
            out.push_str(&format!(
                "  \"{x}\" -> \"{y}\" [label=\"{}\"];\n",
                sig.feature_name(*f)
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse_clause, parse_term};

    fn sig() -> Signature {
        Signature::new(&["s", "u", "v"], &["f", "g", "h"]).unwrap()
    }

    fn graph(text: &str) -> OsfGraph {
        let t = parse_term(text, &sig()).unwrap();
        NormalTerm::new(t).unwrap().into_graph()
    }

    #[test]
    fn graph_term_roundtrip() {
        let g = graph("X: s(f -> Y: u(g -> X), h -> Y)");
        let t = graph_to_term(&g);
        assert_eq!(NormalTerm::new(t).unwrap().graph(), &g);
    }

    #[test]
    fn restriction_keeps_reachable_part() {
        let g = graph("X: s(f -> Y: u(g -> Z: v), h -> W: v)");
        let r = g.restrict(&Tag::new("Y"));
        assert_eq!(r.node_count(), 2);
        assert_eq!(r.root_label(), SortId(3));
    }

    #[test]
    fn feature_application_leaves_the_concrete_part() {
        let g = graph("X: s(f -> Y: u)");
        let e = GraphAlgebraElement::Concrete(g.clone());
        let fy = e.apply_feature(FeatureId(0));
        assert_eq!(fy.root_label(), SortId(3));
        let gx = e.apply_feature(FeatureId(1));
        assert!(gx.is_trivial());
        assert_ne!(gx, e.apply_feature(FeatureId(2)));
        assert_ne!(gx.apply_feature(FeatureId(0)), fy.apply_feature(FeatureId(0)));
        assert_eq!(gx.root_label(), SortId::TOP);
    }

    #[test]
    fn top_leaves_do_not_matter() {
        let a = graph("X: s(f -> Y: u)");
        let b = graph("A: s(f -> B: u, g -> C)");
        let c = graph("A: s(f -> B: u, g -> C: top(h -> D))");
        let d = graph("A: s(f -> B: u(g -> E), g -> E)");
        assert!(graph_equivalent(&a, &b));
        assert!(graph_equivalent(&a, &c));
        assert!(!graph_equivalent(&a, &d));
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn subgraphs_of_a_solved_clause() {
        let s = sig();
        let c = parse_clause("X: s & X.f = Y & Y: u & Y.g = X & X.h = Z", &s).unwrap();
        let subs = canonical_subgraphs(&c).unwrap();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs[&Tag::new("Y")].node_count(), 3);
        assert_eq!(subs[&Tag::new("Z")].root_label(), SortId::TOP);
        assert!(canonical_subgraphs(&parse_clause("X = Y", &s).unwrap()).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = graph_to_dot(&graph("X: s(f -> Y: u)"), &sig());
        assert!(dot.contains("\"X\" -> \"Y\" [label=\"f\"]"));
    }
}
