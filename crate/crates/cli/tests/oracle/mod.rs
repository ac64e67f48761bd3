//! Reference computations written independently of the library internals.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use fuzzy_osf::graphs::OsfGraph;
use fuzzy_osf::lattice::SubsumptionGraph;
use fuzzy_osf::{Clause, Constraint, FeatureId, NormalForm, SortId, Tag};

const BOT: usize = 0;
const TOP: usize = 1;

/// Degrees and crisp reachability by enumerating every path of declared
/// edges, plus the implicit bounds.
pub struct PathOracle {
    pub degree: Vec<Vec<f64>>,
    pub reach: Vec<Vec<bool>>,
}

impl PathOracle {
    pub fn new(g: &SubsumptionGraph<f64>) -> Self {
        let n = g.signature().sort_count();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in g.edges() {
            adj[e.sub.index()].push((e.sup.index(), e.degree));
        }
        let mut degree = vec![vec![0.0; n]; n];
        let mut reach = vec![vec![false; n]; n];
        for s in 0..n {
            let mut stack = vec![(s, 1.0f64)];
            while let Some((u, d)) = stack.pop() {
                if d > degree[s][u] {
                    degree[s][u] = d;
                }
                reach[s][u] = true;
                for &(v, w) in &adj[u] {
                    stack.push((v, d.min(w)));
                }
            }
        }
        for s in 0..n {
            degree[s][s] = 1.0;
            degree[s][TOP] = 1.0;
            degree[BOT][s] = 1.0;
            reach[s][s] = true;
            reach[s][TOP] = true;
            reach[BOT][s] = true;
        }
        PathOracle { degree, reach }
    }

    /// Widest path from `s` to `t` by a best-first search, for graphs too
    /// large to enumerate.
    pub fn widest(g: &SubsumptionGraph<f64>, s: usize, t: usize) -> f64 {
        if s == t || s == BOT || t == TOP {
            return 1.0;
        }
        let n = g.signature().sort_count();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in g.edges() {
            adj[e.sub.index()].push((e.sup.index(), e.degree));
        }
        let mut best = vec![0.0f64; n];
        let mut done = vec![false; n];
        best[s] = 1.0;
        loop {
            let Some(u) = (0..n).filter(|&u| !done[u] && best[u] > 0.0).max_by(|&a, &b| best[a].total_cmp(&best[b]))
            else {
                return 0.0;
            };
            if u == t {
                return best[u];
            }
            done[u] = true;
            for &(v, w) in &adj[u] {
                best[v] = best[v].max(best[u].min(w));
            }
        }
    }

    /// Greatest common lower bound in the crisp reachability order.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let n = self.reach.len();
        let lower: Vec<usize> = (0..n).filter(|&x| self.reach[x][a] && self.reach[x][b]).collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&x| self.reach[x][m]))
    }
}

/// Solved constraints renamed so that each class is named by its smallest
/// member, as a sorted list, plus the partition itself.
pub fn canonical_normal_form(nf: &NormalForm, tags: &[Tag]) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let NormalForm::Normalized { solved, .. } = nf else {
        return None;
    };
    let reps = nf.representatives();
    let rep = |t: &Tag| reps.get(t).cloned().unwrap_or_else(|| t.clone());
    let mut classes: BTreeMap<Tag, Vec<String>> = BTreeMap::new();
    for t in tags {
        classes.entry(rep(t)).or_default().push(t.to_string());
    }
    let mut name: HashMap<Tag, String> = HashMap::new();
    for (r, members) in classes.iter_mut() {
        members.sort();
        name.insert(r.clone(), members[0].clone());
    }
    let n = |t: &Tag| name.get(&rep(t)).cloned().unwrap_or_else(|| t.to_string());
    let mut constraints: Vec<String> = solved
        .constraints
        .iter()
        .map(|c| match c {
            Constraint::Sort(x, s) => format!("{}:{}", n(x), s.0),
            Constraint::Feature(x, f, y) => format!("{}.{}={}", n(x), f.0, n(y)),
            Constraint::Eq(x, y) => format!("{}={}", n(x), n(y)),
        })
        .collect();
    constraints.sort();
    let mut partition: Vec<Vec<String>> = classes.into_values().collect();
    partition.sort();
    Some((constraints, partition))
}

/// Labels and edges read straight off a rooted solved clause.
pub fn graph_of_clause(c: &Clause) -> (BTreeMap<Tag, SortId>, BTreeMap<(Tag, FeatureId), Tag>) {
    let mut labels = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for t in c.tags() {
        labels.insert(t, SortId::TOP);
    }
    for con in &c.constraints {
        match con {
            Constraint::Sort(x, s) => {
                labels.insert(x.clone(), *s);
            }
            Constraint::Feature(x, f, y) => {
                edges.insert((x.clone(), *f), y.clone());
            }
            Constraint::Eq(..) => panic!("not solved"),
        }
    }
    (labels, edges)
}

pub fn graph_parts(g: &OsfGraph) -> (BTreeMap<Tag, SortId>, BTreeMap<(Tag, FeatureId), Tag>) {
    let labels = g.labels().clone();
    let mut edges = BTreeMap::new();
    for t in labels.keys() {
        for (f, y) in g.successors(t) {
            edges.insert((t.clone(), f), y.clone());
        }
    }
    (labels, edges)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    Real(Tag),
    /// A `top` node standing for `from` followed by `path`.
    Virtual(Tag, Vec<FeatureId>),
}

/// Crisp subsumption of `specific` by `general`: a root-preserving,
/// edge-commuting map from the tags of `general` whose sorts lie above in
/// the crisp order. Missing edges of `specific` lead to `top` nodes, one
/// per path.
pub fn crisp_subsumes(oracle: &PathOracle, specific: &OsfGraph, general: &OsfGraph) -> bool {
    let mut h: HashMap<Tag, Node> = HashMap::new();
    let mut queue = VecDeque::from([(general.root().clone(), Node::Real(specific.root().clone()))]);
    let mut seen = HashSet::new();
    while let Some((x, image)) = queue.pop_front() {
        if let Some(prev) = h.get(&x) {
            if *prev != image {
                return false;
            }
            continue;
        }
        h.insert(x.clone(), image.clone());
        if !seen.insert(x.clone()) {
            continue;
        }
        let label = match &image {
            Node::Real(t) => specific.label(t).unwrap().index(),
            Node::Virtual(..) => TOP,
        };
        if !oracle.reach[label][general.label(&x).unwrap().index()] {
            return false;
        }
        for (f, y) in general.successors(&x) {
            let next = match &image {
                Node::Real(t) => match specific.successor(t, f) {
                    Some(z) => Node::Real(z.clone()),
                    None => Node::Virtual(t.clone(), vec![f]),
                },
                Node::Virtual(from, path) => {
                    let mut p = path.clone();
                    p.push(f);
                    Node::Virtual(from.clone(), p)
                }
            };
            queue.push_back((y.clone(), next));
        }
    }
    true
}
