//! Seeded generators for lattices, interpretations, graphs and clauses.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, RngExt};

use crate::degree::Degree;
use crate::graphs::OsfGraph;
use crate::lattice::{validate_lattice, Edge, SortLattice, SubsumptionGraph};
use crate::signature::{FeatureId, Signature, SortId};
use crate::terms::{Clause, Constraint, Tag};

use super::Interpretation;

const GRID: [&str; 6] = ["0.2", "0.4", "0.5", "0.6", "0.8", "1"];

/// Degrees the generators draw from.
pub fn grid<D: Degree>() -> Vec<D> {
    GRID.iter().map(|g| D::parse_degree(g).expect("grid literal")).collect()
}

fn pick_degree<D: Degree, R: Rng>(rng: &mut R) -> D {
    *grid::<D>().choose(rng).expect("non-empty grid")
}

/// Sorts `s0..s{n-1}`, features `f0..f{k-1}`, and each forward pair
/// `si -> sj` (`i < j`) present with probability `edge_prob`.
pub fn random_dag<D: Degree, R: Rng>(
    rng: &mut R,
    sorts: usize,
    features: usize,
    edge_prob: f64,
) -> SubsumptionGraph<D> {
    let names: Vec<String> = (0..sorts).map(|i| format!("s{i}")).collect();
    let feats: Vec<String> = (0..features).map(|i| format!("f{i}")).collect();
    let sig = Signature::new(&names, &feats).expect("generated names are valid");
    let mut edges = Vec::new();
    for i in 0..sorts {
        for j in i + 1..sorts {
            if rng.random_bool(edge_prob) {
                edges.push(Edge {
                    sub: SortId(i as u32 + 2),
                    sup: SortId(j as u32 + 2),
                    degree: pick_degree(rng),
                });
            }
        }
    }
    SubsumptionGraph::new(sig, edges).expect("forward edges are acyclic")
}

/// A random DAG with at most `max_sorts` named sorts that happens to be a
/// lattice; falls back to a chain after repeated failures.
pub fn random_lattice<D: Degree, R: Rng>(
    rng: &mut R,
    max_sorts: usize,
    features: usize,
) -> SortLattice<D> {
    for _ in 0..200 {
        let n = rng.random_range(1..=max_sorts.max(1));
        let p = rng.random_range(0.2..0.7);
        if let Ok(l) = validate_lattice(random_dag(rng, n, features, p)) {
            return l;
        }
    }
    let n = max_sorts.max(1);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let feats: Vec<String> = (0..features).map(|i| format!("f{i}")).collect();
    let sig = Signature::new(&names, &feats).expect("valid names");
    let edges = (0..n.saturating_sub(1))
        .map(|i| Edge {
            sub: SortId(i as u32 + 2),
            sup: SortId(i as u32 + 3),
            degree: pick_degree(rng),
        })
        .collect();
    validate_lattice(SubsumptionGraph::new(sig, edges).expect("chain")).expect("chain is a lattice")
}

/// A valid interpretation. Each element picks a most specific sort; its
/// positive sorts are exactly those above it, with random degrees closed
/// upward so membership is monotone.
pub fn random_interpretation<D: Degree, R: Rng>(
    rng: &mut R,
    lattice: &SortLattice<D>,
    max_domain: usize,
) -> Interpretation<D> {
    let n = rng.random_range(1..=max_domain.max(1));
    let sig = lattice.signature().clone();
    let mut interp = Interpretation::new(sig.clone(), (0..n).map(|i| format!("e{i}")).collect());
    for e in 0..n {
        assign_degrees(rng, lattice, &mut interp, e);
        for f in sig.features() {
            interp.set_feature(f, e, rng.random_range(0..n));
        }
    }
    interp
}

fn assign_degrees<D: Degree, R: Rng>(
    rng: &mut R,
    lattice: &SortLattice<D>,
    interp: &mut Interpretation<D>,
    e: usize,
) {
    let sorts: Vec<SortId> = lattice.signature().sorts().filter(|&s| s != SortId::BOT).collect();
    let most_specific = *sorts.choose(rng).expect("top exists");
    let raw: Vec<(SortId, D)> = sorts
        .iter()
        .filter(|&&s| lattice.degree(most_specific, s) > D::zero())
        .map(|&s| (s, if s == SortId::TOP { D::one() } else { pick_degree(rng) }))
        .collect();
    for s1 in lattice.signature().sorts() {
        let d = raw
            .iter()
            .map(|&(s0, d0)| d0.min_deg(lattice.degree(s0, s1)))
            .fold(D::zero(), D::max_deg);
        interp.set_degree(s1, e, if s1 == SortId::BOT { D::zero() } else { d });
    }
}

/// Same domain and features, freshly drawn degrees.
pub fn perturb<D: Degree, R: Rng>(
    rng: &mut R,
    interp: &Interpretation<D>,
    lattice: &SortLattice<D>,
) -> Interpretation<D> {
    let mut out = interp.clone();
    for e in 0..out.domain_size() {
        if rng.random_bool(0.5) {
            assign_degrees(rng, lattice, &mut out, e);
        }
    }
    out
}

/// A rooted graph with tags `{prefix}0..`: a random spanning tree plus a
/// few extra (possibly cyclic) edges. Labels avoid `bot`; `top` is common.
pub fn random_graph<D: Degree, R: Rng>(
    rng: &mut R,
    lattice: &SortLattice<D>,
    max_tags: usize,
    prefix: &str,
) -> OsfGraph {
    let sig = lattice.signature();
    let features: Vec<FeatureId> = sig.features().collect();
    let n = if features.is_empty() {
        1
    } else {
        rng.random_range(1..=max_tags.max(1))
    };
    let sorts: Vec<SortId> = sig.sorts().filter(|&s| s != SortId::BOT).collect();
    let tag = |i: usize| Tag::new(format!("{prefix}{i}"));
    let labels: BTreeMap<Tag, SortId> = (0..n)
        .map(|i| {
            let s = if rng.random_bool(0.25) {
                SortId::TOP
            } else {
                *sorts.choose(rng).expect("sorts")
            };
            (tag(i), s)
        })
        .collect();
    let mut out: Vec<BTreeMap<FeatureId, Tag>> = vec![BTreeMap::new(); n];
    for i in 1..n {
        let parents: Vec<usize> = (0..i).filter(|&p| out[p].len() < features.len()).collect();
        let p = *parents.choose(rng).expect("the previous node has no edges yet");
        let free: Vec<FeatureId> =
            features.iter().copied().filter(|f| !out[p].contains_key(f)).collect();
        out[p].insert(*free.choose(rng).expect("free feature"), tag(i));
    }
    for _ in 0..rng.random_range(0..=n) {
        let x = rng.random_range(0..n);
        let free: Vec<FeatureId> =
            features.iter().copied().filter(|f| !out[x].contains_key(f)).collect();
        if let Some(&f) = free.choose(rng) {
            out[x].insert(f, tag(rng.random_range(0..n)));
        }
    }
    let edges = out.into_iter().enumerate().map(|(i, m)| (tag(i), m)).collect();
    OsfGraph::from_parts(tag(0), labels, edges).expect("tree edges reach every node")
}

/// A more general graph: labels raised within the support order and some
/// edges removed.
pub fn generalize<D: Degree, R: Rng>(
    rng: &mut R,
    lattice: &SortLattice<D>,
    graph: &OsfGraph,
) -> OsfGraph {
    let labels: BTreeMap<Tag, SortId> = graph
        .labels()
        .iter()
        .map(|(t, &s)| {
            let above: Vec<SortId> = lattice
                .signature()
                .sorts()
                .filter(|&u| lattice.support().leq(s, u))
                .collect();
            let s = if rng.random_bool(0.5) { *above.choose(rng).expect("s itself") } else { s };
            (t.clone(), s)
        })
        .collect();
    let mut edges: BTreeMap<Tag, BTreeMap<FeatureId, Tag>> = BTreeMap::new();
    for t in graph.labels().keys() {
        for (f, y) in graph.successors(t) {
            if rng.random_bool(0.8) {
                edges.entry(t.clone()).or_default().insert(f, y.clone());
            }
        }
    }
    // Dropping edges may strand nodes; keep only what is still reachable.
    let mut keep = std::collections::HashSet::from([graph.root().clone()]);
    let mut stack = vec![graph.root().clone()];
    while let Some(x) = stack.pop() {
        for y in edges.get(&x).into_iter().flat_map(|m| m.values()) {
            if keep.insert(y.clone()) {
                stack.push(y.clone());
            }
        }
    }
    let labels: BTreeMap<Tag, SortId> =
        labels.into_iter().filter(|(t, _)| keep.contains(t)).collect();
    edges.retain(|t, _| keep.contains(t));
    OsfGraph::from_parts(graph.root().clone(), labels, edges).expect("reachable part")
}

/// A clause over tags `T0..` mixing all three constraint kinds; `bot`
/// appears rarely.
pub fn random_clause<D: Degree, R: Rng>(
    rng: &mut R,
    lattice: &SortLattice<D>,
    max_tags: usize,
    max_constraints: usize,
) -> Clause {
    let sig = lattice.signature();
    let n = rng.random_range(1..=max_tags.max(1));
    let tag = |i: usize| Tag::new(format!("T{i}"));
    let sorts: Vec<SortId> = sig.sorts().filter(|&s| s != SortId::BOT).collect();
    let features: Vec<FeatureId> = sig.features().collect();
    let k = rng.random_range(1..=max_constraints.max(1));
    let constraints = (0..k)
        .map(|_| {
            let x = tag(rng.random_range(0..n));
            let y = tag(rng.random_range(0..n));
            match rng.random_range(0..10) {
                0..=3 => {
                    let s = if rng.random_bool(0.03) {
                        SortId::BOT
                    } else {
                        *sorts.choose(rng).expect("sorts")
                    };
                    Constraint::Sort(x, s)
                }
                4..=7 if !features.is_empty() => {
                    Constraint::Feature(x, *features.choose(rng).expect("features"), y)
                }
                _ => Constraint::Eq(x, y),
            }
        })
        .collect();
    Clause::new(constraints)
}
