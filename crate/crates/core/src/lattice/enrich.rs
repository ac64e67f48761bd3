use std::collections::BTreeMap;

use crate::degree::Degree;
use crate::error::LatticeError;
use crate::signature::SortId;

use super::{Edge, SubsumptionGraph};

/// A symmetric similarity between sorts; reflexive pairs are implicitly 1.
#[derive(Clone, Debug, Default)]
pub struct SimilarityRelation<D> {
    pairs: BTreeMap<(SortId, SortId), D>,
}

impl<D: Degree> SimilarityRelation<D> {
    pub fn new() -> Self {
        SimilarityRelation {
            pairs: BTreeMap::new(),
        }
    }

    /// Record `sim(a, b) = sim(b, a) = degree`. Conflicting or non-reflexive
    /// entries are rejected.
    pub fn insert(&mut self, a: SortId, b: SortId, degree: D) -> Result<(), LatticeError> {
        let invalid = || LatticeError::InvalidSimilarity {
            a: a.to_string(),
            b: b.to_string(),
        };
        if !degree.in_unit_interval() || (a == b && degree != D::one()) {
            return Err(invalid());
        }
        if a == b {
            return Ok(());
        }
        if let Some(&old) = self.pairs.get(&(a, b)) {
            if old != degree {
                return Err(invalid());
            }
        }
        self.pairs.insert((a, b), degree);
        self.pairs.insert((b, a), degree);
        Ok(())
    }

    pub fn get(&self, a: SortId, b: SortId) -> D {
        if a == b {
            return D::one();
        }
        self.pairs.get(&(a, b)).copied().unwrap_or_else(D::zero)
    }

    /// Positive similarities of `a` to other sorts.
    pub fn neighbours(&self, a: SortId) -> impl Iterator<Item = (SortId, D)> + '_ {
        self.pairs
            .range((a, SortId(0))..=(a, SortId(u32::MAX)))
            .filter(|(_, d)| **d > D::zero())
            .map(|(&(_, b), &d)| (b, d))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DropReason {
    SelfEdge,
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DroppedEdge<D> {
    pub edge: Edge<D>,
    pub reason: DropReason,
}

#[derive(Clone, Debug)]
pub struct Enrichment<D> {
    pub graph: SubsumptionGraph<D>,
    pub added: Vec<Edge<D>>,
    pub dropped: Vec<DroppedEdge<D>>,
}

/// Derive fuzzy edges from a crisp hierarchy and a similarity: whenever
/// `s` lies strictly below `u` and `u` is similar to `w` to degree `b`,
/// add `s -> w` with degree `b`.
///
/// One derivation pass over the crisp paths; repeated derivations of the
/// same pair keep the maximum. Candidates are then inserted in sort-id
/// order, and any that would close a cycle (or are self-edges) are dropped
/// and reported.
pub fn enrich_from_similarity<D: Degree>(
    crisp: &SubsumptionGraph<D>,
    sim: &SimilarityRelation<D>,
) -> Result<Enrichment<D>, LatticeError> {
    let sig = crisp.signature();
    if let Some(e) = crisp.edges().iter().find(|e| e.degree != D::one()) {
        return Err(LatticeError::NotCrisp {
            sub: sig.sort_name(e.sub).to_string(),
            sup: sig.sort_name(e.sup).to_string(),
        });
    }
    let n = sig.sort_count();
    let mut candidates: BTreeMap<(SortId, SortId), D> = BTreeMap::new();
    for s in sig.sorts() {
        for u in strict_upset(crisp, s) {
            for (w, b) in sim.neighbours(u) {
                let slot = candidates.entry((s, w)).or_insert(b);
                *slot = slot.max_deg(b);
            }
        }
    }

    let mut adjacency: Vec<Vec<SortId>> = vec![Vec::new(); n];
    for e in crisp.edges() {
        adjacency[e.sub.index()].push(e.sup);
    }
    let mut edges = crisp.edges().to_vec();
    let mut added = Vec::new();
    let mut dropped = Vec::new();
    for ((s, w), degree) in candidates {
        let edge = Edge { sub: s, sup: w, degree };
        if s == w {
            dropped.push(DroppedEdge { edge, reason: DropReason::SelfEdge });
        } else if adjacency[s.index()].contains(&w) {
            continue;
        } else if w == SortId::BOT || s == SortId::TOP || reaches(&adjacency, w, s) {
            dropped.push(DroppedEdge { edge, reason: DropReason::Cycle });
        } else {
            adjacency[s.index()].push(w);
            edges.push(edge);
            added.push(edge);
        }
    }
    let graph = SubsumptionGraph::new(sig.clone(), edges)?;
    Ok(Enrichment { graph, added, dropped })
}

fn strict_upset<D: Degree>(graph: &SubsumptionGraph<D>, s: SortId) -> Vec<SortId> {
    let mut seen = vec![false; graph.signature().sort_count()];
    let mut stack = vec![s];
    let mut out = Vec::new();
    while let Some(x) = stack.pop() {
        for &(y, _) in graph.supersorts(x) {
            if !seen[y.index()] {
                seen[y.index()] = true;
                out.push(y);
                stack.push(y);
            }
        }
    }
    out.sort();
    out
}

fn reaches(adjacency: &[Vec<SortId>], from: SortId, to: SortId) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        if !std::mem::replace(&mut seen[x.index()], true) {
            stack.extend(adjacency[x.index()].iter().copied());
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_signature;

    #[test]
    fn similarity_lifts_through_crisp_paths() {
        let g = build_signature(
            &["slasher", "horror", "thriller"],
            &[] as &[&str],
            &[("slasher", "horror", 1.0)],
        )
        .unwrap();
        let id = |n: &str| g.signature().sort(n).unwrap();
        let mut sim = SimilarityRelation::new();
        sim.insert(id("horror"), id("thriller"), 0.6).unwrap();
        let out = enrich_from_similarity(&g, &sim).unwrap();
        assert_eq!(
            out.added,
            vec![Edge { sub: id("slasher"), sup: id("thriller"), degree: 0.6 }]
        );
        assert!(out.dropped.is_empty());
        assert_eq!(out.graph.edges().len(), 2);
    }

    #[test]
    fn self_and_cyclic_edges_are_dropped() {
        let g = build_signature(&["a", "b"], &[] as &[&str], &[("a", "b", 1.0)]).unwrap();
        let id = |n: &str| g.signature().sort(n).unwrap();
        let mut sim = SimilarityRelation::new();
        sim.insert(id("b"), id("a"), 0.3).unwrap();
        let out = enrich_from_similarity(&g, &sim).unwrap();
        assert!(out.added.is_empty());
        assert_eq!(out.dropped.len(), 1);
        assert_eq!(out.dropped[0].reason, DropReason::SelfEdge);
        assert_eq!(out.graph.edges(), g.edges());
    }

    #[test]
    fn similarity_must_be_consistent() {
        let mut sim = SimilarityRelation::<f64>::new();
        sim.insert(SortId(2), SortId(3), 0.5).unwrap();
        assert!(sim.insert(SortId(3), SortId(2), 0.4).is_err());
        assert!(sim.insert(SortId(2), SortId(2), 0.4).is_err());
        assert_eq!(sim.get(SortId(3), SortId(2)), 0.5);
    }

    #[test]
    fn fuzzy_input_is_rejected() {
        let g = build_signature(&["a", "b"], &[] as &[&str], &[("a", "b", 0.5)]).unwrap();
        let sim = SimilarityRelation::new();
        assert!(matches!(
            enrich_from_similarity(&g, &sim),
            Err(LatticeError::NotCrisp { .. })
        ));
    }
}
