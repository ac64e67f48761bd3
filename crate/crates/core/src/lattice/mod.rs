//! Fuzzy sort hierarchies: weighted subsumption DAGs, their max-min closure
//! and the greatest-lower-bound table.

mod closure;
mod enrich;
mod glb;

pub use closure::{maxmin_closure, ClosureTable};
pub use enrich::{enrich_from_similarity, DroppedEdge, DropReason, Enrichment, SimilarityRelation};
pub use glb::{validate_lattice, SortLattice, SupportOrder};

use std::collections::{HashMap, VecDeque};

use crate::degree::Degree;
use crate::error::LatticeError;
use crate::signature::{Signature, SortId};

/// A declared edge `sub -> sup`: `sub` is a subsort of `sup` to `degree`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<D> {
    pub sub: SortId,
    pub sup: SortId,
    pub degree: D,
}

/// The declared graph. Acyclic by construction; `bot` and `top` are bounds
/// without materialized edges.
#[derive(Clone, Debug)]
pub struct SubsumptionGraph<D> {
    signature: Signature,
    edges: Vec<Edge<D>>,
    up: Vec<Vec<(SortId, D)>>,
    topo: Vec<SortId>,
}

/// Convenience constructor over names.
pub fn build_signature<D: Degree, S: AsRef<str>, F: AsRef<str>>(
    sorts: &[S],
    features: &[F],
    edges: &[(&str, &str, D)],
) -> Result<SubsumptionGraph<D>, LatticeError> {
    let signature = Signature::new(sorts, features)?;
    let mut resolved = Vec::with_capacity(edges.len());
    for &(sub, sup, degree) in edges {
        let lookup = |name: &str| {
            signature
                .sort(name)
                .ok_or_else(|| LatticeError::UnknownSort(name.to_string()))
        };
        resolved.push(Edge {
            sub: lookup(sub)?,
            sup: lookup(sup)?,
            degree,
        });
    }
    SubsumptionGraph::new(signature, resolved)
}

impl<D: Degree> SubsumptionGraph<D> {
    /// Validate degrees and acyclicity. Repeated edges keep the larger degree.
    pub fn new(signature: Signature, edges: Vec<Edge<D>>) -> Result<Self, LatticeError> {
        let n = signature.sort_count();
        let name = |s: SortId| signature.sort_name(s).to_string();
        let mut kept: Vec<Edge<D>> = Vec::with_capacity(edges.len());
        let mut seen: HashMap<(SortId, SortId), usize> = HashMap::new();
        for e in edges {
            if !signature.has_sort(e.sub) || !signature.has_sort(e.sup) {
                return Err(LatticeError::UnknownSort(format!("{:?}", (e.sub, e.sup))));
            }
            if !e.degree.is_positive_degree() {
                return Err(LatticeError::DegreeOutOfRange {
                    sub: name(e.sub),
                    sup: name(e.sup),
                    degree: e.degree.to_string(),
                });
            }
            if e.sub == e.sup {
                return Err(LatticeError::CycleDetected(vec![name(e.sub), name(e.sub)]));
            }
            if e.sup == SortId::BOT || e.sub == SortId::TOP {
                return Err(LatticeError::CycleDetected(vec![
                    name(e.sub),
                    name(e.sup),
                    name(e.sub),
                ]));
            }
            match seen.get(&(e.sub, e.sup)) {
                Some(&i) => kept[i].degree = kept[i].degree.max_deg(e.degree),
                None => {
                    seen.insert((e.sub, e.sup), kept.len());
                    kept.push(e);
                }
            }
        }
        let mut up = vec![Vec::new(); n];
        for e in &kept {
            up[e.sub.index()].push((e.sup, e.degree));
        }
        let topo = topological_order(&up).map_err(|cycle| {
            LatticeError::CycleDetected(cycle.into_iter().map(name).collect())
        })?;
        Ok(SubsumptionGraph {
            signature,
            edges: kept,
            up,
            topo,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn edges(&self) -> &[Edge<D>] {
        &self.edges
    }

    /// Direct supersorts of `s` with edge degrees.
    pub fn supersorts(&self, s: SortId) -> &[(SortId, D)] {
        &self.up[s.index()]
    }

    /// Sorts listed so that every edge goes from earlier to later.
    pub fn topological(&self) -> &[SortId] {
        &self.topo
    }

    /// The max-min closure, computed lazily row by row.
    pub fn closure(&self) -> ClosureTable<D> {
        ClosureTable::new(self)
    }

    /// Crisp reachability along declared edges, ignoring the implicit bounds.
    pub fn reaches(&self, from: SortId, to: SortId) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.up.len()];
        let mut stack = vec![from];
        seen[from.index()] = true;
        while let Some(s) = stack.pop() {
            for &(t, _) in &self.up[s.index()] {
                if t == to {
                    return true;
                }
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    stack.push(t);
                }
            }
        }
        false
    }
}

/// Kahn's algorithm; on failure returns one cycle in edge order.
fn topological_order<D>(up: &[Vec<(SortId, D)>]) -> Result<Vec<SortId>, Vec<SortId>> {
    let n = up.len();
    let mut indegree = vec![0usize; n];
    for outs in up {
        for &(t, _) in outs {
            indegree[t.index()] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = queue.pop_front() {
        order.push(SortId(i as u32));
        for &(t, _) in &up[i] {
            indegree[t.index()] -= 1;
            if indegree[t.index()] == 0 {
                queue.push_back(t.index());
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover node has a leftover successor; walk until a repeat.
    let leftover: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
    let start = leftover.iter().position(|&b| b).expect("leftover node");
    let mut position = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while position[cur] == usize::MAX {
        position[cur] = walk.len();
        walk.push(SortId(cur as u32));
        cur = up[cur]
            .iter()
            .map(|&(t, _)| t.index())
            .find(|&t| leftover[t])
            .expect("leftover successor");
    }
    let mut cycle = walk.split_off(position[cur]);
    cycle.push(SortId(cur as u32));
    Err(cycle)
}

/// Graphviz rendering of the declared edges.
pub fn lattice_to_dot<D: Degree>(graph: &SubsumptionGraph<D>) -> String {
    let sig = graph.signature();
    let mut out = String::from("digraph sorts {\n  rankdir=BT;\n");
    for s in sig.sorts() {
        out.push_str(&format!("  \"{}\";\n", sig.sort_name(s)));
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            sig.sort_name(e.sub),
            sig.sort_name(e.sup),
            e.degree
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_cycle_in_order() {
        let err = build_signature(
            &["a", "b", "c"],
            &[] as &[&str],
            &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 0.5)],
        )
        .unwrap_err();
        match err {
            LatticeError::CycleDetected(cycle) => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_edges_against_the_bounds() {
        for (a, b) in [("top", "a"), ("a", "bot"), ("a", "a")] {
            let err = build_signature(&["a"], &[] as &[&str], &[(a, b, 1.0)]).unwrap_err();
            assert!(matches!(err, LatticeError::CycleDetected(_)), "{a} {b}");
        }
    }

    #[test]
    fn rejects_degrees_outside_unit_interval() {
        for d in [0.0, -0.1, 1.5, f64::NAN] {
            let err = build_signature(&["a", "b"], &[] as &[&str], &[("a", "b", d)]).unwrap_err();
            assert!(matches!(err, LatticeError::DegreeOutOfRange { .. }));
        }
    }

    #[test]
    fn repeated_edges_keep_the_maximum() {
        let g = build_signature(
            &["a", "b"],
            &[] as &[&str],
            &[("a", "b", 0.3), ("a", "b", 0.6)],
        )
        .unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].degree, 0.6);
    }

    #[test]
    fn dot_lists_edges() {
        let g = build_signature(&["a", "b"], &[] as &[&str], &[("a", "b", 0.5)]).unwrap();
        assert!(lattice_to_dot(&g).contains("\"a\" -> \"b\" [label=\"0.5\"]"));
    }
}
