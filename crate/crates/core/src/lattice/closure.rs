use std::sync::OnceLock;

use crate::degree::Degree;
use crate::signature::SortId;

use super::SubsumptionGraph;

/// Max-min transitive closure of a [`SubsumptionGraph`].
///
/// Rows are filled on first use by a widest-path sweep in topological order,
/// so a single query costs `O(|S| + |E|)` and later queries on the same row
/// are lookups. Safe to share between threads.
#[derive(Debug)]
pub struct ClosureTable<D> {
    up: Vec<Vec<(SortId, D)>>,
    topo: Vec<SortId>,
    position: Vec<usize>,
    rows: Vec<OnceLock<Box<[D]>>>,
}

impl<D: Degree> ClosureTable<D> {
    pub(super) fn new(graph: &SubsumptionGraph<D>) -> Self {
        let n = graph.signature().sort_count();
        let topo = graph.topological().to_vec();
        let mut position = vec![0; n];
        for (i, s) in topo.iter().enumerate() {
            position[s.index()] = i;
        }
        let up = (0..n)
            .map(|i| graph.supersorts(SortId(i as u32)).to_vec())
            .collect();
        ClosureTable {
            up,
            topo,
            position,
            rows: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn sort_count(&self) -> usize {
        self.rows.len()
    }

    /// The degree to which `s` is a subsort of `t`.
    pub fn degree(&self, s: SortId, t: SortId) -> D {
        if s == t || s == SortId::BOT || t == SortId::TOP {
            return D::one();
        }
        if s == SortId::TOP || t == SortId::BOT {
            return D::zero();
        }
        self.row(s)[t.index()]
    }

    /// All degrees `degree(s, _)`.
    pub fn row(&self, s: SortId) -> &[D] {
        self.rows[s.index()].get_or_init(|| self.compute_row(s))
    }

    fn compute_row(&self, s: SortId) -> Box<[D]> {
        let n = self.rows.len();
        if s == SortId::BOT {
            return vec![D::one(); n].into_boxed_slice();
        }
        let mut best = vec![D::zero(); n];
        best[s.index()] = D::one();
        for &u in &self.topo[self.position[s.index()]..] {
            let here = best[u.index()];
            if here <= D::zero() {
                continue;
            }
            for &(v, w) in &self.up[u.index()] {
                let via = here.min_deg(w);
                if via > best[v.index()] {
                    best[v.index()] = via;
                }
            }
        }
        best[SortId::TOP.index()] = D::one();
        best.into_boxed_slice()
    }

    /// Fill every row now. Afterwards all queries are lookups.
    pub fn materialize(&self) {
        for i in 0..self.rows.len() {
            self.row(SortId(i as u32));
        }
    }

    pub fn is_materialized(&self) -> bool {
        self.rows.iter().all(|r| r.get().is_some())
    }

    /// Dense copy, `m[s][t] = degree(s, t)`.
    pub fn to_matrix(&self) -> Vec<Vec<D>> {
        (0..self.rows.len())
            .map(|i| {
                let s = SortId(i as u32);
                (0..self.rows.len())
                    .map(|j| self.degree(s, SortId(j as u32)))
                    .collect()
            })
            .collect()
    }
}

/// In-place max-min closure of a square matrix (Warshall's scheme).
///
/// Used as an independent route to the closure and to check idempotence.
pub fn maxmin_closure<D: Degree>(m: &mut [Vec<D>]) {
    for k in 0..m.len() {
        // Row k is unchanged while pivoting on k.
        let row_k = m[k].clone();
        for row in m.iter_mut() {
            let ik = row[k];
            if ik <= D::zero() {
                continue;
            }
            for (slot, &kj) in row.iter_mut().zip(&row_k) {
                let via = ik.min_deg(kj);
                if via > *slot {
                    *slot = via;
                }
            }
        }
    }
}
