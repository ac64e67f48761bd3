use fixedbitset::FixedBitSet;

use crate::degree::Degree;
use crate::error::LatticeError;
use crate::signature::{Signature, SortId};

use super::{ClosureTable, SubsumptionGraph};

/// The crisp partial order underlying a closure: `s <= t` iff
/// `degree(s, t) > 0`. Stores the down-set of every sort.
#[derive(Clone, Debug)]
pub struct SupportOrder {
    down: Vec<FixedBitSet>,
}

impl SupportOrder {
    pub fn new<D: Degree>(closure: &ClosureTable<D>) -> Self {
        let n = closure.sort_count();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for u in 0..n {
            for (t, d) in closure.row(SortId(u as u32)).iter().enumerate() {
                if *d > D::zero() {
                    down[t].insert(u);
                }
            }
        }
        SupportOrder { down }
    }

    pub fn leq(&self, s: SortId, t: SortId) -> bool {
        self.down[t.index()].contains(s.index())
    }

    /// Greatest common lower bound, or the maximal common lower bounds when
    /// there is no single greatest one.
    pub fn glb(&self, s: SortId, t: SortId) -> Result<SortId, Vec<SortId>> {
        let mut lower = self.down[s.index()].clone();
        lower.intersect_with(&self.down[t.index()]);
        let size = lower.count_ones(..);
        // A lower bound g is the greatest iff every lower bound lies below it;
        // down(g) is always a subset of `lower`, so sizes decide.
        if let Some(g) = lower.ones().find(|&g| self.down[g].count_ones(..) == size) {
            return Ok(SortId(g as u32));
        }
        let maximal = lower
            .ones()
            .filter(|&g| !lower.ones().any(|h| h != g && self.down[h].contains(g)))
            .map(|g| SortId(g as u32))
            .collect();
        Err(maximal)
    }
}

/// A validated fuzzy sort lattice with its closure and GLB table.
#[derive(Debug)]
pub struct SortLattice<D> {
    graph: SubsumptionGraph<D>,
    closure: ClosureTable<D>,
    support: SupportOrder,
    glb: Vec<SortId>,
}

/// Materialize the closure and check that every pair of sorts has a GLB.
pub fn validate_lattice<D: Degree>(
    graph: SubsumptionGraph<D>,
) -> Result<SortLattice<D>, LatticeError> {
    let closure = graph.closure();
    closure.materialize();
    let support = SupportOrder::new(&closure);
    let n = graph.signature().sort_count();
    let mut glb = vec![SortId::BOT; n * n];
    for i in 0..n {
        glb[i * n + i] = SortId(i as u32);
        for j in i + 1..n {
            let (s, t) = (SortId(i as u32), SortId(j as u32));
            let g = support.glb(s, t).map_err(|maximal| {
                let sig = graph.signature();
                LatticeError::NotALattice {
                    s: sig.sort_name(s).to_string(),
                    t: sig.sort_name(t).to_string(),
                    maximal: maximal.iter().map(|&m| sig.sort_name(m).to_string()).collect(),
                }
            })?;
            glb[i * n + j] = g;
            glb[j * n + i] = g;
        }
    }
    Ok(SortLattice {
        graph,
        closure,
        support,
        glb,
    })
}

impl<D: Degree> SortLattice<D> {
    pub fn signature(&self) -> &Signature {
        self.graph.signature()
    }

    pub fn graph(&self) -> &SubsumptionGraph<D> {
        &self.graph
    }

    pub fn closure(&self) -> &ClosureTable<D> {
        &self.closure
    }

    pub fn support(&self) -> &SupportOrder {
        &self.support
    }

    pub fn sort_count(&self) -> usize {
        self.signature().sort_count()
    }

    pub fn degree(&self, s: SortId, t: SortId) -> D {
        self.closure.degree(s, t)
    }

    pub fn glb(&self, s: SortId, t: SortId) -> SortId {
        self.glb[s.index() * self.sort_count() + t.index()]
    }

    /// GLB of a set; `top` for the empty set.
    pub fn glb_all(&self, sorts: impl IntoIterator<Item = SortId>) -> SortId {
        sorts.into_iter().fold(SortId::TOP, |acc, s| self.glb(acc, s))
    }

    /// Name lookup shorthand; panics on an unknown name.
    pub fn sort(&self, name: &str) -> SortId {
        self.signature()
            .sort(name)
            .unwrap_or_else(|| panic!("unknown sort `{name}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_signature;

    fn fig1() -> SortLattice<f64> {
        let g = build_signature(
            &[
                "bot", "director", "person", "string", "slasher", "thriller", "horror", "movie",
                "top",
            ],
            &["directed_by", "title"],
            &[
                ("bot", "director", 1.0),
                ("bot", "slasher", 1.0),
                ("bot", "string", 1.0),
                ("director", "person", 1.0),
                ("slasher", "thriller", 0.5),
                ("slasher", "horror", 1.0),
                ("horror", "movie", 1.0),
                ("thriller", "movie", 1.0),
                ("string", "top", 1.0),
                ("person", "top", 1.0),
                ("movie", "top", 1.0),
            ],
        )
        .unwrap();
        validate_lattice(g).unwrap()
    }

    #[test]
    fn movie_hierarchy() {
        let l = fig1();
        assert_eq!(l.degree(l.sort("slasher"), l.sort("thriller")), 0.5);
        assert_eq!(l.degree(l.sort("slasher"), l.sort("movie")), 1.0);
        assert_eq!(l.glb(l.sort("thriller"), l.sort("horror")), l.sort("slasher"));
        assert_eq!(l.glb(l.sort("director"), l.sort("string")), SortId::BOT);
        assert_eq!(l.glb(l.sort("person"), l.sort("director")), l.sort("director"));
        assert_eq!(l.glb_all([]), SortId::TOP);
    }

    #[test]
    fn diamond_is_rejected() {
        let g = build_signature(
            &["a", "b", "x", "y"],
            &[] as &[&str],
            &[("a", "x", 1.0), ("a", "y", 1.0), ("b", "x", 1.0), ("b", "y", 0.4)],
        )
        .unwrap();
        match validate_lattice(g).unwrap_err() {
            LatticeError::NotALattice { s, t, mut maximal } => {
                assert_eq!((s.as_str(), t.as_str()), ("x", "y"));
                maximal.sort();
                assert_eq!(maximal, vec!["a", "b"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
