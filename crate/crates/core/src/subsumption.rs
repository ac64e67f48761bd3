//! Graded subsumption between normal terms.
//!
//! `psi0` is subsumed by `psi1` to degree `b` when there is a map `h` from
//! the tags of `psi1` to those of `psi0` that sends root to root, commutes
//! with every feature edge of `psi1`, and `b` is the least
//! `degree(sort0(h(X)), sort1(X))`. Such a map is unique when it exists,
//! since it is forced by following edges from the root.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::degree::Degree;
use crate::graphs::OsfGraph;
use crate::lattice::SortLattice;
use crate::signature::{FeatureId, SortId};
use crate::terms::{NormalTerm, Tag};

/// Where a tag of the general term lands in the specific one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Image {
    Tag(Tag),
    /// A `top` node added below `from` along `path` because the specific
    /// term says nothing there.
    Completed { from: Tag, path: Vec<FeatureId> },
}

impl Image {
    pub fn describe(&self, sig: &crate::signature::Signature) -> String {
        match self {
            Image::Tag(t) => t.to_string(),
            Image::Completed { from, path } => {
                let mut s = from.to_string();
                for f in path {
                    s.push('.');
                    s.push_str(sig.feature_name(*f));
                }
                s
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TagDegree<D> {
    pub image_sort: SortId,
    pub sort: SortId,
    pub degree: D,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsumptionWitness<D> {
    pub h: BTreeMap<Tag, Image>,
    pub degree: D,
    pub per_tag: BTreeMap<Tag, TagDegree<D>>,
}

fn traverse<D: Degree>(
    specific: &OsfGraph,
    general: &OsfGraph,
    lattice: &SortLattice<D>,
    complete: bool,
) -> Option<SubsumptionWitness<D>> {
    let mut h: HashMap<&Tag, Image> = HashMap::new();
    h.insert(general.root(), Image::Tag(specific.root().clone()));
    let mut queue = VecDeque::from([general.root()]);
    while let Some(x) = queue.pop_front() {
        let image = h[x].clone();
        for (f, y) in general.successors(x) {
            let target = match &image {
                Image::Tag(t) => match specific.successor(t, f) {
                    Some(z) => Image::Tag(z.clone()),
                    None if complete => Image::Completed {
                        from: t.clone(),
                        path: vec![f],
                    },
                    None => return None,
                },
                Image::Completed { from, path } => {
                    let mut path = path.clone();
                    path.push(f);
                    Image::Completed {
                        from: from.clone(),
                        path,
                    }
                }
            };
            match h.get(y) {
                Some(existing) if *existing != target => return None,
                Some(_) => {}
                None => {
                    h.insert(y, target);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut degree = D::one();
    let mut per_tag = BTreeMap::new();
    for (y, &sort) in general.labels() {
        let image_sort = match &h[y] {
            Image::Tag(t) => specific.label(t).expect("image is a node"),
            Image::Completed { .. } => SortId::TOP,
        };
        let d = lattice.degree(image_sort, sort);
        degree = degree.min_deg(d);
        per_tag.insert(
            y.clone(),
            TagDegree {
                image_sort,
                sort,
                degree: d,
            },
        );
    }
    Some(SubsumptionWitness {
        h: h.into_iter().map(|(k, v)| (k.clone(), v)).collect(),
        degree,
        per_tag,
    })
}

/// The witness that `psi0` is subsumed by `psi1` using only the nodes of
/// `psi0`. `None` if the edges of `psi1` cannot be followed in `psi0`.
pub fn syntactic_subsumes<D: Degree>(
    psi0: &NormalTerm,
    psi1: &NormalTerm,
    lattice: &SortLattice<D>,
) -> Option<SubsumptionWitness<D>> {
    traverse(psi0.graph(), psi1.graph(), lattice, false)
}

/// Like [`syntactic_subsumes`] but edges missing from `psi0` are supplied
/// by fresh `top` nodes, so `psi0` may leave out attributes `psi1` only
/// mentions with sort `top`.
pub fn fuzzy_subsumption<D: Degree>(
    psi0: &NormalTerm,
    psi1: &NormalTerm,
    lattice: &SortLattice<D>,
) -> Option<SubsumptionWitness<D>> {
    traverse(psi0.graph(), psi1.graph(), lattice, true)
}

/// The degree to which `psi0` is subsumed by `psi1`; 0 without a witness.
pub fn fuzzy_subsumption_degree<D: Degree>(
    psi0: &NormalTerm,
    psi1: &NormalTerm,
    lattice: &SortLattice<D>,
) -> D {
    graph_subsumption_degree(psi0.graph(), psi1.graph(), lattice)
}

pub fn graph_subsumption_degree<D: Degree>(
    specific: &OsfGraph,
    general: &OsfGraph,
    lattice: &SortLattice<D>,
) -> D {
    traverse(specific, general, lattice, true).map_or_else(D::zero, |w| w.degree)
}

/// Subsumption over the support order: the fuzzy degree is positive.
pub fn crisp_subsumes<D: Degree>(
    psi0: &NormalTerm,
    psi1: &NormalTerm,
    lattice: &SortLattice<D>,
) -> bool {
    fuzzy_subsumption_degree(psi0, psi1, lattice) > D::zero()
}

/// How well `g1` approximates `g0`: the degree to which the term of `g1`
/// is subsumed by the term of `g0`.
pub fn approximation_degree<D: Degree>(
    g0: &OsfGraph,
    g1: &OsfGraph,
    lattice: &SortLattice<D>,
) -> D {
    graph_subsumption_degree(g1, g0, lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_signature, validate_lattice};
    use crate::terms::parse_term;

    fn lattice() -> SortLattice<f64> {
        let g = build_signature(
            &["director", "person", "string", "slasher", "thriller", "horror", "movie"],
            &["directed_by", "title", "genre"],
            &[
                ("director", "person", 1.0),
                ("slasher", "thriller", 0.5),
                ("slasher", "horror", 1.0),
                ("horror", "movie", 1.0),
                ("thriller", "movie", 1.0),
            ],
        )
        .unwrap();
        validate_lattice(g).unwrap()
    }

    fn term(l: &SortLattice<f64>, text: &str) -> NormalTerm {
        NormalTerm::new(parse_term(text, l.signature()).unwrap()).unwrap()
    }

    #[test]
    fn graded_witness() {
        let l = lattice();
        let g0 = term(&l, "X0: thriller(directed_by -> Y0: director)");
        let g1 = term(&l, "X1: slasher(directed_by -> Y1: director, title -> Z1: string)");
        let w = syntactic_subsumes(&g1, &g0, &l).unwrap();
        assert_eq!(w.degree, 0.5);
        assert_eq!(w.h[&Tag::new("Y0")], Image::Tag(Tag::new("Y1")));
        assert!(syntactic_subsumes(&g0, &g1, &l).is_none());
        assert_eq!(fuzzy_subsumption_degree(&g0, &g1, &l), 0.0);
        assert_eq!(approximation_degree(g0.graph(), g1.graph(), &l), 0.5);
    }

    #[test]
    fn completion_supplies_top_nodes() {
        let l = lattice();
        let a = term(&l, "X0: movie(genre -> Y0: horror)");
        let b = term(&l, "X1: movie(genre -> Y1: horror, title -> Z1)");
        assert!(syntactic_subsumes(&a, &b, &l).is_none());
        let w = fuzzy_subsumption(&a, &b, &l).unwrap();
        assert_eq!(w.degree, 1.0);
        assert!(matches!(w.h[&Tag::new("Z1")], Image::Completed { .. }));
        assert_eq!(fuzzy_subsumption_degree(&b, &a, &l), 1.0);
    }

    #[test]
    fn coreference_must_be_respected() {
        let l = lattice();
        let shared = term(&l, "X: movie(genre -> Y, title -> Y)");
        let split = term(&l, "X: movie(genre -> Y, title -> Z)");
        assert_eq!(fuzzy_subsumption_degree(&shared, &split, &l), 1.0);
        assert!(fuzzy_subsumption(&split, &shared, &l).is_none());
        assert!(!crisp_subsumes(&split, &shared, &l));
    }
}
