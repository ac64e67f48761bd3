//! Fuzzy interpretations, term denotations, clause satisfaction and
//! morphisms between interpretations. This is the reference semantics the
//! syntactic algorithms are checked against.

mod harness;
pub mod random;
pub mod samples;

pub use harness::{check_theorems, CheckOutcome, HarnessConfig, TheoremReport};

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::degree::Degree;
use crate::graphs::{GraphAlgebraElement, OsfGraph};
use crate::lattice::SortLattice;
use crate::signature::{FeatureId, Signature, SortId};
use crate::terms::{Clause, Constraint, Tag, Term};

/// A structure interpreting sorts as fuzzy subsets and features as total
/// functions.
pub trait FuzzyAlgebra<D: Degree> {
    type Elem: Clone + Eq + Hash + Debug;

    fn signature(&self) -> &Signature;

    fn sort_degree(&self, s: SortId, e: &Self::Elem) -> D;

    fn apply(&self, f: FeatureId, e: &Self::Elem) -> Self::Elem;

    /// Elements that belong to `top` only and whose feature values are all
    /// fresh and unshared. Morphism search does not need to look past them.
    fn is_free(&self, _e: &Self::Elem) -> bool {
        false
    }
}

/// A finite interpretation over elements `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interpretation<D> {
    signature: Signature,
    names: Vec<String>,
    degrees: Vec<Vec<D>>,
    features: Vec<Vec<usize>>,
}

impl<D: Degree> Interpretation<D> {
    /// `top` is 1 and every other sort 0 on all elements; every feature
    /// initially maps each element to itself.
    pub fn new(signature: Signature, names: Vec<String>) -> Self {
        let n = names.len();
        let mut row = vec![D::zero(); signature.sort_count()];
        row[SortId::TOP.index()] = D::one();
        Interpretation {
            degrees: vec![row; n],
            features: vec![(0..n).collect(); signature.feature_count()],
            signature,
            names,
        }
    }

    pub fn domain_size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, s: SortId, e: usize) -> D {
        self.degrees[e][s.index()]
    }

    pub fn set_degree(&mut self, s: SortId, e: usize, d: D) {
        self.degrees[e][s.index()] = d;
    }

    pub fn feature(&self, f: FeatureId, e: usize) -> usize {
        self.features[f.index()][e]
    }

    pub fn set_feature(&mut self, f: FeatureId, e: usize, target: usize) {
        self.features[f.index()][e] = target;
    }
}

impl<D: Degree> FuzzyAlgebra<D> for Interpretation<D> {
    type Elem = usize;

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn sort_degree(&self, s: SortId, e: &usize) -> D {
        self.degree(s, *e)
    }

    fn apply(&self, f: FeatureId, e: &usize) -> usize {
        self.feature(f, *e)
    }
}

/// The algebra of rooted OSF graphs over a lattice.
#[derive(Clone, Copy, Debug)]
pub struct GraphAlgebra<'a, D> {
    lattice: &'a SortLattice<D>,
}

impl<'a, D: Degree> GraphAlgebra<'a, D> {
    pub fn new(lattice: &'a SortLattice<D>) -> Self {
        GraphAlgebra { lattice }
    }
}

impl<D: Degree> FuzzyAlgebra<D> for GraphAlgebra<'_, D> {
    type Elem = GraphAlgebraElement;

    fn signature(&self) -> &Signature {
        self.lattice.signature()
    }

    fn sort_degree(&self, s: SortId, e: &GraphAlgebraElement) -> D {
        self.lattice.degree(e.root_label(), s)
    }

    fn apply(&self, f: FeatureId, e: &GraphAlgebraElement) -> GraphAlgebraElement {
        e.apply_feature(f)
    }

    fn is_free(&self, e: &GraphAlgebraElement) -> bool {
        e.is_trivial()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutOfRange { sort: String, elem: String },
    TopNotOne { elem: String },
    BotNotZero { elem: String },
    /// `deg(s0, e) min degree(s0, s1) > deg(s1, e)`
    NotMonotone { s0: String, s1: String, elem: String },
    /// Both sorts hold positively but their GLB does not.
    GlbNotPositive { s0: String, s1: String, elem: String },
    FeatureOutOfDomain { feature: String, elem: String },
}

/// All violated conditions of an interpretation.
pub fn validate_interpretation<D: Degree>(
    interp: &Interpretation<D>,
    lattice: &SortLattice<D>,
) -> Vec<Violation> {
    let sig = lattice.signature();
    let n = interp.domain_size();
    let sname = |s: SortId| sig.sort_name(s).to_string();
    let mut out = Vec::new();
    for f in sig.features() {
        for e in 0..n {
            if interp.features.get(f.index()).and_then(|m| m.get(e)).is_none_or(|&t| t >= n) {
                out.push(Violation::FeatureOutOfDomain {
                    feature: sig.feature_name(f).to_string(),
                    elem: interp.name(e).to_string(),
                });
            }
        }
    }
    for e in 0..n {
        let elem = || interp.name(e).to_string();
        for s in sig.sorts() {
            if !interp.degree(s, e).in_unit_interval() {
                out.push(Violation::OutOfRange { sort: sname(s), elem: elem() });
            }
        }
        if interp.degree(SortId::TOP, e) != D::one() {
            out.push(Violation::TopNotOne { elem: elem() });
        }
        if interp.degree(SortId::BOT, e) != D::zero() {
            out.push(Violation::BotNotZero { elem: elem() });
        }
        for s0 in sig.sorts() {
            let d0 = interp.degree(s0, e);
            if d0 <= D::zero() {
                continue;
            }
            for s1 in sig.sorts() {
                let d1 = interp.degree(s1, e);
                if d0.min_deg(lattice.degree(s0, s1)) > d1 {
                    out.push(Violation::NotMonotone { s0: sname(s0), s1: sname(s1), elem: elem() });
                }
                if s0 < s1
                    && d1 > D::zero()
                    && interp.degree(lattice.glb(s0, s1), e) <= D::zero()
                {
                    out.push(Violation::GlbNotPositive { s0: sname(s0), s1: sname(s1), elem: elem() });
                }
            }
        }
    }
    out
}

/// A map from tags to elements.
pub type Assignment<E> = HashMap<Tag, E>;

/// Elements reached by each node of `term` when its root sits at `at`.
fn node_elements<D: Degree, A: FuzzyAlgebra<D>>(term: &Term, alg: &A, at: &A::Elem) -> Vec<A::Elem> {
    let mut elems: Vec<Option<A::Elem>> = vec![None; term.len()];
    elems[0] = Some(at.clone());
    for (i, n) in term.nodes().iter().enumerate() {
        let here = elems[i].clone().expect("parent precedes child");
        for &(f, c) in &n.args {
            elems[c] = Some(alg.apply(f, &here));
        }
    }
    elems.into_iter().map(|e| e.expect("every node reached")).collect()
}

/// Denotation of `term` at element `at` under assignment `alpha`: the
/// least membership degree over all occurrences, or 0 if some occurrence
/// does not sit at the element its tag is assigned.
pub fn denote_at<D: Degree, A: FuzzyAlgebra<D>>(
    term: &Term,
    alg: &A,
    alpha: &Assignment<A::Elem>,
    at: &A::Elem,
) -> D {
    let elems = node_elements(term, alg, at);
    let mut value = D::one();
    for (n, e) in term.nodes().iter().zip(&elems) {
        if alpha.get(&n.tag) != Some(e) {
            return D::zero();
        }
        value = value.min_deg(alg.sort_degree(n.sort, e));
    }
    value
}

/// Denotation at the element assigned to the root tag.
pub fn denote<D: Degree, A: FuzzyAlgebra<D>>(
    term: &Term,
    alg: &A,
    alpha: &Assignment<A::Elem>,
) -> D {
    match alpha.get(term.root_tag()) {
        Some(at) => denote_at(term, alg, alpha, at),
        None => D::zero(),
    }
}

/// The only assignment that can give `term` a positive denotation at `at`,
/// or `None` when the term's coreferences are violated there.
pub fn forced_assignment<D: Degree, A: FuzzyAlgebra<D>>(
    term: &Term,
    alg: &A,
    at: &A::Elem,
) -> Option<Assignment<A::Elem>> {
    let elems = node_elements(term, alg, at);
    let mut alpha = Assignment::new();
    for (n, e) in term.nodes().iter().zip(elems) {
        match alpha.get(&n.tag) {
            Some(prev) if *prev != e => return None,
            Some(_) => {}
            None => {
                alpha.insert(n.tag.clone(), e);
            }
        }
    }
    Some(alpha)
}

/// Denotation at `at` maximized over assignments.
pub fn denotation_at<D: Degree, A: FuzzyAlgebra<D>>(term: &Term, alg: &A, at: &A::Elem) -> D {
    match forced_assignment(term, alg, at) {
        Some(alpha) => denote_at(term, alg, &alpha, at),
        None => D::zero(),
    }
}

/// `alg, alpha` satisfy `clause` to degree `beta`: every sort constraint
/// holds to at least `beta`, and for positive `beta` every equation holds.
pub fn satisfies<D: Degree, A: FuzzyAlgebra<D>>(
    clause: &Clause,
    alg: &A,
    alpha: &Assignment<A::Elem>,
    beta: D,
) -> bool {
    clause.constraints.iter().all(|c| match c {
        Constraint::Sort(x, s) => alpha.get(x).is_some_and(|e| alg.sort_degree(*s, e) >= beta),
        Constraint::Feature(x, f, y) => {
            beta <= D::zero()
                || matches!((alpha.get(x), alpha.get(y)), (Some(a), Some(b)) if alg.apply(*f, a) == *b)
        }
        Constraint::Eq(x, y) => {
            beta <= D::zero() || matches!((alpha.get(x), alpha.get(y)), (Some(a), Some(b)) if a == b)
        }
    })
}

/// The largest `beta` with `satisfies(clause, alg, alpha, beta)`.
pub fn max_satisfaction_degree<D: Degree, A: FuzzyAlgebra<D>>(
    clause: &Clause,
    alg: &A,
    alpha: &Assignment<A::Elem>,
) -> D {
    let mut value = D::one();
    for c in &clause.constraints {
        let holds = match c {
            Constraint::Sort(x, s) => {
                let Some(e) = alpha.get(x) else { return D::zero() };
                value = value.min_deg(alg.sort_degree(*s, e));
                true
            }
            Constraint::Feature(x, f, y) => {
                matches!((alpha.get(x), alpha.get(y)), (Some(a), Some(b)) if alg.apply(*f, a) == *b)
            }
            Constraint::Eq(x, y) => {
                matches!((alpha.get(x), alpha.get(y)), (Some(a), Some(b)) if a == b)
            }
        };
        if !holds {
            return D::zero();
        }
    }
    value
}

/// The subinterpretation generated by `seeds`, and for each of its elements
/// the element of `interp` it came from.
pub fn generated_subalgebra<D: Degree>(
    interp: &Interpretation<D>,
    seeds: &[usize],
) -> (Interpretation<D>, Vec<usize>) {
    let mut order: Vec<usize> = Vec::new();
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in seeds {
        if let std::collections::hash_map::Entry::Vacant(v) = index.entry(s) {
            v.insert(order.len());
            order.push(s);
            queue.push_back(s);
        }
    }
    let features: Vec<FeatureId> = interp.signature.features().collect();
    while let Some(e) = queue.pop_front() {
        for &f in &features {
            let t = interp.feature(f, e);
            if let std::collections::hash_map::Entry::Vacant(v) = index.entry(t) {
                v.insert(order.len());
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    let sub = Interpretation {
        signature: interp.signature.clone(),
        names: order.iter().map(|&e| interp.names[e].clone()).collect(),
        degrees: order.iter().map(|&e| interp.degrees[e].clone()).collect(),
        features: features
            .iter()
            .map(|&f| order.iter().map(|&e| index[&interp.feature(f, e)]).collect())
            .collect(),
    };
    (sub, order)
}

/// A feature-preserving map and the largest `beta` for which it is a
/// `beta`-morphism: `deg(s, e) min beta <= deg'(s, gamma(e))` everywhere.
#[derive(Clone, Debug)]
pub struct Morphism<E, F, D> {
    pub pairs: Vec<(E, F)>,
    pub max_beta: D,
}

impl<E: PartialEq, F, D> Morphism<E, F, D> {
    pub fn image(&self, e: &E) -> Option<&F> {
        self.pairs.iter().find(|(a, _)| a == e).map(|(_, b)| b)
    }
}

/// The unique feature-preserving map from the part of `from` generated by
/// `anchor` into `to` sending `anchor` to `target`, if one exists.
///
/// Free elements are mapped but not expanded; their successors are
/// unconstrained. `max_beta` may be 0.
pub fn find_morphism<D: Degree, A: FuzzyAlgebra<D>, B: FuzzyAlgebra<D>>(
    from: &A,
    to: &B,
    anchor: A::Elem,
    target: B::Elem,
) -> Option<Morphism<A::Elem, B::Elem, D>> {
    let features: Vec<FeatureId> = from.signature().features().collect();
    let mut map: HashMap<A::Elem, usize> = HashMap::new();
    let mut pairs: Vec<(A::Elem, B::Elem)> = Vec::new();
    map.insert(anchor.clone(), 0);
    pairs.push((anchor, target));
    let mut next = 0;
    while next < pairs.len() {
        let (e, g) = pairs[next].clone();
        next += 1;
        if from.is_free(&e) {
            continue;
        }
        for &f in &features {
            let e2 = from.apply(f, &e);
            let g2 = to.apply(f, &g);
            match map.get(&e2) {
                Some(&k) => {
                    if pairs[k].1 != g2 {
                        return None;
                    }
                }
                None => {
                    map.insert(e2.clone(), pairs.len());
                    pairs.push((e2, g2));
                }
            }
        }
    }
    let sorts: Vec<SortId> = from.signature().sorts().collect();
    let mut max_beta = D::one();
    for (e, g) in &pairs {
        for &s in &sorts {
            let have = to.sort_degree(s, g);
            if from.sort_degree(s, e) > have {
                max_beta = max_beta.min_deg(have);
            }
        }
    }
    Some(Morphism { pairs, max_beta })
}

/// Send each element `d` to a graph with one node per element reachable
/// from `d`, labeled by the GLB of that element's positive sorts, with
/// the features as edges. Returns the images and the degree the
/// construction guarantees.
pub fn weak_final_images<D: Degree>(
    interp: &Interpretation<D>,
    lattice: &SortLattice<D>,
) -> (Vec<GraphAlgebraElement>, D) {
    let sig = lattice.signature();
    let n = interp.domain_size();
    let support = |e: usize| sig.sorts().filter(move |&s| interp.degree(s, e) > D::zero());
    let labels: Vec<SortId> = (0..n).map(|e| lattice.glb_all(support(e))).collect();
    let mut beta = D::one();
    for (e, &label) in labels.iter().enumerate() {
        for s in support(e) {
            beta = beta.min_deg(lattice.degree(label, s));
        }
    }
    let tag = |e: usize| Tag::new(format!("E{e}"));
    let images = (0..n)
        .map(|d| {
            let (_, members) = generated_subalgebra(interp, &[d]);
            let graph = OsfGraph::from_parts(
                tag(d),
                members.iter().map(|&e| (tag(e), labels[e])).collect(),
                members
                    .iter()
                    .map(|&e| {
                        let out = sig.features().map(|f| (f, tag(interp.feature(f, e)))).collect();
                        (tag(e), out)
                    })
                    .collect(),
            )
            .expect("labels are positive sorts and every node is reachable");
            GraphAlgebraElement::Concrete(graph)
        })
        .collect();
    (images, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::samples::{FILM_INTERPRETATION, MOVIE_ONTOLOGY};
    use crate::formats::{parse_interpretation, parse_ontology};
    use crate::lattice::validate_lattice;
    use crate::terms::{parse_clause, parse_term, NormalTerm};

    fn setup() -> (SortLattice<f64>, Interpretation<f64>) {
        let l = validate_lattice(parse_ontology(MOVIE_ONTOLOGY).unwrap().graph).unwrap();
        let i = parse_interpretation(FILM_INTERPRETATION, l.signature()).unwrap();
        (l, i)
    }

    #[test]
    fn film_interpretation_is_valid() {
        let (l, i) = setup();
        assert_eq!(validate_interpretation(&i, &l), vec![]);
        let mut bad = i.clone();
        bad.set_degree(l.sort("thriller"), i.element("halloween").unwrap(), 0.2);
        assert!(matches!(
            validate_interpretation(&bad, &l).as_slice(),
            [Violation::NotMonotone { .. }]
        ));
    }

    #[test]
    fn denotation_with_assignment() {
        let (l, i) = setup();
        let t = parse_term("X: thriller(directed_by -> Y: director)", l.signature()).unwrap();
        let h = i.element("halloween").unwrap();
        let c = i.element("carpenter").unwrap();
        let alpha = Assignment::from([(Tag::new("X"), h), (Tag::new("Y"), c)]);
        assert_eq!(denote(&t, &i, &alpha), 0.5);
        assert_eq!(denotation_at(&t, &i, &h), 0.5);
        let wrong = Assignment::from([(Tag::new("X"), h), (Tag::new("Y"), h)]);
        assert_eq!(denote(&t, &i, &wrong), 0.0);
        let clause = crate::terms::term_to_clause(&t);
        assert!(satisfies(&clause, &i, &alpha, 0.5));
        assert!(!satisfies(&clause, &i, &alpha, 0.6));
        assert_eq!(max_satisfaction_degree(&clause, &i, &alpha), 0.5);
    }

    #[test]
    fn inconsistent_term_denotes_nothing() {
        let (l, i) = setup();
        let t = parse_term(
            "X: movie(directed_by -> Y: director, directed_by -> Y: string)",
            l.signature(),
        )
        .unwrap();
        for d in 0..i.domain_size() {
            assert_eq!(denotation_at(&t, &i, &d), 0.0);
        }
    }

    #[test]
    fn morphism_from_graph_algebra() {
        let (l, i) = setup();
        let t = parse_term("X: thriller(directed_by -> Y: director)", l.signature()).unwrap();
        let g = NormalTerm::new(t).unwrap().into_graph();
        let m = find_morphism(
            &GraphAlgebra::new(&l),
            &i,
            GraphAlgebraElement::Concrete(g),
            i.element("halloween").unwrap(),
        )
        .unwrap();
        assert_eq!(m.max_beta, 0.5);
    }

    #[test]
    fn subalgebra_is_closed() {
        let (_, i) = setup();
        let (sub, order) = generated_subalgebra(&i, &[i.element("psycho").unwrap()]);
        assert_eq!(sub.domain_size(), 4);
        assert_eq!(order[0], i.element("psycho").unwrap());
        assert_eq!(sub.name(sub.feature(FeatureId(0), 0)), "hitchcock");
    }

    #[test]
    fn weak_finality_construction() {
        let (l, i) = setup();
        let (images, beta) = weak_final_images(&i, &l);
        assert!(beta > 0.0);
        let alg = GraphAlgebra::new(&l);
        for (d, image) in images.iter().enumerate() {
            let m = find_morphism(&i, &alg, d, image.clone()).unwrap();
            assert!(m.max_beta >= beta);
        }
    }

    #[test]
    fn clause_satisfaction_needs_equations() {
        let (l, i) = setup();
        let c = parse_clause("X: movie & X.title = Y & Y: string", l.signature()).unwrap();
        let p = i.element("psycho").unwrap();
        let alpha = Assignment::from([(Tag::new("X"), p), (Tag::new("Y"), p)]);
        assert!(!satisfies(&c, &i, &alpha, 0.1));
        assert!(satisfies(&c, &i, &alpha, 0.0));
    }
}
