use fuzzy_osf::formats::{parse_interpretation, parse_ontology};
use fuzzy_osf::graphs::{graph_equivalent, GraphAlgebraElement};
use fuzzy_osf::lattice::{validate_lattice, SortLattice};
use fuzzy_osf::normalize::normalize_term;
use fuzzy_osf::semantics::{denotation_at, denote, find_morphism, validate_interpretation, Assignment, GraphAlgebra};
use fuzzy_osf::subsumption::{approximation_degree, fuzzy_subsumption, fuzzy_subsumption_degree, syntactic_subsumes};
use fuzzy_osf::terms::term_to_clause;
use fuzzy_osf::{normalize, parse_term, unify, NormalTerm, Rational, SortId, Tag, Unifier};

const MOVIES: &str = include_str!("../../../data/movies.onto");
const GRADED: &str = include_str!("../../../data/graded.onto");
const FILMS: &str = include_str!("../../../data/films.interp");

fn lattice(text: &str) -> SortLattice<f64> {
    validate_lattice(parse_ontology(text).unwrap().graph).unwrap()
}

fn term(l: &SortLattice<f64>, text: &str) -> NormalTerm {
    NormalTerm::new(parse_term(text, l.signature()).unwrap()).unwrap()
}

/// Best path strength by enumerating every path of declared edges.
fn path_oracle(l: &SortLattice<f64>, s: SortId, t: SortId) -> f64 {
    if s == t || s == SortId::BOT || t == SortId::TOP {
        return 1.0;
    }
    let mut best = 0.0f64;
    let mut stack = vec![(s, 1.0f64)];
    while let Some((u, d)) = stack.pop() {
        for &(v, w) in l.graph().supersorts(u) {
            let dv = d.min(w);
            if v == t {
                best = best.max(dv);
            } else {
                stack.push((v, dv));
            }
        }
    }
    best
}

#[test]
fn movie_ontology_degrees_and_meets() {
    let l = lattice(MOVIES);
    assert_eq!(l.sort_count(), 9);
    assert_eq!(l.graph().edges().len(), 11);
    let s = |n| l.sort(n);
    assert_eq!(l.degree(s("slasher"), s("thriller")), 0.5);
    assert_eq!(l.degree(s("slasher"), s("movie")), 1.0);
    assert_eq!(l.degree(s("thriller"), s("slasher")), 0.0);
    assert_eq!(l.glb(s("thriller"), s("horror")), s("slasher"));
    assert_eq!(l.glb(s("director"), s("string")), SortId::BOT);
    for a in l.signature().sorts() {
        for b in l.signature().sorts() {
            assert_eq!(l.degree(a, b), path_oracle(&l, a, b), "{a} {b}");
        }
    }
}

#[test]
fn graded_ontology_closure() {
    let l = lattice(GRADED);
    let s = |n| l.sort(n);
    for (a, b, d) in [("q", "u", 0.7), ("s", "v", 0.4), ("q", "v", 0.5), ("p", "u", 0.8), ("p", "v", 0.4)] {
        assert_eq!(l.degree(s(a), s(b)), d, "{a} {b}");
        assert_eq!(path_oracle(&l, s(a), s(b)), d);
    }
}

#[test]
fn cyclic_unification() {
    let l = lattice(GRADED);
    let a = term(&l, "Y0: u(f -> Y1: v(g -> Y0, h -> Y2: r))");
    let b = term(&l, "X0: v(f -> X1: u(g -> X2: t))");
    let r = unify(&a, &b, &l).unwrap();
    assert_eq!((r.beta1, r.beta2, r.beta), (0.4, 0.5, 0.4));
    let expected = term(&l, "Z0: q(f -> Z1: s(g -> Z0, h -> Z2: r))");
    assert!(graph_equivalent(r.unifier.term().unwrap().graph(), expected.graph()));
    // Unifying in the other order gives the same graph and degrees swapped.
    let back = unify(&b, &a, &l).unwrap();
    assert_eq!((back.beta1, back.beta2), (0.5, 0.4));
    assert!(graph_equivalent(back.unifier.term().unwrap().graph(), expected.graph()));
}

#[test]
fn cyclic_unification_exact() {
    let l: SortLattice<Rational> = validate_lattice(parse_ontology(GRADED).unwrap().graph).unwrap();
    let t = |text| NormalTerm::new(parse_term(text, l.signature()).unwrap()).unwrap();
    let r = unify(
        &t("Y0: u(f -> Y1: v(g -> Y0, h -> Y2: r))"),
        &t("X0: v(f -> X1: u(g -> X2: t))"),
        &l,
    )
    .unwrap();
    assert_eq!(r.beta1, Rational::new(2, 5));
    assert_eq!(r.beta2, Rational::new(1, 2));
    assert_eq!(r.beta, Rational::new(2, 5));
}

#[test]
fn running_example() {
    let l = lattice(MOVIES);
    let t1 = term(&l, "X1: movie(directed_by -> Y1: person, genre -> Z1: thriller)");
    let t3 = term(
        &l,
        "X3: movie(directed_by -> Y3: director, title -> W3: string, genre -> Z3: horror)",
    );
    let t2 = term(
        &l,
        "X2: movie(directed_by -> Y2: director, title -> W2: string, genre -> Z2: slasher)",
    );
    let r = unify(&t1, &t3, &l).unwrap();
    assert!(graph_equivalent(r.unifier.term().unwrap().graph(), t2.graph()));
    assert_eq!(r.beta, 0.5);
    let w = fuzzy_subsumption(&t2, &t1, &l).unwrap();
    assert_eq!(w.degree, 0.5);
    // The title of t2 has to be completed in t1 as `top`, which is not a string.
    assert_eq!(fuzzy_subsumption_degree(&t1, &t2, &l), 0.0);
    assert!(syntactic_subsumes(&t1, &t2, &l).is_none());
}

#[test]
fn director_string_clash() {
    let l = lattice(MOVIES);
    let t = parse_term("X: movie(directed_by -> Y: director, directed_by -> Y: string)", l.signature())
        .unwrap();
    assert!(NormalTerm::new(t.clone()).is_err());
    assert!(normalize(&term_to_clause(&t), &l).is_inconsistent());
    assert!(normalize_term(&t, &l).is_none());
    let a = term(&l, "X: movie(directed_by -> Y: director)");
    let b = term(&l, "U: movie(directed_by -> V: string)");
    let r = unify(&a, &b, &l).unwrap();
    assert_eq!(r.unifier, Unifier::Bottom);
    assert_eq!(r.beta, 1.0);
}

#[test]
fn film_interpretation() {
    let l = lattice(MOVIES);
    let i = parse_interpretation::<f64>(FILMS, l.signature()).unwrap();
    assert!(validate_interpretation(&i, &l).is_empty());
    let t = parse_term("X: thriller(directed_by -> Y: director)", l.signature()).unwrap();
    let halloween = i.element("halloween").unwrap();
    let carpenter = i.element("carpenter").unwrap();
    let alpha = Assignment::from([(Tag::new("X"), halloween), (Tag::new("Y"), carpenter)]);
    assert_eq!(denote(&t, &i, &alpha), 0.5);
    assert_eq!(denotation_at(&t, &i, &i.element("psycho").unwrap()), 1.0);

    let clash = parse_term("X: movie(directed_by -> Y: director, directed_by -> Y: string)", l.signature())
        .unwrap();
    for d in 0..i.domain_size() {
        assert_eq!(denotation_at(&clash, &i, &d), 0.0);
    }

    let g = NormalTerm::new(t).unwrap().into_graph();
    let alg = GraphAlgebra::new(&l);
    let m = find_morphism(&alg, &i, GraphAlgebraElement::Concrete(g.clone()), halloween).unwrap();
    assert_eq!(m.max_beta, 0.5);
    let y = GraphAlgebraElement::Concrete(g.restrict(&Tag::new("Y")));
    assert_eq!(m.image(&y), Some(&carpenter));
}

#[test]
fn endomorphic_approximation() {
    let l = lattice(MOVIES);
    let g0 = term(&l, "X0: thriller(directed_by -> Y0: director)").into_graph();
    let g1 = term(&l, "X1: slasher(directed_by -> Y1: director, title -> Z1: string)").into_graph();
    assert_eq!(approximation_degree(&g0, &g1, &l), 0.5);
    assert_eq!(approximation_degree(&g1, &g0, &l), 0.0);
    let alg = GraphAlgebra::new(&l);
    let m = find_morphism(&alg, &alg, GraphAlgebraElement::Concrete(g0.clone()), GraphAlgebraElement::Concrete(g1.clone()))
        .unwrap();
    assert_eq!(m.max_beta, 0.5);
}

#[test]
fn equivalence_modulo_top_leaves() {
    let l = lattice(GRADED);
    let g0 = term(&l, "X0: s(f -> Y0: u)").into_graph();
    let g1 = term(&l, "X1: s(f -> Y1: u, g -> Z1: top)").into_graph();
    assert!(graph_equivalent(&g0, &g1));
    assert_eq!(approximation_degree(&g0, &g1, &l), 1.0);
    assert_eq!(approximation_degree(&g1, &g0, &l), 1.0);
    let g2 = term(&l, "X1: s(f -> Y1: u, g -> Z1: v)").into_graph();
    assert!(!graph_equivalent(&g0, &g2));
}
