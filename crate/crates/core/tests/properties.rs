use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fuzzy_osf::graphs::{graph_equivalent, graph_to_term, term_to_graph};
use fuzzy_osf::lattice::{maxmin_closure, validate_lattice, SortLattice};
use fuzzy_osf::normalize::{normalize_with, NormalizeOptions, RuleOrder};
use fuzzy_osf::semantics::random::{generalize, random_clause, random_dag, random_graph, random_lattice};
use fuzzy_osf::subsumption::{fuzzy_subsumption, graph_subsumption_degree};
use fuzzy_osf::terms::{clause_to_term, print_term, TermStyle};
use fuzzy_osf::{normalize, parse_term, unify, NormalForm, NormalTerm, SortId, Unifier};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_lattice(seed: u64) -> SortLattice<f64> {
    random_lattice(&mut rng(seed), 7, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_laws(seed: u64, n in 1usize..10, p in 0.1f64..0.8) {
        let g = random_dag::<f64, _>(&mut rng(seed), n, 1, p);
        let c = g.closure();
        let sorts: Vec<SortId> = g.signature().sorts().collect();
        for &a in &sorts {
            prop_assert_eq!(c.degree(a, a), 1.0);
            prop_assert_eq!(c.degree(SortId::BOT, a), 1.0);
            prop_assert_eq!(c.degree(a, SortId::TOP), 1.0);
            for &b in &sorts {
                let ab = c.degree(a, b);
                prop_assert!((0.0..=1.0).contains(&ab));
                if a != b {
                    prop_assert!(ab == 0.0 || c.degree(b, a) == 0.0);
                }
                for &m in &sorts {
                    prop_assert!(ab >= c.degree(a, m).min(c.degree(m, b)));
                }
            }
        }
        let lazy = c.to_matrix();
        let mut dense = lazy.clone();
        maxmin_closure(&mut dense);
        prop_assert_eq!(dense, lazy);
    }

    #[test]
    fn meets_are_greatest_lower_bounds(seed: u64) {
        let l = small_lattice(seed);
        let sorts: Vec<SortId> = l.signature().sorts().collect();
        let leq = |a, b| l.degree(a, b) > 0.0;
        for &a in &sorts {
            prop_assert_eq!(l.glb(a, a), a);
            for &b in &sorts {
                let m = l.glb(a, b);
                prop_assert_eq!(m, l.glb(b, a));
                prop_assert!(leq(m, a) && leq(m, b));
                for &x in &sorts {
                    if leq(x, a) && leq(x, b) {
                        prop_assert!(leq(x, m));
                    }
                }
            }
        }
    }

    #[test]
    fn term_text_roundtrip(seed: u64) {
        let l = small_lattice(seed);
        let g = random_graph(&mut rng(seed ^ 1), &l, 6, "X");
        let psi = NormalTerm::from_graph(g.clone());
        for style in [TermStyle::Explicit, TermStyle::Compact] {
            let text = print_term(psi.term(), l.signature(), style);
            let back = NormalTerm::new(parse_term(&text, l.signature()).unwrap()).unwrap();
            if style == TermStyle::Explicit {
                prop_assert_eq!(back.graph(), &g, "{}", text);
            } else {
                prop_assert!(graph_equivalent(back.graph(), &g), "{}", text);
            }
        }
        let via_clause = clause_to_term(&psi.to_clause()).unwrap();
        prop_assert_eq!(via_clause.graph(), &g);
        prop_assert_eq!(term_to_graph(&NormalTerm::new(graph_to_term(&g)).unwrap()), g);
    }

    #[test]
    fn normal_forms_agree_across_orders(seed: u64) {
        let l = small_lattice(seed);
        let phi = random_clause(&mut rng(seed ^ 2), &l, 6, 10);
        let base = normalize(&phi, &l);
        for k in 0..4u64 {
            let other = normalize_with(
                &phi,
                &l,
                NormalizeOptions { order: RuleOrder::Randomized(seed.wrapping_add(k)), trace: false },
            );
            prop_assert!(base.equivalent_up_to_renaming(&other.result));
        }
        if let NormalForm::Normalized { solved, .. } = &base {
            prop_assert!(solved.is_solved());
            let again = normalize(solved, &l);
            prop_assert_eq!(again.as_clause().map(|c| c.constraint_multiset()), Some(solved.constraint_multiset()));
        }
    }

    #[test]
    fn unification_laws(seed: u64) {
        let l = small_lattice(seed);
        let mut r = rng(seed ^ 3);
        let a = NormalTerm::from_graph(random_graph(&mut r, &l, 4, "A"));
        let b = NormalTerm::from_graph(random_graph(&mut r, &l, 4, "B"));

        let own = unify(&a, &a, &l).unwrap();
        prop_assert_eq!(own.beta, 1.0);
        prop_assert!(graph_equivalent(own.unifier.term().unwrap().graph(), a.graph()));

        let ab = unify(&a, &b, &l).unwrap();
        let ba = unify(&b, &a, &l).unwrap();
        prop_assert_eq!((ab.beta1, ab.beta2), (ba.beta2, ba.beta1));
        match (&ab.unifier, &ba.unifier) {
            (Unifier::Term(u), Unifier::Term(v)) => {
                prop_assert!(graph_equivalent(u.graph(), v.graph()));
                prop_assert_eq!(graph_subsumption_degree(u.graph(), a.graph(), &l), ab.beta1);
                prop_assert_eq!(graph_subsumption_degree(u.graph(), b.graph(), &l), ab.beta2);
            }
            (Unifier::Bottom, Unifier::Bottom) => prop_assert_eq!(ab.beta, 1.0),
            _ => prop_assert!(false, "unifiable in one order only"),
        }
    }

    #[test]
    fn subsumption_witnesses(seed: u64) {
        let l = small_lattice(seed);
        let mut r = rng(seed ^ 4);
        let g = random_graph(&mut r, &l, 5, "X");
        let h = generalize(&mut r, &l, &g);
        let (psi, gen) = (NormalTerm::from_graph(g.clone()), NormalTerm::from_graph(h.clone()));
        let own = fuzzy_subsumption(&psi, &psi, &l).unwrap();
        prop_assert_eq!(own.degree, 1.0);
        prop_assert!(own.h.iter().all(|(k, v)| matches!(v, fuzzy_osf::subsumption::Image::Tag(t) if t == k)));
        // Generalizing only raises labels and forgets edges, so a witness exists.
        let w = fuzzy_subsumption(&psi, &gen, &l).unwrap();
        prop_assert!(w.degree > 0.0);
        prop_assert_eq!(w.h.len(), h.node_count());
        prop_assert_eq!(&w.h[h.root()], &fuzzy_osf::subsumption::Image::Tag(g.root().clone()));
    }
}

#[test]
fn validation_rejects_only_non_lattices() {
    // Every DAG either validates or has a pair without a greatest lower bound.
    for seed in 0..200 {
        let g = random_dag::<f64, _>(&mut rng(seed), 6, 0, 0.5);
        let sorts: Vec<SortId> = g.signature().sorts().collect();
        let c = g.closure();
        let leq = |a: SortId, b: SortId| c.degree(a, b) > 0.0;
        let has_all_meets = sorts.iter().all(|&a| {
            sorts.iter().all(|&b| {
                let lower: Vec<SortId> = sorts.iter().copied().filter(|&x| leq(x, a) && leq(x, b)).collect();
                lower.iter().any(|&m| lower.iter().all(|&x| leq(x, m)))
            })
        });
        assert_eq!(validate_lattice(g).is_ok(), has_all_meets, "seed {seed}");
    }
}
