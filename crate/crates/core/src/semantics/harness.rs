//! Randomized and exhaustive cross-checks between the syntactic algorithms
//! and the reference semantics.

use std::collections::BTreeMap;
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formats::{parse_interpretation, parse_ontology};
use crate::graphs::{canonical_subgraphs, graph_equivalent, graph_to_term, GraphAlgebraElement, OsfGraph};
use crate::lattice::{validate_lattice, SortLattice};
use crate::normalize::normalize;
use crate::signature::SortId;
use crate::subsumption::{approximation_degree, graph_subsumption_degree};
use crate::terms::{parse_term, term_to_clause, Clause, NormalTerm, Tag};

use super::random::{generalize, grid, perturb, random_clause, random_graph, random_interpretation, random_lattice};
use super::samples::{FILM_INTERPRETATION, MOVIE_ONTOLOGY};
use super::{
    denotation_at, denote, find_morphism, forced_assignment, generated_subalgebra,
    max_satisfaction_degree, satisfies, validate_interpretation, weak_final_images, Assignment,
    GraphAlgebra, Interpretation,
};

#[derive(Clone, Copy, Debug)]
pub struct HarnessConfig {
    pub seed: u64,
    pub max_domain: usize,
    pub max_sorts: usize,
    pub max_features: usize,
    pub max_tags: usize,
    /// Random lattice/interpretation pairs to draw.
    pub rounds: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            seed: 0,
            max_domain: 4,
            max_sorts: 5,
            max_features: 2,
            max_tags: 3,
            rounds: 60,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct TheoremReport {
    pub checks: Vec<CheckOutcome>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {} ({} cases)", c.name, c.cases)?;
            for fail in &c.failures {
                writeln!(f, "    {fail}")?;
            }
        }
        Ok(())
    }
}

/// All assignments of `tags` into `0..n`.
fn assignments(tags: &[Tag], n: usize) -> impl Iterator<Item = Assignment<usize>> + '_ {
    let total = n.checked_pow(tags.len() as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        tags.iter()
            .map(|t| {
                let e = code % n;
                code /= n;
                (t.clone(), e)
            })
            .collect()
    })
}

fn betas() -> Vec<f64> {
    let mut v = grid::<f64>();
    v.insert(0, 0.0);
    v
}

struct Checks {
    valid: CheckOutcome,
    denotation: CheckOutcome,
    subalgebra: CheckOutcome,
    normalization: CheckOutcome,
    canonical: CheckOutcome,
    extension: CheckOutcome,
    extraction: CheckOutcome,
    morphism_degree: CheckOutcome,
    composition: CheckOutcome,
    weak_final: CheckOutcome,
    subsumption: CheckOutcome,
    approximation: CheckOutcome,
    equivalence: CheckOutcome,
}

/// Run every check on `config.rounds` random lattices with random
/// interpretations, plus the fixed movie example.
pub fn check_theorems(config: HarnessConfig) -> TheoremReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut c = Checks {
        valid: CheckOutcome::new("generated interpretations are valid, corrupted ones are not"),
        denotation: CheckOutcome::new("term denotation agrees with satisfaction of its clause"),
        subalgebra: CheckOutcome::new("generated subinterpretations preserve denotation and satisfaction"),
        normalization: CheckOutcome::new("normalization preserves positive solutions"),
        canonical: CheckOutcome::new("solved clauses hold to degree 1 in the graph algebra"),
        extension: CheckOutcome::new("solutions extend along morphisms"),
        extraction: CheckOutcome::new("solutions of solved clauses come from graph morphisms"),
        morphism_degree: CheckOutcome::new("denotation equals the degree of the anchored graph morphism"),
        composition: CheckOutcome::new("morphism degrees compose"),
        weak_final: CheckOutcome::new("every interpretation maps into the graph algebra"),
        subsumption: CheckOutcome::new("subsumption degree is sound and attained"),
        approximation: CheckOutcome::new("graph approximation degree equals morphism degree"),
        equivalence: CheckOutcome::new("graph equivalence is mutual subsumption to degree 1"),
    };
    for _ in 0..config.rounds {
        let features = rng.random_range(1..=config.max_features.max(1));
        let lattice: SortLattice<f64> = random_lattice(&mut rng, config.max_sorts, features);
        let interp = random_interpretation(&mut rng, &lattice, config.max_domain);
        round(&mut rng, &lattice, &interp, config, &mut c);
    }
    let mut checks = vec![
        c.valid,
        c.denotation,
        c.subalgebra,
        c.normalization,
        c.canonical,
        c.extension,
        c.extraction,
        c.morphism_degree,
        c.composition,
        c.weak_final,
        c.subsumption,
        c.approximation,
        c.equivalence,
    ];
    checks.push(movie_example());
    TheoremReport { checks }
}

fn round(
    rng: &mut ChaCha8Rng,
    lattice: &SortLattice<f64>,
    interp: &Interpretation<f64>,
    config: HarnessConfig,
    c: &mut Checks,
) {
    let n = interp.domain_size();
    let graphs_alg = GraphAlgebra::new(lattice);

    let violations = validate_interpretation(interp, lattice);
    c.valid.check(violations.is_empty(), || format!("{violations:?}"));
    let mut broken = interp.clone();
    broken.set_degree(SortId::BOT, rng.random_range(0..n), 0.5);
    c.valid.check(!validate_interpretation(&broken, lattice).is_empty(), || {
        "corrupted interpretation accepted".into()
    });

    let graph = random_graph(rng, lattice, config.max_tags, "X");
    let psi = NormalTerm::from_graph(graph.clone());
    let term = psi.term();
    let clause = term_to_clause(term);
    let tags = term.tags();

    for alpha in assignments(&tags, n) {
        let value = denote(term, interp, &alpha);
        for beta in betas() {
            c.denotation.check(
                (value >= beta) == satisfies(&clause, interp, &alpha, beta),
                || format!("alpha {alpha:?} beta {beta} value {value}"),
            );
        }
    }

    for d in 0..n {
        let (sub, order) = generated_subalgebra(interp, &[d]);
        for alpha in assignments(&tags, sub.domain_size()) {
            let lifted: Assignment<usize> =
                alpha.iter().map(|(t, &e)| (t.clone(), order[e])).collect();
            c.subalgebra.check(
                denote(term, &sub, &alpha) == denote(term, interp, &lifted)
                    && max_satisfaction_degree(&clause, &sub, &alpha)
                        == max_satisfaction_degree(&clause, interp, &lifted),
                || format!("element {d}, alpha {alpha:?}"),
            );
        }
    }

    let phi = random_clause(rng, lattice, config.max_tags + 1, 6);
    let nf = normalize(&phi, lattice);
    let nf_clause = nf.as_clause();
    for alpha in assignments(&phi.tags(), n) {
        let before = max_satisfaction_degree(&phi, interp, &alpha) > 0.0;
        let after = nf_clause
            .as_ref()
            .is_some_and(|nc| max_satisfaction_degree(nc, interp, &alpha) > 0.0);
        c.normalization.check(before == after, || format!("clause {phi:?} alpha {alpha:?}"));
    }

    if let Some(nc) = &nf_clause {
        let crate::normalize::NormalForm::Normalized { solved, .. } = &nf else { unreachable!() };
        let subs = canonical_subgraphs(solved).expect("solved");
        let reps = nf.representatives();
        let alpha: Assignment<GraphAlgebraElement> = phi
            .tags()
            .into_iter()
            .map(|t| {
                let r = reps.get(&t).unwrap_or(&t);
                // A class constrained only by equations is an unlabeled node.
                let g = subs.get(r).cloned().unwrap_or_else(|| {
                    OsfGraph::from_parts(
                        r.clone(),
                        BTreeMap::from([(r.clone(), SortId::TOP)]),
                        BTreeMap::new(),
                    )
                    .expect("single node")
                });
                (t, GraphAlgebraElement::Concrete(g))
            })
            .collect();
        c.canonical.check(
            satisfies(nc, &graphs_alg, &alpha, 1.0)
                && max_satisfaction_degree(&phi, &graphs_alg, &alpha) > 0.0,
            || format!("{phi:?}"),
        );
    }

    let other = perturb(rng, interp, lattice);
    let third = perturb(rng, &other, lattice);
    for d in 0..n {
        let m1 = find_morphism(interp, &other, d, d).expect("identity commutes");
        let reach = generated_subalgebra(interp, &[d]).1;
        let phi_tags = phi.tags();
        for _ in 0..4 {
            let alpha: Assignment<usize> = phi_tags
                .iter()
                .map(|t| (t.clone(), reach[rng.random_range(0..reach.len())]))
                .collect();
            let beta = max_satisfaction_degree(&phi, interp, &alpha);
            let moved: Assignment<usize> = alpha
                .iter()
                .map(|(t, e)| (t.clone(), *m1.image(e).expect("reachable")))
                .collect();
            c.extension.check(
                satisfies(&phi, &other, &moved, beta.min(m1.max_beta)),
                || format!("element {d} beta {beta} morphism {}", m1.max_beta),
            );
        }
        let m2 = find_morphism(&other, &third, d, d).expect("identity commutes");
        let direct = find_morphism(interp, &third, d, d).expect("identity commutes");
        c.composition.check(direct.max_beta >= m1.max_beta.min(m2.max_beta), || {
            format!("{} < min({}, {})", direct.max_beta, m1.max_beta, m2.max_beta)
        });

        let anchored = find_morphism(
            &graphs_alg,
            interp,
            GraphAlgebraElement::Concrete(graph.clone()),
            d,
        );
        let value = denotation_at(term, interp, &d);
        c.morphism_degree.check(
            value == anchored.as_ref().map_or(0.0, |m| m.max_beta),
            || format!("element {d}: denotation {value}, morphism {:?}", anchored.as_ref().map(|m| m.max_beta)),
        );

        if let Some(alpha) = forced_assignment(term, interp, &d) {
            let beta = max_satisfaction_degree(&clause, interp, &alpha);
            if beta > 0.0 {
                let ok = anchored.as_ref().is_some_and(|m| {
                    m.max_beta >= beta
                        && alpha.iter().all(|(t, e)| {
                            m.image(&GraphAlgebraElement::Concrete(graph.restrict(t))) == Some(e)
                        })
                });
                c.extraction.check(ok, || format!("element {d} beta {beta}"));
            }
        }
    }

    let (images, beta) = weak_final_images(interp, lattice);
    for d in 0..n {
        let m = find_morphism(interp, &graphs_alg, d, images[d].clone());
        let ok = beta > 0.0
            && m.as_ref().is_some_and(|m| {
                m.max_beta >= beta
                    && m.pairs.iter().all(|(e, g)| *g == images[*e])
            });
        c.weak_final.check(ok, || format!("element {d} beta {beta}"));
    }

    let specific = random_graph(rng, lattice, config.max_tags, "Y");
    let general = if rng.random_bool(0.6) {
        generalize(rng, lattice, &specific)
    } else {
        random_graph(rng, lattice, config.max_tags, "Z")
    };
    subsumption_round(lattice, interp, &specific, &general, c);
    subsumption_round(lattice, interp, &general, &specific, c);

    let padded = pad_with_top(rng, &specific, lattice);
    for (a, b) in [(&specific, &padded), (&specific, &general), (&general, &padded)] {
        let full = graph_subsumption_degree(a, b, lattice) == 1.0
            && graph_subsumption_degree(b, a, lattice) == 1.0;
        c.equivalence.check(graph_equivalent(a, b) == full, || {
            format!("{a:?} vs {b:?}")
        });
    }
}

fn subsumption_round(
    lattice: &SortLattice<f64>,
    interp: &Interpretation<f64>,
    specific: &OsfGraph,
    general: &OsfGraph,
    c: &mut Checks,
) {
    let beta = graph_subsumption_degree(specific, general, lattice);
    let t0 = graph_to_term(specific);
    let t1 = graph_to_term(general);
    for d in 0..interp.domain_size() {
        let lhs = denotation_at(&t0, interp, &d).min(beta);
        let rhs = denotation_at(&t1, interp, &d);
        c.subsumption.check(lhs <= rhs, || format!("element {d}: {lhs} > {rhs}"));
    }
    let alg = GraphAlgebra::new(lattice);
    let at = GraphAlgebraElement::Concrete(specific.clone());
    c.subsumption.check(
        denotation_at(&t0, &alg, &at) == 1.0 && denotation_at(&t1, &alg, &at) == beta,
        || format!("degree {beta} not attained in the graph algebra"),
    );

    let morphism = find_morphism(
        &alg,
        &alg,
        GraphAlgebraElement::Concrete(general.clone()),
        GraphAlgebraElement::Concrete(specific.clone()),
    );
    let approx = approximation_degree(general, specific, lattice);
    c.approximation.check(
        approx == morphism.as_ref().map_or(0.0, |m| m.max_beta) && approx == beta,
        || format!("approximation {approx}, morphism {:?}", morphism.map(|m| m.max_beta)),
    );
}

/// Add a `top` leaf under a node along an unused feature, if any.
fn pad_with_top(rng: &mut ChaCha8Rng, g: &OsfGraph, lattice: &SortLattice<f64>) -> OsfGraph {
    let mut labels = g.labels().clone();
    let mut edges: BTreeMap<_, BTreeMap<_, _>> = g
        .labels()
        .keys()
        .map(|t| (t.clone(), g.successors(t).map(|(f, y)| (f, y.clone())).collect()))
        .collect();
    let tags: Vec<Tag> = labels.keys().cloned().collect();
    let x = &tags[rng.random_range(0..tags.len())];
    let unused = lattice.signature().features().find(|f| g.successor(x, *f).is_none());
    if let Some(f) = unused {
        let leaf = Tag::new("Pad");
        labels.insert(leaf.clone(), SortId::TOP);
        edges.get_mut(x).expect("node").insert(f, leaf);
    }
    OsfGraph::from_parts(g.root().clone(), labels, edges).expect("padded graph")
}

fn movie_example() -> CheckOutcome {
    let mut c = CheckOutcome::new("movie example: validity, denotations and morphism degree");
    let lattice = validate_lattice(parse_ontology::<f64>(MOVIE_ONTOLOGY).expect("ontology").graph)
        .expect("lattice");
    let interp: Interpretation<f64> =
        parse_interpretation(FILM_INTERPRETATION, lattice.signature()).expect("interpretation");
    c.check(validate_interpretation(&interp, &lattice).is_empty(), || "invalid".into());
    let sig = lattice.signature();
    let halloween = interp.element("halloween").expect("element");
    let carpenter = interp.element("carpenter").expect("element");
    let t = parse_term("X: thriller(directed_by -> Y: director)", sig).expect("term");
    let alpha = Assignment::from([(Tag::new("X"), halloween), (Tag::new("Y"), carpenter)]);
    c.check(denote(&t, &interp, &alpha) == 0.5, || "thriller term at halloween".into());
    let clash = parse_term("X: movie(directed_by -> Y: director, directed_by -> Y: string)", sig)
        .expect("term");
    for d in 0..interp.domain_size() {
        c.check(denotation_at(&clash, &interp, &d) == 0.0, || format!("clash at {d}"));
    }
    let g = NormalTerm::new(t).expect("normal").into_graph();
    let m = find_morphism(&GraphAlgebra::new(&lattice), &interp, GraphAlgebraElement::Concrete(g), halloween);
    c.check(m.is_some_and(|m| m.max_beta == 0.5), || "morphism degree".into());
    let _: Option<Clause> = None;
    c
}
