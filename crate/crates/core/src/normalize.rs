//! Constraint normalization.
//!
//! Four rewrite rules bring a clause to solved form:
//! sort intersection (`X:s & X:t` becomes `X:glb(s,t)`), feature
//! functionality (`X.f=Y & X.f=Z` adds `Y=Z`), inconsistent sort
//! (`X:bot` fails) and tag elimination (`X=Y` substitutes `X` for `Y`).
//! Tag elimination is carried out with union-find.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::Degree;
use crate::lattice::SortLattice;
use crate::signature::{FeatureId, SortId};
use crate::terms::{clause_to_term, term_to_clause, Clause, Constraint, NormalTerm, Tag, Term};
use crate::unionfind::UnionFind;

/// Order in which rules fire. The result is the same up to tag renaming;
/// the randomized order exists to exercise that.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RuleOrder {
    /// Equations first, then feature constraints, then sort constraints;
    /// unions by rank.
    #[default]
    Deterministic,
    /// Shuffled constraints, random worklist picks and random union
    /// direction, seeded.
    Randomized(u64),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NormalizeOptions {
    pub order: RuleOrder,
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleApplication {
    SortIntersection {
        tag: Tag,
        left: SortId,
        right: SortId,
        result: SortId,
    },
    FeatureFunctionality {
        tag: Tag,
        feature: FeatureId,
        first: Tag,
        second: Tag,
    },
    InconsistentSort {
        tag: Tag,
    },
    TagElimination {
        kept: Tag,
        eliminated: Tag,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// Some tag was forced to `bot`.
    Inconsistent { tag: Tag },
    /// A solved clause over class representatives plus the equations
    /// `representative = member` for every other member of each class.
    Normalized {
        solved: Clause,
        equalities: Vec<(Tag, Tag)>,
    },
}

impl NormalForm {
    pub fn is_inconsistent(&self) -> bool {
        matches!(self, NormalForm::Inconsistent { .. })
    }

    /// The solved part together with its equations, as one clause.
    pub fn as_clause(&self) -> Option<Clause> {
        match self {
            NormalForm::Inconsistent { .. } => None,
            NormalForm::Normalized { solved, equalities } => {
                let mut c = solved.clone();
                c.constraints
                    .extend(equalities.iter().map(|(a, b)| Constraint::Eq(a.clone(), b.clone())));
                Some(c)
            }
        }
    }

    /// Map from every tag to its class representative.
    pub fn representatives(&self) -> HashMap<Tag, Tag> {
        let mut map = HashMap::new();
        if let NormalForm::Normalized { solved, equalities } = self {
            for t in solved.tags() {
                map.insert(t.clone(), t);
            }
            for (rep, member) in equalities {
                map.insert(rep.clone(), rep.clone());
                map.insert(member.clone(), rep.clone());
            }
        }
        map
    }

    /// Same partition of the original tags and the same solved constraints
    /// once each class is named by its smallest member.
    pub fn equivalent_up_to_renaming(&self, other: &NormalForm) -> bool {
        match (self, other) {
            (NormalForm::Inconsistent { .. }, NormalForm::Inconsistent { .. }) => true,
            (NormalForm::Normalized { .. }, NormalForm::Normalized { .. }) => {
                self.class_view() == other.class_view()
            }
            _ => false,
        }
    }

    #[allow(clippy::type_complexity)]
    fn class_view(
        &self,
    ) -> (
        BTreeMap<Tag, Tag>,
        BTreeMap<Tag, SortId>,
        BTreeMap<(Tag, FeatureId), Tag>,
    ) {
        let reps = self.representatives();
        let mut smallest: HashMap<&Tag, &Tag> = HashMap::new();
        for (t, r) in &reps {
            let slot = smallest.entry(r).or_insert(t);
            if t < *slot {
                *slot = t;
            }
        }
        let name = |t: &Tag| smallest[&reps[t]].clone();
        let partition = reps.keys().map(|t| (t.clone(), name(t))).collect();
        let mut sorts = BTreeMap::new();
        let mut features = BTreeMap::new();
        if let NormalForm::Normalized { solved, .. } = self {
            for c in &solved.constraints {
                match c {
                    Constraint::Sort(x, s) => {
                        sorts.insert(name(x), *s);
                    }
                    Constraint::Feature(x, f, y) => {
                        features.insert((name(x), *f), name(y));
                    }
                    Constraint::Eq(..) => {}
                }
            }
        }
        (partition, sorts, features)
    }
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub result: NormalForm,
    /// Rule applications performed.
    pub steps: usize,
    /// Filled only when tracing was requested.
    pub trace: Vec<RuleApplication>,
}

pub fn normalize<D: Degree>(clause: &Clause, lattice: &SortLattice<D>) -> NormalForm {
    normalize_with(clause, lattice, NormalizeOptions::default()).result
}

pub fn normalize_with<D: Degree>(
    clause: &Clause,
    lattice: &SortLattice<D>,
    options: NormalizeOptions,
) -> Normalization {
    let tags = clause.tags();
    let index: HashMap<Tag, usize> = tags.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut state = State {
        lattice,
        tags: &tags,
        uf: UnionFind::new(tags.len()),
        sort: vec![None; tags.len()],
        features: vec![Vec::new(); tags.len()],
        pending: VecDeque::new(),
        rng: match options.order {
            RuleOrder::Deterministic => None,
            RuleOrder::Randomized(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        },
        steps: 0,
        trace: options.trace.then(Vec::new),
    };

    let mut order: Vec<&Constraint> = clause.constraints.iter().collect();
    match state.rng.as_mut() {
        Some(rng) => order.shuffle(rng),
        None => order.sort_by_key(|c| match c {
            Constraint::Eq(..) => 0,
            Constraint::Feature(..) => 1,
            Constraint::Sort(..) => 2,
        }),
    }

    let outcome = state.run(order, &index);

    let result = match outcome {
        Err(tag) => NormalForm::Inconsistent { tag },
        Ok(()) => state.solved_form(clause.root.as_ref().map(|r| index[r])),
    };
    Normalization {
        result,
        steps: state.steps,
        trace: state.trace.unwrap_or_default(),
    }
}

struct State<'a, D> {
    lattice: &'a SortLattice<D>,
    tags: &'a [Tag],
    uf: UnionFind,
    sort: Vec<Option<SortId>>,
    features: Vec<Vec<(FeatureId, usize)>>,
    pending: VecDeque<(usize, usize)>,
    rng: Option<ChaCha8Rng>,
    steps: usize,
    trace: Option<Vec<RuleApplication>>,
}

impl<D: Degree> State<'_, D> {
    fn record(&mut self, rule: impl FnOnce() -> RuleApplication) {
        self.steps += 1;
        if let Some(t) = self.trace.as_mut() {
            t.push(rule());
        }
    }

    /// Intersect the sort of root `r` with `s`.
    fn add_sort(&mut self, r: usize, s: SortId) -> Result<(), Tag> {
        let result = match self.sort[r] {
            None => s,
            Some(old) => {
                let g = self.lattice.glb(old, s);
                let tag = self.tags[r].clone();
                self.record(|| RuleApplication::SortIntersection {
                    tag,
                    left: old,
                    right: s,
                    result: g,
                });
                g
            }
        };
        self.sort[r] = Some(result);
        if result == SortId::BOT {
            let tag = self.tags[r].clone();
            self.record(|| RuleApplication::InconsistentSort { tag: tag.clone() });
            return Err(tag);
        }
        Ok(())
    }

    /// Record `r.f = y` on root `r`, scheduling a merge if `f` is taken.
    fn add_feature(&mut self, r: usize, f: FeatureId, y: usize) {
        match self.features[r].iter().find(|(g, _)| *g == f) {
            Some(&(_, z)) => {
                if self.uf.find(z) != self.uf.find(y) {
                    let (tag, first, second) =
                        (self.tags[r].clone(), self.tags[z].clone(), self.tags[y].clone());
                    self.record(|| RuleApplication::FeatureFunctionality {
                        tag,
                        feature: f,
                        first,
                        second,
                    });
                    self.pending.push_back((z, y));
                }
            }
            None => self.features[r].push((f, y)),
        }
    }

    fn run(&mut self, order: Vec<&Constraint>, index: &HashMap<Tag, usize>) -> Result<(), Tag> {
        for c in order {
            match c {
                Constraint::Sort(x, s) => {
                    let r = self.uf.find(index[x]);
                    self.add_sort(r, *s)?;
                }
                Constraint::Feature(x, f, y) => {
                    let r = self.uf.find(index[x]);
                    self.add_feature(r, *f, index[y]);
                }
                Constraint::Eq(x, y) => self.pending.push_back((index[x], index[y])),
            }
            self.drain()?;
        }
        Ok(())
    }

    fn drain(&mut self) -> Result<(), Tag> {
        loop {
            let next = match self.rng.as_mut() {
                Some(rng) if !self.pending.is_empty() => {
                    let i = rng.random_range(0..self.pending.len());
                    self.pending.swap_remove_back(i)
                }
                _ => self.pending.pop_front(),
            };
            let Some((a, b)) = next else { return Ok(()) };
            let flip = self.rng.as_mut().map(|rng| rng.random_bool(0.5));
            let joined = match flip {
                Some(true) => self.uf.union_keeping(b, a),
                Some(false) => self.uf.union_keeping(a, b),
                None => self.uf.union(a, b),
            };
            let Some((keep, gone)) = joined else { continue };
            let (kept, eliminated) = (self.tags[keep].clone(), self.tags[gone].clone());
            self.record(|| RuleApplication::TagElimination { kept, eliminated });
            if let Some(s) = self.sort[gone].take() {
                self.add_sort(keep, s)?;
            }
            for (f, y) in std::mem::take(&mut self.features[gone]) {
                self.add_feature(keep, f, y);
            }
        }
    }

    fn solved_form(&mut self, root: Option<usize>) -> NormalForm {
        let n = self.tags.len();
        let reps: Vec<usize> = (0..n).map(|i| self.uf.find(i)).collect();
        let mut constraints = Vec::new();
        let mut equalities = Vec::new();
        let mut emitted = vec![false; n];
        for i in 0..n {
            let r = reps[i];
            if r != i {
                equalities.push((self.tags[r].clone(), self.tags[i].clone()));
            }
            if std::mem::replace(&mut emitted[r], true) {
                continue;
            }
            if let Some(s) = self.sort[r] {
                constraints.push(Constraint::Sort(self.tags[r].clone(), s));
            }
            for &(f, y) in &self.features[r] {
                constraints.push(Constraint::Feature(
                    self.tags[r].clone(),
                    f,
                    self.tags[reps[y]].clone(),
                ));
            }
        }
        let solved = Clause {
            constraints,
            root: root.map(|r| self.tags[self.uf.find(r)].clone()),
        };
        NormalForm::Normalized { solved, equalities }
    }
}

/// Normalize a possibly non-normal term through its clause. `None` when
/// the term is inconsistent.
pub fn normalize_term<D: Degree>(term: &Term, lattice: &SortLattice<D>) -> Option<NormalTerm> {
    match normalize(&term_to_clause(term), lattice) {
        NormalForm::Inconsistent { .. } => None,
        NormalForm::Normalized { solved, .. } => {
            Some(clause_to_term(&solved).expect("normalized term clause is rooted and solved"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_signature, validate_lattice};
    use crate::terms::{parse_clause, parse_term};

    fn lattice() -> SortLattice<f64> {
        let g = build_signature(
            &["person", "director", "string", "movie", "thriller", "horror", "slasher"],
            &["directed_by", "title"],
            &[
                ("director", "person", 1.0),
                ("slasher", "thriller", 0.5),
                ("slasher", "horror", 1.0),
                ("thriller", "movie", 1.0),
                ("horror", "movie", 1.0),
            ],
        )
        .unwrap();
        validate_lattice(g).unwrap()
    }

    #[test]
    fn merges_through_features() {
        let l = lattice();
        let c = parse_clause(
            "X: thriller & X.directed_by = Y & Y: person & X = Z & Z: horror & Z.directed_by = W & W: director",
            l.signature(),
        )
        .unwrap();
        let n = normalize_with(&c, &l, NormalizeOptions { trace: true, ..Default::default() });
        let NormalForm::Normalized { solved, equalities } = &n.result else {
            panic!("inconsistent")
        };
        assert!(solved.is_solved());
        assert_eq!(equalities.len(), 2);
        let reps = n.result.representatives();
        assert_eq!(reps[&Tag::new("Z")], reps[&Tag::new("X")]);
        assert_eq!(reps[&Tag::new("W")], reps[&Tag::new("Y")]);
        let x = &reps[&Tag::new("X")];
        assert!(solved.constraints.contains(&Constraint::Sort(x.clone(), l.sort("slasher"))));
        let y = &reps[&Tag::new("Y")];
        assert!(solved.constraints.contains(&Constraint::Sort(y.clone(), l.sort("director"))));
        assert!(n.trace.iter().any(|r| matches!(r, RuleApplication::FeatureFunctionality { .. })));
        assert_eq!(n.steps, n.trace.len());
    }

    #[test]
    fn detects_inconsistency() {
        let l = lattice();
        let c = parse_clause(
            "X: movie & X.directed_by = Y & Y: director & X.directed_by = Z & Z: string",
            l.signature(),
        )
        .unwrap();
        assert!(normalize(&c, &l).is_inconsistent());
        let c = parse_clause("X: bot", l.signature()).unwrap();
        assert_eq!(normalize(&c, &l), NormalForm::Inconsistent { tag: Tag::new("X") });
    }

    #[test]
    fn randomized_orders_agree() {
        let l = lattice();
        let c = parse_clause(
            "A.title = B & A.title = C & B: thriller & C: horror & D = A & D.title = E & E.directed_by = F",
            l.signature(),
        )
        .unwrap();
        let base = normalize(&c, &l);
        for seed in 0..20 {
            let opts = NormalizeOptions { order: RuleOrder::Randomized(seed), trace: false };
            assert!(normalize_with(&c, &l, opts).result.equivalent_up_to_renaming(&base));
        }
    }

    #[test]
    fn term_normalization() {
        let l = lattice();
        let t = parse_term(
            "X: thriller(directed_by -> Y: person, directed_by -> Z: director)",
            l.signature(),
        )
        .unwrap();
        let n = normalize_term(&t, &l).unwrap();
        let y = n.feature_value(n.root(), l.signature().feature("directed_by").unwrap()).unwrap();
        assert_eq!(n.sort_of(y), Some(l.sort("director")));
        let bad = parse_term(
            "X: movie(directed_by -> Y: director, directed_by -> Y: string)",
            l.signature(),
        )
        .unwrap();
        assert!(normalize_term(&bad, &l).is_none());
    }
}
