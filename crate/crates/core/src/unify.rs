//! Unification of normal terms with approximation degrees.

use std::collections::{HashMap, HashSet};

use crate::degree::Degree;
use crate::error::UnifyError;
use crate::graphs::graph_equivalent;
use crate::lattice::SortLattice;
use crate::normalize::{normalize_with, NormalForm, NormalizeOptions, RuleApplication};
use crate::signature::Signature;
use crate::terms::{clause_to_term, Clause, Constraint, NormalTerm, Tag, TagGen};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unifier {
    Term(NormalTerm),
    /// The inputs have no common instance.
    Bottom,
}

impl Unifier {
    pub fn term(&self) -> Option<&NormalTerm> {
        match self {
            Unifier::Term(t) => Some(t),
            Unifier::Bottom => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct UnifyResult<D> {
    pub unifier: Unifier,
    /// Degree to which the unifier is subsumed by the first input.
    pub beta1: D,
    /// Degree to which the unifier is subsumed by the second input.
    pub beta2: D,
    pub beta: D,
    /// Each unifier tag with the input tags merged into it.
    pub classes: Vec<(Tag, Vec<Tag>)>,
    /// Tags of the second input renamed to avoid clashes.
    pub renamed: HashMap<Tag, Tag>,
    pub trace: Vec<RuleApplication>,
}

fn check_signature(term: &NormalTerm, sig: &Signature) -> Result<(), UnifyError> {
    for n in term.term().nodes() {
        if !sig.has_sort(n.sort) {
            return Err(UnifyError::SignatureMismatch(format!(
                "sort {} of {} is not in the lattice",
                n.sort, n.tag
            )));
        }
        if let Some(&(f, _)) = n.args.iter().find(|(f, _)| !sig.has_feature(*f)) {
            return Err(UnifyError::SignatureMismatch(format!(
                "feature #{} of {} is not in the lattice",
                f.0, n.tag
            )));
        }
    }
    Ok(())
}

pub fn unify<D: Degree>(
    psi1: &NormalTerm,
    psi2: &NormalTerm,
    lattice: &SortLattice<D>,
) -> Result<UnifyResult<D>, UnifyError> {
    unify_with(psi1, psi2, lattice, NormalizeOptions::default())
}

/// Conjoin both clauses with the equation of their roots, normalize, and
/// read the unifier back from the solved form. Each class gets a fresh
/// `_Z<n>` tag in order of first appearance.
pub fn unify_with<D: Degree>(
    psi1: &NormalTerm,
    psi2: &NormalTerm,
    lattice: &SortLattice<D>,
    options: NormalizeOptions,
) -> Result<UnifyResult<D>, UnifyError> {
    check_signature(psi1, lattice.signature())?;
    check_signature(psi2, lattice.signature())?;

    let tags1: HashSet<Tag> = psi1.tags().into_iter().collect();
    let tags2 = psi2.tags();
    let mut gen = TagGen::avoiding(tags1.iter().cloned().chain(tags2.iter().cloned()));
    let renamed: HashMap<Tag, Tag> = tags2
        .iter()
        .filter(|t| tags1.contains(*t))
        .map(|t| (t.clone(), gen.fresh()))
        .collect();
    let psi2 = if renamed.is_empty() {
        psi2.clone()
    } else {
        NormalTerm::new(psi2.term().rename(&renamed)).expect("renaming keeps normality")
    };

    let mut clause = psi1.to_clause();
    clause.constraints.extend(psi2.to_clause().constraints);
    clause
        .constraints
        .push(Constraint::Eq(psi1.root().clone(), psi2.root().clone()));

    let run = normalize_with(&clause, lattice, options);
    let solved = match run.result {
        NormalForm::Inconsistent { .. } => {
            return Ok(UnifyResult {
                unifier: Unifier::Bottom,
                beta1: D::one(),
                beta2: D::one(),
                beta: D::one(),
                classes: Vec::new(),
                renamed,
                trace: run.trace,
            })
        }
        ref nf @ NormalForm::Normalized { ref solved, .. } => (nf.representatives(), solved.clone()),
    };
    let (reps, solved) = solved;

    let all_tags = clause.tags();
    let mut fresh = TagGen::avoiding(all_tags.iter().cloned());
    let mut name: HashMap<Tag, Tag> = HashMap::new();
    let mut classes: Vec<(Tag, Vec<Tag>)> = Vec::new();
    let mut class_of: HashMap<Tag, usize> = HashMap::new();
    for t in &all_tags {
        let rep = &reps[t];
        let k = *class_of.entry(rep.clone()).or_insert_with(|| {
            let z = fresh.fresh();
            name.insert(rep.clone(), z.clone());
            classes.push((z, Vec::new()));
            classes.len() - 1
        });
        classes[k].1.push(t.clone());
    }
    let unifier = clause_to_term(&Clause {
        root: Some(name[&reps[psi1.root()]].clone()),
        ..solved.rename(&name)
    })
    .expect("normal form of a rooted clause is rooted and solved");

    let beta_of = |psi: &NormalTerm| {
        crate::degree::min_all(psi.tags().iter().map(|x| {
            let z = &name[&reps[x]];
            lattice.degree(
                unifier.sort_of(z).expect("class tag in unifier"),
                psi.sort_of(x).expect("own tag"),
            )
        }))
    };
    let beta1 = beta_of(psi1);
    let beta2 = beta_of(&psi2);
    Ok(UnifyResult {
        unifier: Unifier::Term(unifier),
        beta1,
        beta2,
        beta: beta1.min_deg(beta2),
        classes,
        renamed,
        trace: run.trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Comparison<D> {
    Equivalent,
    /// The first term is subsumed by the second to this degree.
    FirstBelowSecond(D),
    /// The second term is subsumed by the first to this degree.
    SecondBelowFirst(D),
    Incomparable,
}

/// Decide subsumption by unifying: if the unifier is equivalent to one of
/// the inputs, that input is the more specific one and `beta` is the degree.
pub fn mutual_subsumption_via_unify<D: Degree>(
    psi1: &NormalTerm,
    psi2: &NormalTerm,
    lattice: &SortLattice<D>,
) -> Result<Comparison<D>, UnifyError> {
    let r = unify(psi1, psi2, lattice)?;
    let Unifier::Term(u) = &r.unifier else {
        return Ok(Comparison::Incomparable);
    };
    let is1 = graph_equivalent(u.graph(), psi1.graph());
    let is2 = graph_equivalent(u.graph(), psi2.graph());
    Ok(match (is1, is2) {
        (true, true) => Comparison::Equivalent,
        (true, false) => Comparison::FirstBelowSecond(r.beta),
        (false, true) => Comparison::SecondBelowFirst(r.beta),
        (false, false) => Comparison::Incomparable,
    })
}
