//! Fuzzy order-sorted feature logic.
//!
//! Sorts form a lattice whose subsumption relation is graded in `[0, 1]`.
//! Terms describe rooted feature graphs over those sorts; unification
//! computes the most general common instance together with how well it
//! approximates each input, and subsumption measures how well one term
//! approximates another.
//!
//! Everything is generic over the [`Degree`] scalar; the aliases at the
//! crate root fix it to `f64`.

pub mod degree;
pub mod error;
pub mod formats;
pub mod graphs;
pub mod lattice;
pub mod normalize;
pub mod semantics;
pub mod signature;
pub mod subsumption;
pub mod terms;
pub mod unify;
mod unionfind;

pub use degree::{Degree, Rational};
pub use error::{FormatError, LatticeError, ParseError, TermError, UnifyError};
pub use graphs::{GraphAlgebraElement, OsfGraph};
pub use normalize::{normalize, NormalForm};
pub use signature::{FeatureId, Signature, SortId};
pub use subsumption::{fuzzy_subsumption_degree, syntactic_subsumes};
pub use terms::{parse_clause, parse_term, Clause, Constraint, NormalTerm, Tag, Term};
pub use unify::{unify, Unifier};
pub use unionfind::UnionFind;

pub type Lattice = lattice::SortLattice<f64>;
pub type Graph = lattice::SubsumptionGraph<f64>;
pub type Closure = lattice::ClosureTable<f64>;
pub type Similarity = lattice::SimilarityRelation<f64>;
pub type Interpretation = semantics::Interpretation<f64>;
pub type UnifyResult = unify::UnifyResult<f64>;
pub type Witness = subsumption::SubsumptionWitness<f64>;

pub type ExactLattice = lattice::SortLattice<Rational>;
