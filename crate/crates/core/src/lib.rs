//! Probability over similarity-projection structures.
//!
//! A sample space carries a similarity function `s(x, y) ∈ [0, 1]`. Events
//! are subspaces, which form an orthomodular lattice; star-fields replace
//! sigma-fields, measures gain a continuity axiom, and real random variables
//! become partial functions defined on a basis.
//!
//! Three concrete models are provided: classical (delta similarity on a
//! finite set), ray (squared cosine between unit rays of `R^d`) and explicit
//! (a user-supplied similarity matrix).

pub mod axioms;
pub mod error;
pub(crate) mod explicit;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod prob;
pub mod rv;
pub mod sample;
pub mod sigma;
pub mod similarity;
pub mod structure;
pub mod subspace;
pub mod suite;

pub use error::{Result, SpError};
pub use structure::{OrthoSet, Point, SpStructure, StructureKind};
pub use subspace::Subspace;
