//! Exact computations with rooted trees and pre-Lie algebras.
//!
//! * [`trees`]: canonical labelled rooted trees, grafting, enumeration.
//! * [`lincomb`]: formal linear combinations over ℚ.
//! * [`operad`]: the rooted-trees operad (`∘_i`, `γ`, `⋆`, symmetric action).
//! * [`freeprelie`]: the free pre-Lie algebra on a set of generators.
//! * [`words`]: parenthesised words, the pre-Lie relator, and the tree maps.
//! * [`dual`]: the arity-three duality computation against Perm.
//! * [`homology`]: the pre-Lie chain complex and its homology by weight.
//! * [`enveloping`]: PBW normal forms and the module structure of a free
//!   pre-Lie algebra over its enveloping algebra.

pub mod dual;
pub mod enveloping;
pub mod freeprelie;
pub mod homology;
pub mod linalg;
pub mod lincomb;
pub mod operad;
pub mod trees;
pub mod words;

pub use freeprelie::{Alphabet, FreeElement};
pub use linalg::ExactMatrix;
pub use lincomb::{Coefficient, LinComb};
pub use operad::OperadElement;
pub use trees::{Label, RootedTree};
pub use words::{Word, WordComb};
