//! Exact-arithmetic workbench for pseudo MV-algebras and their
//! Riesz-space-valued states.
//!
//! The crate is organised bottom-up:
//!
//! - [`ordered`]: unital ℓ-groups (ℤⁿ componentwise, ℤ² lexicographic) and
//!   unital Riesz spaces (ℚⁿ, lexicographic ℚ²).
//! - [`algebra`]: pseudo MV-algebras given by Cayley tables, by the interval
//!   construction over a unital ℓ-group, by products and by finite chains.
//! - [`ideal`]: ideals, normality, maximality and quotients.
//! - [`state`]: state polytopes, Riesz-space-valued states, morphism and
//!   extremality classification.
//! - [`jordan`]: signed measures, their lattice operations and simplex
//!   certification of state spaces.
//! - [`metric`]: the state pseudo-norm on a unital ℓ-group and its
//!   finite-scale consequences.
//!
//! All scalars are exact rationals; nothing in the crate uses floating point.

pub mod algebra;
pub mod error;
pub mod ideal;
pub mod jordan;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod metric;
pub mod ordered;
pub mod polytope;
pub mod rational;
pub mod schema;
pub mod state;

pub use algebra::{Element, FiniteAlgebra, PmvAlgebra};
pub use error::{Error, Result};
pub use ordered::{GroupElement, GroupKind, RieszKind, RieszRep, UnitalGroup};
pub use rational::{rat, Rat, RVec};
