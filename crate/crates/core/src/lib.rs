//! Workbench for partial-polymorphism closure of generalized quantifiers.
//!
//! The crate provides, for finite relational structures over integer
//! universes:
//!
//! - the structure algebra (order, union, powers) and complete
//!   homomorphism/isomorphism search ([`structure`], [`search`]);
//! - families of partial functions (Maltsev, near-unanimity), their closure
//!   operator, and decision procedures for invariance properties
//!   ([`family`]);
//! - structure classes acting as quantifier stand-ins, with bounded-size
//!   refutation searches for closure properties ([`closure`]);
//! - CSP targets (parity relations, hypergraph colourings), a backtracking
//!   solver, and a GF(2) elimination solver ([`csp`]);
//! - ordered regular graphs, girth machinery and randomized generation
//!   ([`graph`]);
//! - the CFI construction and its switch-set calculus ([`cfi`]);
//! - exact solvers for the pebble game and the Cops-and-Robber game, the
//!   path-based Duplicator strategy engine with adversarial verification,
//!   and a colour refinement oracle ([`game`]).
//!
//! All operations are pure: values are immutable after construction and the
//! solvers are deterministic for a fixed seed.

pub mod cfi;
pub mod closure;
pub mod csp;
pub mod error;
pub mod family;
pub mod game;
pub mod graph;
pub mod search;
pub mod structure;
pub mod util;

pub use error::{Error, Result};
pub use family::Family;
pub use structure::{Assignment, PartialMap, Relation, Structure, Vocabulary};
