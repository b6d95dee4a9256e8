//! Exact divided difference operators on lattice parapolytopes.
//!
//! The pipeline starts from a point of a string space (a block-decomposed
//! `Q^d` with one integral linear form per block) and applies
//! convex-geometric operators that grow a chain one dimension at a time,
//! fiberwise, against the forms. Characters of the resulting chains are
//! Laurent polynomials over the weight lattice; the same characters are
//! reachable symbolically (the `T_i` operators) and through Freudenthal's
//! recursion, which is what the test suites exploit.
//!
//! All arithmetic is exact. See the `constructions` module for the named
//! builders (Gelfand-Zetlin, Sp(4), twisted cubes, degenerations, Bott
//! towers) and the `polydd` binary for the JSON surfaces.

pub mod cartan;
pub mod chain;
pub mod character;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod ops;
pub mod rational;
pub mod string_space;

pub use cartan::CartanData;
pub use chain::{Chain, Fiber, Piece};
pub use character::{
    chi, demazure_t, demazure_t_word, geometric_segment, project_degeneration, LaurentPolynomial,
    WeightForms,
};
pub use constructions::HPolytope;
pub use error::Error;
pub use ops::{expand_box, BoxRole, OpToken, OperatorWord, SignedBox};
pub use rational::Rat;
pub use string_space::{StringSpace, Weight};
