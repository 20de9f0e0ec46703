//! Computation in finitely generated lattices.
//!
//! * [`order`]: finite posets and lattices, Whitman's and Dean's conditions,
//!   join covers, the D-relation and the finite boundedness test.
//! * [`term`]: meet/join terms, their wire format and a hash-consing arena.
//! * [`free`]: the word problem and canonical forms in free lattices, and the
//!   alternation stages `G_k`, `H_k`.
//! * [`partial`]: lattices freely generated by finite partial lattices
//!   (Dean's word problem), closure stages and the boundedness decision.
//! * [`hom`]: homomorphisms onto finite lattices, the `alpha`/`beta`
//!   approximations, fiber products and their generating sets.
//! * [`counterexample`]: an unbounded epimorphism with finitely generated
//!   kernel, checked on truncations.
//! * [`cli`]: the `fglat` command line.

pub mod cli;
mod closure;
pub mod counterexample;
pub mod error;
pub mod free;
pub mod hom;
pub mod order;
pub mod partial;
pub mod random;
pub mod term;

pub use error::{Error, Result};
pub use order::{FiniteLattice, FinitePoset};
pub use term::Term;
