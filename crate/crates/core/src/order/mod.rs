//! Finite posets and lattices.

mod conditions;
mod covers;
pub mod fixtures;
mod io;
mod lattice;
mod poset;

pub use conditions::{ConditionFailure, DEFAULT_SUBSET_CAP};
pub use covers::{DCertificate, JoinCover};
pub use io::LatticeFile;
pub use lattice::{build_lattice, FiniteLattice};
pub use poset::FinitePoset;
