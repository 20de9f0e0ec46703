use thiserror::Error;

/// Errors raised by the lattice engines.
///
/// Every variant maps onto one CLI exit code (see [`crate::cli`]): cap
/// breaches are kept apart from data errors so a caller can tell "the input
/// is wrong" from "the search budget ran out".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a lattice: {a} and {b} have no {missing}")]
    NotALattice {
        a: String,
        b: String,
        missing: &'static str,
    },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    OrderCycle(String, String),
    #[error("empty poset")]
    EmptyPoset,
    #[error("the designated generators do not generate the lattice")]
    NotGenerating,
    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` has no assigned value")]
    UnassignedGenerator(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("target lattice is not lower bounded (D-cycle {0:?})")]
    NotLowerBounded(Vec<String>),
    #[error("target lattice is not upper bounded (dual D-cycle {0:?})")]
    NotUpperBounded(Vec<String>),
    #[error("target fails Dean's condition for the designated generators")]
    DeanConditionFails,
    #[error("homomorphisms have different targets")]
    TargetMismatch,
    #[error("target lattice is lower bounded; no non-finite-generation witness exists")]
    TargetLowerBounded,
    #[error("no strictly smaller beta value found within depth {0} at any candidate element")]
    SearchExhausted(usize),
    #[error("invalid partial lattice: {0}")]
    InvalidPartialLattice(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn cap(what: &'static str, cap: usize) -> Self {
        Error::CapExceeded { what, cap }
    }
}
