//! Error type shared by every module of the crate.

use thiserror::Error;

/// Byte range of a token inside a source string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Operands live in different scalar domains or have different variable counts.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A denominator evaluated to zero: the point lies in the indeterminacy
    /// locus of that coordinate.
    #[error("denominator vanishes at the given point")]
    DenominatorVanishes,

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Point enumeration was requested for a characteristic-zero field.
    #[error("cannot enumerate an infinite field")]
    InfiniteField,

    /// A substituted denominator collapsed to the zero polynomial: the inner
    /// tuple's image lies inside the outer tuple's indeterminacy set.
    #[error("degenerate composition: a substituted denominator is identically zero")]
    DegenerateComposition,

    /// Inverse certification failed; carries the first failing coordinate and
    /// the nonzero cross-product polynomial as a witness (rendered).
    #[error("not an inverse pair: coordinate {coordinate} of {side} composite differs from the identity; cross-product witness: {witness}")]
    NotInverse {
        coordinate: usize,
        side: &'static str,
        witness: String,
    },

    /// The point lies in the singular set of the element.
    #[error("point lies in the singular set")]
    SingularPoint,

    #[error("generator index {index} out of range (system has {len} generators)")]
    IndexOutOfRange { index: usize, len: usize },

    /// The element set is not closed under inverse.
    #[error("element set is not symmetric: no inverse found for element {0}")]
    NotSymmetric(String),

    #[error("element set does not contain the identity")]
    MissingIdentity,

    #[error("prime {0} divides a collected coefficient; reduction is undefined or degenerate")]
    BadPrime(u64),

    /// Certification of a reduced element failed even though the prime was
    /// declared good. This indicates a defect in the plan computation.
    #[error("internal: reduction of {element} mod {prime} failed certification: {detail}")]
    ReductionFailure {
        element: String,
        prime: u64,
        detail: String,
    },

    #[error("permutation size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    /// The requested point table would exceed the configured cap.
    #[error("point table of size {n} exceeds the configured cap {cap}")]
    PointCapExceeded { n: u128, cap: u64 },

    #[error("invalid chunk: {0}")]
    InvalidChunk(String),

    /// The partial law has two values for one pair; carries the witnesses.
    #[error("law is not functional: {x} * {y} maps to both {z1} and {z2}")]
    NotFunctional {
        x: usize,
        y: usize,
        z1: usize,
        z2: usize,
    },

    #[error("basepoint {basepoint} not in element range 0..{len}")]
    MissingBasepoint { basepoint: usize, len: usize },

    #[error("search space of about {estimate:e} assignments exceeds the cap {cap:e}")]
    SearchSpaceExceeded { estimate: f64, cap: f64 },

    /// The Folner witness does not satisfy |boundary|/|set| < 1/r.
    #[error("witness too small: |SE - E|/|E| = {ratio} is not < 1/r = {bound}")]
    WitnessTooSmall { ratio: String, bound: String },

    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },

    #[error("unknown generator `{name}` at {span}")]
    UnknownGenerator { name: String, span: Span },

    /// A coordinate references a variable beyond the declared dimension.
    #[error("arity error at {span}: variable `{variable}` needs dimension {needed}, tuple has {declared} coordinates")]
    Arity {
        span: Span,
        variable: String,
        needed: usize,
        declared: usize,
    },

    /// A literal cannot be interpreted in the declared coefficient field.
    #[error("domain error at {span}: {message}")]
    DomainError { span: Span, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
