//! Exact arithmetic: prime fields, sparse polynomials, rational functions,
//! hypersurface quotient rings and finite fields `F_q`.

mod field;
mod finite_field;
mod hypersurface;
mod parse;
mod poly;
mod rational;
mod resultant;
mod span;

pub use field::{is_prime, PrimeField};
pub use finite_field::{prime_power, CompiledPoly, FiniteField, MAX_FIELD_ORDER};
pub use hypersurface::HypersurfaceRing;
pub use parse::{identifiers, parse_poly, parse_vector_field, ParseError};
pub use poly::{Exponents, Membership, Monomial, Poly, PolyRing};
pub use rational::RationalFn;
pub use resultant::{coprime, determinant, resultant};
pub use span::TaggedSpan;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} exceeds the table limit")]
    FieldTooLarge(u64),
    #[error("cannot embed F_{from} into F_{to}")]
    NoEmbedding { from: u64, to: u64 },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid variable name '{0}'")]
    BadVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("invalid hypersurface relation: {0}")]
    BadRelation(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
