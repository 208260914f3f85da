//! Exact computations for rank-one foliations in positive characteristic:
//! derivations and their `p`-th powers, `p`-cyclic covers, blow-up
//! discrepancies, rings of constants, and Néron–Severi lattice arithmetic.

pub mod algebra;
pub mod birational;
pub mod cone;
pub mod cover;
pub mod derivation;
pub mod quotient;
pub mod sample;
pub mod suite;
