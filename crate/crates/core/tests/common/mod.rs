#![allow(dead_code)]

use std::sync::Arc;

use pfol_core::algebra::{Monomial, Poly, PolyRing};
use pfol_core::derivation::Derivation;
use proptest::prelude::*;

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(p, vars).unwrap()
}

/// Raw terms of a polynomial in `n` variables; coefficients are reduced mod p later.
pub fn terms(n: usize, max_degree: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, u64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), 1..1_000u64), 0..=max_terms)
}

pub fn build(ring: &Arc<PolyRing>, terms: &[(Vec<u32>, u64)]) -> Poly {
    let p = ring.p();
    Poly::from_terms(
        ring,
        terms.iter().map(|(e, c)| (Monomial::from_exponents(e), c % p)),
    )
}

pub fn derivation(ring: &Arc<PolyRing>, coeffs: &[Vec<(Vec<u32>, u64)>]) -> Derivation {
    Derivation::from_polys(ring, coeffs.iter().map(|t| build(ring, t)).collect()).unwrap()
}

/// Coefficient term lists for a derivation on `n` variables.
pub fn derivation_terms(n: usize, max_degree: u32, max_terms: usize) -> impl Strategy<Value = Vec<Vec<(Vec<u32>, u64)>>> {
    prop::collection::vec(terms(n, max_degree, max_terms), n)
}
