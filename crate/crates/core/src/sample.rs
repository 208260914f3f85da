//! Seeded random polynomials and derivations for property checks and sweeps.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Monomial, Poly, PolyRing};
use crate::derivation::Derivation;

/// A random monomial of total degree at most `max_degree`.
pub fn random_monomial<R: Rng + ?Sized>(n: usize, max_degree: u32, rng: &mut R) -> Monomial {
    let mut exps = vec![0u32; n];
    let degree = rng.gen_range(0..=max_degree);
    for _ in 0..degree {
        exps[rng.gen_range(0..n)] += 1;
    }
    Monomial::from_exponents(&exps)
}

/// A polynomial with at most `max_terms` terms of degree at most `max_degree`.
/// Colliding terms are summed, so the result may be zero.
pub fn random_poly<R: Rng + ?Sized>(
    ring: &Arc<PolyRing>,
    max_degree: u32,
    max_terms: usize,
    rng: &mut R,
) -> Poly {
    let p = ring.p();
    let count = rng.gen_range(1..=max_terms.max(1));
    let terms = (0..count)
        .map(|_| (random_monomial(ring.nvars(), max_degree, rng), rng.gen_range(1..p)))
        .collect::<Vec<_>>();
    Poly::from_terms(ring, terms)
}

pub fn random_nonzero_poly<R: Rng + ?Sized>(
    ring: &Arc<PolyRing>,
    max_degree: u32,
    max_terms: usize,
    rng: &mut R,
) -> Poly {
    loop {
        let f = random_poly(ring, max_degree, max_terms, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A nonconstant polynomial, suitable as the section of a cover.
pub fn random_section<R: Rng + ?Sized>(ring: &Arc<PolyRing>, max_degree: u32, rng: &mut R) -> Poly {
    loop {
        let f = random_poly(ring, max_degree, 2 * ring.nvars() + 2, rng);
        if !f.is_constant() {
            return f;
        }
    }
}

/// A nonzero derivation with polynomial coefficients.
pub fn random_derivation<R: Rng + ?Sized>(
    ring: &Arc<PolyRing>,
    max_degree: u32,
    max_terms: usize,
    rng: &mut R,
) -> Derivation {
    loop {
        let coeffs = (0..ring.nvars())
            .map(|_| random_poly(ring, max_degree, max_terms, rng))
            .collect();
        let d = Derivation::from_polys(ring, coeffs).expect("coefficients share the ring");
        if !d.is_zero() {
            return d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_bounds_and_seed() {
        let r = PolyRing::new(5, &["x", "y", "z"]).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_poly(&r, 4, 5, &mut a);
            assert_eq!(f, random_poly(&r, 4, 5, &mut b));
            assert!(f.total_degree().unwrap_or(0) <= 4);
            assert!(f.num_terms() <= 5);
        }
        let s = random_section(&r, 3, &mut a);
        assert!(!s.is_constant());
    }
}
