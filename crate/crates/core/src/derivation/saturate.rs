//! Removal of common factors from the coefficients of a rank-one generator.

use serde::Serialize;

use super::{Derivation, DerivationError, FoliationChart, Result};
use crate::algebra::{coprime, Monomial, Poly, PolyRing};

/// Whether a generator is known to have coprime coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitivity {
    Certified,
    Unknown,
}

/// Linear-form searches are skipped once `p^(n+1)` exceeds this.
const LINEAR_SEARCH_BUDGET: u64 = 200_000;

pub(super) fn saturate(d: &Derivation) -> Result<FoliationChart> {
    let ring = d.ring().clone();
    let mut coeffs = d.poly_coeffs().ok_or(DerivationError::NotPolynomial)?;
    if coeffs.iter().all(Poly::is_zero) {
        return Err(DerivationError::ZeroDerivation);
    }
    let mut removed = Poly::one(&ring);

    let content = coeffs
        .iter()
        .filter_map(Poly::monomial_content)
        .reduce(|a, b| a.gcd(&b))
        .expect("some coefficient is nonzero");
    if !content.is_one() {
        for c in coeffs.iter_mut() {
            *c = c.div_monomial(&content).unwrap_or_else(|| Poly::zero(&ring));
        }
        removed = removed.mul_monomial(&content, 1);
    }

    let primitivity = loop {
        let nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
        if nonzero.iter().any(|c| c.is_constant()) {
            break Primitivity::Certified;
        }
        let smallest = (*nonzero
            .iter()
            .min_by_key(|c| (c.total_degree(), c.num_terms()))
            .unwrap())
        .clone();
        if let Some(h) = common_divisor(&coeffs, &smallest.monic())? {
            divide_all(&mut coeffs, &h);
            removed = &removed * &h;
            continue;
        }
        if any_coprime_pair(&smallest, &nonzero)? {
            break Primitivity::Certified;
        }
        match linear_factors(&smallest) {
            Some(factors) => {
                let mut found = None;
                for h in &factors {
                    if let Some(h) = common_divisor(&coeffs, h)? {
                        found = Some(h);
                        break;
                    }
                    let cofactor = smallest.div_exact(h)?.expect("factor divides").monic();
                    if let Some(h) = common_divisor(&coeffs, &cofactor)? {
                        found = Some(h);
                        break;
                    }
                }
                match found {
                    Some(h) => {
                        divide_all(&mut coeffs, &h);
                        removed = &removed * &h;
                    }
                    // without linear factors a form of degree ≤ 3 is irreducible,
                    // and it does not divide every coefficient
                    None if factors.is_empty() && smallest.total_degree().unwrap() <= 3 => {
                        break Primitivity::Certified
                    }
                    None => break Primitivity::Unknown,
                }
            }
            None => break Primitivity::Unknown,
        }
    };

    let generator = match d.hypersurface() {
        Some(h) => Derivation::on_hypersurface(h, coeffs)?,
        None => Derivation::from_polys(&ring, coeffs)?,
    };
    Ok(FoliationChart {
        generator,
        primitivity,
        removed_factor: removed,
    })
}

fn common_divisor(coeffs: &[Poly], h: &Poly) -> Result<Option<Poly>> {
    if h.is_constant() {
        return Ok(None);
    }
    for c in coeffs {
        if !c.is_zero() && c.div_exact(h)?.is_none() {
            return Ok(None);
        }
    }
    Ok(Some(h.clone()))
}

fn divide_all(coeffs: &mut [Poly], h: &Poly) {
    for c in coeffs.iter_mut() {
        if !c.is_zero() {
            *c = c.div_exact(h).unwrap().expect("common divisor");
        }
    }
}

fn any_coprime_pair(smallest: &Poly, nonzero: &[&Poly]) -> Result<bool> {
    for c in nonzero {
        if *c != smallest && coprime(smallest, c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All monic linear forms over `F_p` dividing `c`, or `None` when the search
/// exceeds the budget.
fn linear_factors(c: &Poly) -> Option<Vec<Poly>> {
    let ring = c.ring();
    let (p, n) = (ring.p(), ring.nvars());
    let size = p.checked_pow(n as u32 + 1)?;
    if size > LINEAR_SEARCH_BUDGET {
        return None;
    }
    let mut out = Vec::new();
    for lead in 0..n {
        if c.degree_in(lead) == Some(0) {
            continue;
        }
        let free = n - lead - 1;
        let count = p.pow(free as u32 + 1);
        for code in 0..count {
            let h = linear_form(ring, lead, code);
            if uses_variable_absent_from(&h, c) {
                continue;
            }
            if c.div_exact(&h).ok().flatten().is_some() {
                out.push(h);
            }
        }
    }
    Some(out)
}

/// `x_lead + Σ_{l > lead} a_l x_l + a_0`, with the `a` digits read from `code`.
fn linear_form(ring: &std::sync::Arc<PolyRing>, lead: usize, mut code: u64) -> Poly {
    let p = ring.p();
    let n = ring.nvars();
    let mut terms = vec![(Monomial::var(n, lead, 1), 1)];
    terms.push((Monomial::one(n), code % p));
    code /= p;
    for l in lead + 1..n {
        terms.push((Monomial::var(n, l, 1), code % p));
        code /= p;
    }
    Poly::from_terms(ring, terms)
}

fn uses_variable_absent_from(h: &Poly, c: &Poly) -> bool {
    (0..h.ring().nvars()).any(|v| !h.is_free_of(v) && c.is_free_of(v))
}
