//! Quotient rings `F_p[x_1, ..., x_n, w] / (w^d - f)` with `f` free of `w`.

use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, Monomial, Poly, PolyRing};

/// The coordinate ring of the hypersurface `w^d = f`. The distinguished
/// variable `w` is always the last variable of the ambient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceRing {
    ambient: Arc<PolyRing>,
    d: u32,
    f: Poly,
}

impl HypersurfaceRing {
    pub fn new(ambient: &Arc<PolyRing>, d: u32, f: Poly) -> Result<Self, AlgebraError> {
        if ambient.nvars() == 0 {
            return Err(AlgebraError::BadRelation("ambient ring has no variables".into()));
        }
        if d == 0 {
            return Err(AlgebraError::BadRelation("degree must be at least 1".into()));
        }
        if !super::poly::same_ring(ambient, f.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        let w = ambient.nvars() - 1;
        if !f.is_free_of(w) {
            return Err(AlgebraError::BadRelation(format!(
                "f must not involve {}",
                ambient.vars()[w]
            )));
        }
        Ok(Self {
            ambient: Arc::clone(ambient),
            d,
            f,
        })
    }

    /// Reads a relation of the form `c·w^d + (terms free of w)` and rescales it
    /// to `w^d - f`.
    pub fn from_relation(g: &Poly) -> Result<Self, AlgebraError> {
        let ring = Arc::clone(g.ring());
        if ring.nvars() == 0 {
            return Err(AlgebraError::BadRelation("ambient ring has no variables".into()));
        }
        let w = ring.nvars() - 1;
        let d = g.degree_in(w).unwrap_or(0);
        if d == 0 {
            return Err(AlgebraError::BadRelation(format!(
                "relation does not involve {}",
                ring.vars()[w]
            )));
        }
        let coeffs = g.coefficients_in(w);
        if coeffs[1..d as usize].iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::BadRelation(format!(
                "relation must have the shape {}^d - f",
                ring.vars()[w]
            )));
        }
        let lead = coeffs[d as usize]
            .constant_value()
            .filter(|c| *c != 0)
            .ok_or_else(|| {
                AlgebraError::BadRelation("leading coefficient in w must be a constant".into())
            })?;
        let inv = ring.field().inv(lead).unwrap();
        let f = -&coeffs[0].scale(inv);
        Self::new(&ring, d, f)
    }

    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.ambient
    }

    pub fn distinguished_var(&self) -> usize {
        self.ambient.nvars() - 1
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn section(&self) -> &Poly {
        &self.f
    }

    /// The defining polynomial `w^d - f`.
    pub fn relation(&self) -> Poly {
        let w = Poly::monomial(
            &self.ambient,
            Monomial::var(self.ambient.nvars(), self.distinguished_var(), self.d),
            1,
        );
        &w - &self.f
    }

    /// Normal form with `w`-degree below `d`, by substituting `w^d ↦ f`.
    pub fn reduce(&self, a: &Poly) -> Result<Poly, AlgebraError> {
        if !super::poly::same_ring(&self.ambient, a.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        let w = self.distinguished_var();
        if a.degree_in(w).unwrap_or(0) < self.d {
            return Ok(a.clone());
        }
        let mut f_powers: Vec<Poly> = vec![Poly::one(&self.ambient)];
        let mut out = Poly::zero(&self.ambient);
        for (m, c) in a.terms() {
            let e = m.exponent(w);
            let (q, r) = ((e / self.d) as usize, e % self.d);
            while f_powers.len() <= q {
                let next = f_powers.last().unwrap() * &self.f;
                f_powers.push(next);
            }
            let mut rest = m.exponents().to_vec();
            rest[w] = r;
            let shifted = f_powers[q].mul_monomial(&Monomial::from_exponents(&rest), c);
            out = &out + &shifted;
        }
        Ok(out)
    }

    pub fn is_reduced(&self, a: &Poly) -> bool {
        a.degree_in(self.distinguished_var()).unwrap_or(0) < self.d
    }

    /// Decides whether `a` vanishes in the quotient ring.
    pub fn is_zero(&self, a: &Poly) -> Result<bool, AlgebraError> {
        Ok(self.reduce(a)?.is_zero())
    }
}

impl fmt::Display for HypersurfaceRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = &self.ambient.vars()[self.distinguished_var()];
        match self.d {
            1 => write!(f, "{w}")?,
            d => write!(f, "{w}^{d}")?,
        }
        if self.f.is_zero() {
            Ok(())
        } else if self.f.num_terms() == 1 {
            write!(f, " - {}", self.f)
        } else {
            write!(f, " - ({})", self.f)
        }
    }
}
