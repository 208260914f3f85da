//! Derivations (vector fields) on polynomial and hypersurface rings.
//!
//! A [`Derivation`] is determined by its values on the coordinates; it acts on
//! polynomials and rational functions through the Leibniz rule. Derivations
//! attached to a [`HypersurfaceRing`] are ambient derivations that preserve
//! the relation ideal, and their outputs are reduced to normal form.

mod saturate;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    parse_vector_field, AlgebraError, HypersurfaceRing, ParseError, Poly, PolyRing, RationalFn,
};

pub use saturate::Primitivity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("derivations act on different rings")]
    RingMismatch,
    #[error("the zero derivation has no p-closedness witness")]
    ZeroDerivation,
    #[error("coefficients must be polynomials")]
    NotPolynomial,
    #[error("the derivation does not preserve the relation {0}")]
    NotTangent(String),
    #[error("expected {expected} coefficients, found {found}")]
    Arity { expected: usize, found: usize },
}

type Result<T> = std::result::Result<T, DerivationError>;

#[derive(Clone, Debug)]
pub struct Derivation {
    ring: Arc<PolyRing>,
    hypersurface: Option<Arc<HypersurfaceRing>>,
    coeffs: Vec<RationalFn>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.hypersurface == other.hypersurface && self.coeffs == other.coeffs
    }
}

/// Result of the p-closedness test `D^[p] ∧ D = 0`.
#[derive(Clone, Debug)]
pub struct PClosedness {
    pub closed: bool,
    pub p_power: Derivation,
    /// `g` with `D^[p] = g·D`, when `closed`.
    pub witness: Option<RationalFn>,
}

/// A rank-one foliation in a chart, given by a single generator.
#[derive(Clone, Debug)]
pub struct FoliationChart {
    pub generator: Derivation,
    pub primitivity: Primitivity,
    /// The common factor removed from the original coefficients.
    pub removed_factor: Poly,
}

impl FoliationChart {
    pub fn is_primitive(&self) -> bool {
        self.primitivity == Primitivity::Certified
    }
}

impl Derivation {
    pub fn new(ring: &Arc<PolyRing>, coeffs: Vec<RationalFn>) -> Result<Self> {
        if coeffs.len() != ring.nvars() {
            return Err(DerivationError::Arity {
                expected: ring.nvars(),
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(DerivationError::RingMismatch);
        }
        Ok(Self {
            ring: Arc::clone(ring),
            hypersurface: None,
            coeffs,
        })
    }

    pub fn from_polys(ring: &Arc<PolyRing>, coeffs: Vec<Poly>) -> Result<Self> {
        Self::new(ring, coeffs.into_iter().map(RationalFn::from).collect())
    }

    /// The coordinate vector field `∂/∂x_var`.
    pub fn partial(ring: &Arc<PolyRing>, var: usize) -> Self {
        let coeffs = (0..ring.nvars())
            .map(|i| RationalFn::from(if i == var { Poly::one(ring) } else { Poly::zero(ring) }))
            .collect();
        Self {
            ring: Arc::clone(ring),
            hypersurface: None,
            coeffs,
        }
    }

    /// Restricts an ambient polynomial vector field to a hypersurface,
    /// checking that it preserves the relation ideal.
    pub fn on_hypersurface(h: &Arc<HypersurfaceRing>, coeffs: Vec<Poly>) -> Result<Self> {
        let ring = Arc::clone(h.ambient());
        let ambient = Self::from_polys(&ring, coeffs)?;
        let g = h.relation();
        let dg = ambient.apply_poly(&g)?.into_poly().expect("polynomial coefficients");
        if !h.is_zero(&dg)? {
            return Err(DerivationError::NotTangent(g.to_string()));
        }
        let coeffs = ambient
            .coeffs
            .iter()
            .map(|c| Ok(RationalFn::from(h.reduce(c.as_poly().unwrap())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ring,
            hypersurface: Some(Arc::clone(h)),
            coeffs,
        })
    }

    /// Parses `f1*d/dx1 + ... + fn*d/dxn`.
    pub fn parse(ring: &Arc<PolyRing>, src: &str) -> Result<Self> {
        Self::from_polys(ring, parse_vector_field(ring, src)?)
    }

    pub fn parse_on(h: &Arc<HypersurfaceRing>, src: &str) -> Result<Self> {
        Self::on_hypersurface(h, parse_vector_field(h.ambient(), src)?)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn hypersurface(&self) -> Option<&Arc<HypersurfaceRing>> {
        self.hypersurface.as_ref()
    }

    pub fn coeffs(&self) -> &[RationalFn] {
        &self.coeffs
    }

    /// The value `D(x_i)`.
    pub fn coeff(&self, i: usize) -> &RationalFn {
        &self.coeffs[i]
    }

    pub fn poly_coeffs(&self) -> Option<Vec<Poly>> {
        self.coeffs.iter().map(|c| c.as_poly().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFn::is_zero)
    }

    /// The same vector field viewed on the ambient ring.
    pub fn ambient(&self) -> Derivation {
        Derivation {
            ring: Arc::clone(&self.ring),
            hypersurface: None,
            coeffs: self.coeffs.clone(),
        }
    }

    fn with_coeffs(&self, coeffs: Vec<RationalFn>) -> Result<Self> {
        let coeffs = match &self.hypersurface {
            Some(h) => coeffs
                .into_iter()
                .map(|c| self.reduce_in(h, c))
                .collect::<Result<Vec<_>>>()?,
            None => coeffs,
        };
        Ok(Derivation {
            ring: Arc::clone(&self.ring),
            hypersurface: self.hypersurface.clone(),
            coeffs,
        })
    }

    fn reduce_in(&self, h: &HypersurfaceRing, r: RationalFn) -> Result<RationalFn> {
        match r.as_poly() {
            Some(p) => Ok(RationalFn::from(h.reduce(p)?)),
            None => {
                let num = h.reduce(r.numerator())?;
                let den = h.reduce(r.denominator())?;
                Ok(RationalFn::new(num, den)?)
            }
        }
    }

    fn normalize(&self, r: RationalFn) -> Result<RationalFn> {
        match &self.hypersurface {
            Some(h) => self.reduce_in(h, r),
            None => Ok(r),
        }
    }

    fn check_ring(&self, ring: &Arc<PolyRing>) -> Result<()> {
        if &self.ring == ring {
            Ok(())
        } else {
            Err(DerivationError::RingMismatch)
        }
    }

    fn check_same(&self, other: &Derivation) -> Result<()> {
        if self.ring != other.ring || self.hypersurface != other.hypersurface {
            return Err(DerivationError::RingMismatch);
        }
        Ok(())
    }

    /// `D(a) = Σ D(x_i) ∂a/∂x_i`.
    pub fn apply_poly(&self, a: &Poly) -> Result<RationalFn> {
        self.check_ring(a.ring())?;
        let mut acc = RationalFn::zero(&self.ring);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let da = a.partial(i);
            if da.is_zero() {
                continue;
            }
            acc = acc.checked_add(&c.mul_poly(&da))?;
        }
        self.normalize(acc)
    }

    /// Quotient rule extension to rational functions.
    pub fn apply(&self, a: &RationalFn) -> Result<RationalFn> {
        if a.denominator().is_one() {
            return self.apply_poly(a.numerator());
        }
        let dn = self.apply_poly(a.numerator())?;
        let dd = self.apply_poly(a.denominator())?;
        let num = dn.mul_poly(a.denominator()).checked_sub(&dd.mul_poly(a.numerator()))?;
        let out = num.checked_div(&RationalFn::from(a.denominator().pow(2)))?;
        self.normalize(out)
    }

    /// `f·D`.
    pub fn scale(&self, f: &RationalFn) -> Result<Self> {
        self.check_ring(f.ring())?;
        if self.hypersurface.is_some() && f.as_poly().is_none() {
            return Err(DerivationError::NotPolynomial);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(f))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        self.with_coeffs(coeffs)
    }

    pub fn add(&self, other: &Derivation) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(b))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        self.with_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Derivation) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        self.with_coeffs(coeffs)
    }

    /// `[D1, D2](x_i) = D1(D2(x_i)) - D2(D1(x_i))`.
    pub fn lie_bracket(&self, other: &Derivation) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = (0..self.ring.nvars())
            .map(|i| {
                let a = self.apply(&other.coeffs[i])?;
                let b = other.apply(&self.coeffs[i])?;
                Ok(a.checked_sub(&b)?)
            })
            .collect::<Result<Vec<_>>>()?;
        self.with_coeffs(coeffs)
    }

    /// The `p`-th power `D^[p]`: its value on `x_i` is `D` applied `p` times to `x_i`.
    pub fn p_power(&self) -> Result<Self> {
        let p = self.p();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut v = c.clone();
                for _ in 1..p {
                    if v.is_zero() {
                        break;
                    }
                    v = self.apply(&v)?;
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        self.with_coeffs(coeffs)
    }

    /// Whether every 2×2 minor `D(x_i)E(x_j) - D(x_j)E(x_i)` vanishes, i.e.
    /// `E` is proportional to `D` over the function field.
    pub fn is_proportional(&self, other: &Derivation) -> Result<bool> {
        self.check_same(other)?;
        let n = self.ring.nvars();
        for i in 0..n {
            for j in i + 1..n {
                let minor = self.coeffs[i]
                    .checked_mul(&other.coeffs[j])?
                    .checked_sub(&self.coeffs[j].checked_mul(&other.coeffs[i])?)?;
                if !self.normalize(minor)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Tests `D^[p] ∧ D = 0`.
    pub fn is_p_closed(&self) -> Result<PClosedness> {
        let lead = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(DerivationError::ZeroDerivation)?;
        let p_power = self.p_power()?;
        let closed = self.is_proportional(&p_power)?;
        let witness = if closed {
            Some(p_power.coeffs[lead].checked_div(&self.coeffs[lead])?)
        } else {
            None
        };
        Ok(PClosedness {
            closed,
            p_power,
            witness,
        })
    }

    /// Whether the divisor `{g = 0}` is invariant: `D(g) ∈ (g)`. The test is
    /// carried out in the ambient polynomial ring.
    pub fn is_invariant(&self, g: &Poly) -> Result<bool> {
        if g.is_zero() {
            return Err(AlgebraError::DivisionByZero.into());
        }
        let dg = self.ambient().apply_poly(g)?;
        Ok(dg.numerator().principal_membership(g)?.member)
    }

    /// `Σ ω_i · D(x_i)` for the 1-form `ω = Σ ω_i dx_i`.
    pub fn pair(&self, omega: &[Poly]) -> Result<RationalFn> {
        if omega.len() != self.ring.nvars() {
            return Err(DerivationError::Arity {
                expected: self.ring.nvars(),
                found: omega.len(),
            });
        }
        let mut acc = RationalFn::zero(&self.ring);
        for (w, c) in omega.iter().zip(&self.coeffs) {
            self.check_ring(w.ring())?;
            acc = acc.checked_add(&c.mul_poly(w))?;
        }
        self.normalize(acc)
    }

    /// `ω(D) = 1` with `ω` and `D` regular. Every pullback of `D` along a
    /// proper birational chart then pairs to `1` with the regular form
    /// pulled back from `ω`, so it cannot vanish along any exceptional divisor.
    pub fn canonical_certificate(&self, omega: &[Poly]) -> Result<bool> {
        if self.poly_coeffs().is_none() {
            return Ok(false);
        }
        Ok(self.pair(omega)?.as_poly().is_some_and(Poly::is_one))
    }

    /// Divides out the common factor of the coefficients.
    pub fn saturate(&self) -> Result<FoliationChart> {
        saturate::saturate(self)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = &self.ring.vars()[i];
            let (text, negative) = match c.as_poly() {
                Some(p) if p.num_terms() == 1 => {
                    let s = p.to_string();
                    match s.strip_prefix('-') {
                        Some(rest) => (rest.to_string(), true),
                        None => (s, false),
                    }
                }
                Some(p) => (format!("({p})"), false),
                None if c.numerator().num_terms() == 1 && c.numerator().to_string().starts_with('-') => {
                    (format!("({})", -c.clone()), true)
                }
                None => (format!("({c})"), false),
            };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if text == "1" {
                write!(f, "d/d{var}")?;
            } else {
                write!(f, "{text}*d/d{var}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Compact serializable view of a derivation.
#[derive(Clone, Debug, Serialize)]
pub struct DerivationSummary {
    pub expression: String,
    pub characteristic: u64,
    pub variables: Vec<String>,
    pub hypersurface: Option<String>,
}

impl From<&Derivation> for DerivationSummary {
    fn from(d: &Derivation) -> Self {
        Self {
            expression: d.to_string(),
            characteristic: d.p(),
            variables: d.ring.vars().to_vec(),
            hypersurface: d.hypersurface.as_ref().map(|h| h.to_string()),
        }
    }
}
