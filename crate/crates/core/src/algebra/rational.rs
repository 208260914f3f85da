//! Rational functions `num / den` over `F_p`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::{AlgebraError, Poly, PolyRing};

/// A quotient of polynomials with nonzero denominator.
///
/// Normal form: common monomial factors are cancelled, the denominator is
/// monic, and the denominator is dropped to `1` whenever it divides the
/// numerator. No multivariate gcd is taken, so equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if !super::poly::same_ring(num.ring(), den.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.ring());
        RationalFn { num: p, den }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self::from_poly(Poly::zero(ring))
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::from_poly(Poly::one(ring))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let ring = Arc::clone(num.ring());
        if num.is_zero() {
            return Self::zero(&ring);
        }
        let (mut num, mut den) = (num, den);
        let g = num.monomial_content().unwrap().gcd(&den.monomial_content().unwrap());
        if !g.is_one() {
            num = num.div_monomial(&g).unwrap();
            den = den.div_monomial(&g).unwrap();
        }
        if !den.is_constant() {
            if let Ok(Some(q)) = num.div_exact(&den) {
                return Self::from_poly(q);
            }
        }
        let lc = den.leading().unwrap().1;
        let inv = ring.field().inv(lc).unwrap();
        RationalFn {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, when the denominator is a unit.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn into_poly(self) -> Option<Poly> {
        self.den.is_one().then_some(self.num)
    }

    pub fn checked_add(&self, o: &RationalFn) -> Result<RationalFn, AlgebraError> {
        if self.den == o.den {
            return RationalFn::new(self.num.checked_add(&o.num)?, self.den.clone());
        }
        let num = self.num.checked_mul(&o.den)?.checked_add(&o.num.checked_mul(&self.den)?)?;
        RationalFn::new(num, self.den.checked_mul(&o.den)?)
    }

    pub fn checked_sub(&self, o: &RationalFn) -> Result<RationalFn, AlgebraError> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &RationalFn) -> Result<RationalFn, AlgebraError> {
        RationalFn::new(self.num.checked_mul(&o.num)?, self.den.checked_mul(&o.den)?)
    }

    pub fn checked_div(&self, o: &RationalFn) -> Result<RationalFn, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RationalFn::new(self.num.checked_mul(&o.den)?, self.den.checked_mul(&o.num)?)
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFn {
        RationalFn::normalized(&self.num * p, self.den.clone())
    }

    pub fn pow(&self, e: u64) -> RationalFn {
        RationalFn::normalized(self.num.pow(e), self.den.pow(e))
    }

    /// Formal partial derivative by the quotient rule.
    pub fn partial(&self, var: usize) -> RationalFn {
        if self.den.is_one() {
            return Self::from_poly(self.num.partial(var));
        }
        let num = &self.num.partial(var) * &self.den - &self.num * &self.den.partial(var);
        RationalFn::normalized(num, self.den.pow(2))
    }

    /// Substitutes polynomials for the variables.
    pub fn compose(&self, subs: &[Poly]) -> Result<RationalFn, AlgebraError> {
        let den = self.den.compose(subs)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RationalFn::new(self.num.compose(subs)?, den)
    }

    /// Valuation along `{x_var = 0}`; `None` for zero.
    pub fn order_in(&self, var: usize) -> Option<i64> {
        let n = self.num.order_in(var)? as i64;
        let d = self.den.order_in(var).unwrap() as i64;
        Some(n - d)
    }

    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<RationalFn, AlgebraError> {
        RationalFn::new(self.num.embed(target)?, self.den.embed(target)?)
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        if !super::poly::same_ring(self.ring(), other.ring()) {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl From<Poly> for RationalFn {
    fn from(p: Poly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

macro_rules! forward_rat_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RationalFn> for &RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: &RationalFn) -> RationalFn {
                self.$checked(rhs).expect("incompatible rational functions")
            }
        }
        impl $trait<RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_rat_binop!(Add, add, checked_add);
forward_rat_binop!(Sub, sub, checked_sub);
forward_rat_binop!(Mul, mul, checked_mul);
forward_rat_binop!(Div, div, checked_div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn cancels_monomials_and_exact_divisors() {
        let r = PolyRing::new(3, &["s", "t"]).unwrap();
        let q = RationalFn::new(
            parse_poly(&r, "s^2*t").unwrap(),
            parse_poly(&r, "2*s^3").unwrap(),
        )
        .unwrap();
        assert_eq!(q.numerator(), &parse_poly(&r, "2*t").unwrap());
        assert_eq!(q.denominator(), &parse_poly(&r, "s").unwrap());

        let e = RationalFn::new(
            parse_poly(&r, "s^2 - t^2").unwrap(),
            parse_poly(&r, "s + t").unwrap(),
        )
        .unwrap();
        assert_eq!(e.as_poly(), Some(&parse_poly(&r, "s - t").unwrap()));
    }

    #[test]
    fn equality_by_cross_multiplication() {
        let r = PolyRing::new(5, &["x", "y"]).unwrap();
        let a = RationalFn::new(
            parse_poly(&r, "(x+1)*(y+1)").unwrap(),
            parse_poly(&r, "(x+1)*(x+y+1)").unwrap(),
        )
        .unwrap();
        let b = RationalFn::new(
            parse_poly(&r, "y+1").unwrap(),
            parse_poly(&r, "x+y+1").unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_ne!(a, RationalFn::one(&r));
    }

    #[test]
    fn quotient_rule_and_orders() {
        let r = PolyRing::new(7, &["s", "t"]).unwrap();
        let inv_s = RationalFn::new(Poly::one(&r), Poly::var(&r, 0)).unwrap();
        let d = inv_s.partial(0);
        let expected = RationalFn::new(Poly::constant(&r, -1), parse_poly(&r, "s^2").unwrap()).unwrap();
        assert_eq!(d, expected);
        assert_eq!(d.order_in(0), Some(-2));
        assert_eq!(RationalFn::zero(&r).order_in(0), None);
    }

    #[test]
    fn zero_denominator_rejected() {
        let r = PolyRing::new(7, &["s"]).unwrap();
        assert!(RationalFn::new(Poly::one(&r), Poly::zero(&r)).is_err());
        assert!(RationalFn::one(&r).checked_div(&RationalFn::zero(&r)).is_err());
    }
}
