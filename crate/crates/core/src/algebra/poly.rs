//! Sparse multivariate polynomials over `F_p`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], which is ordered
//! graded-lexicographically (total degree first, then lexicographic with the
//! first ring variable largest). Zero coefficients are never stored, so two
//! equal polynomials always have identical term maps.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::{AlgebraError, PrimeField};

pub type Exponents = SmallVec<[u32; 4]>;

/// An exponent vector `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Exponents);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exp;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn with_exponent(&self, index: usize, exp: u32) -> Monomial {
        let mut m = self.clone();
        m.0[index] = exp;
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial ring `F_p[x_1, ..., x_n]` with named variables.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S]) -> Result<Arc<Self>, AlgebraError> {
        Self::with_field(PrimeField::new(p)?, vars)
    }

    pub fn with_field<S: AsRef<str>>(
        field: PrimeField,
        vars: &[S],
    ) -> Result<Arc<Self>, AlgebraError> {
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            if !is_identifier(v) {
                return Err(AlgebraError::BadVariable(v.to_string()));
            }
            if names.iter().any(|n| n == v) {
                return Err(AlgebraError::DuplicateVariable(v.to_string()));
            }
            names.push(v.to_string());
        }
        Ok(Arc::new(Self { field, vars: names }))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A sparse polynomial with coefficients in `0..p`.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, u64>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

/// Outcome of testing `a ∈ (g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `a / g` when `a` is a member.
    pub quotient: Option<Poly>,
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), ring.field().from_i64(c))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: u64) -> Self {
        assert_eq!(m.0.len(), ring.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        let c = c % ring.p();
        if c != 0 {
            terms.insert(m, c);
        }
        Poly {
            ring: Arc::clone(ring),
            terms,
        }
    }

    /// The variable `x_index`.
    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index, 1), 1)
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Self, AlgebraError> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(ring: &Arc<PolyRing>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value() == Some(1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then_some(*c)
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Leading monomial and coefficient in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Order of vanishing along `{x_var = 0}`: the minimal exponent of `x_var`.
    pub fn order_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).min()
    }

    pub fn is_free_of(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m.0[var] == 0)
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        let f = self.ring.field();
        let c = c % f.p();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<(), AlgebraError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_ring(other)?;
        let f = self.field();
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), f.neg(*c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_ring(other)?;
        let f = self.field();
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = acc.entry(m1.mul(m2)).or_insert(0);
                *e = f.add(*e, f.mul(*c1, *c2));
            }
        }
        Ok(Poly {
            ring: Arc::clone(&self.ring),
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        })
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field();
        let c = c % f.p();
        if c == 0 {
            return Self::zero(&self.ring);
        }
        Poly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Poly {
        let f = self.field();
        let c = c % f.p();
        if c == 0 {
            return Self::zero(&self.ring);
        }
        Poly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(*a, c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(self.field().inv(c).expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> Poly {
        let f = self.field();
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let coeff = f.mul(*c, f.from_u64(e as u64));
            if coeff != 0 {
                out.add_term(m.with_exponent(var, e - 1), coeff);
            }
        }
        out
    }

    /// Evaluates at a point of `F_p^n`.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let f = self.field();
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(*c, |t, (e, x)| f.mul(t, f.pow(*x, *e as u64)));
            f.add(acc, v)
        })
    }

    /// Substitutes `x_i ↦ subs[i]`. The result lives in the ring of `subs`.
    pub fn compose(&self, subs: &[Poly]) -> Result<Poly, AlgebraError> {
        if subs.len() != self.ring.nvars() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ring.nvars(),
                found: subs.len(),
            });
        }
        let target = match subs.first() {
            Some(s) => Arc::clone(&s.ring),
            None => return Ok(self.clone()),
        };
        for s in subs {
            if !same_ring(&target, &s.ring) {
                return Err(AlgebraError::RingMismatch);
            }
        }
        if target.p() != self.ring.p() {
            return Err(AlgebraError::RingMismatch);
        }
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Self::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(&target, *c as i64);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| subs[i].pow(e as u64));
                term = &term * &*pw;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Poly, AlgebraError> {
        if target.p() != self.ring.p() {
            return Err(AlgebraError::RingMismatch);
        }
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, name) in self.ring.vars().iter().enumerate() {
            let j = target.var_index(name);
            if j.is_none() && !self.is_free_of(i) {
                return Err(AlgebraError::UnknownVariable(name.clone()));
            }
            map.push(j);
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(target.nvars());
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    e.0[*j] = m.0[i];
                }
            }
            out.add_term(e, *c);
        }
        Ok(out)
    }

    /// Coefficients as a univariate polynomial in `x_var`; entry `k` multiplies `x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            out[k].add_term(m.with_exponent(var, 0), *c);
        }
        out
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, m| g.gcd(m)))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            terms.insert(m.quotient_of(t)?, *c);
        }
        Some(Poly {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// `self -= c · m · g`, in place.
    fn sub_scaled(&mut self, c: u64, m: &Monomial, g: &Poly) {
        let f = self.field();
        for (t, a) in &g.terms {
            self.add_term(t.mul(m), f.neg(f.mul(c, *a)));
        }
    }

    /// Multivariate division by a single divisor in graded-lex order.
    ///
    /// A single nonzero polynomial is a Gröbner basis of the ideal it
    /// generates, so the remainder is zero exactly when `g` divides `self`.
    pub fn div_rem(&self, g: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        self.check_ring(g)?;
        let (lm, lc) = match g.leading() {
            Some((m, c)) => (m.clone(), c),
            None => return Err(AlgebraError::DivisionByZero),
        };
        let f = self.field();
        let inv = f.inv(lc).expect("nonzero leading coefficient");
        let mut rest = self.clone();
        let mut quot = Self::zero(&self.ring);
        let mut rem = Self::zero(&self.ring);
        while let Some((m, c)) = rest.leading() {
            let (m, c) = (m.clone(), c);
            match lm.quotient_of(&m) {
                Some(shift) => {
                    let coeff = f.mul(c, inv);
                    quot.add_term(shift.clone(), coeff);
                    rest.sub_scaled(coeff, &shift, g);
                }
                None => {
                    rest.terms.remove(&m);
                    rem.add_term(m, c);
                }
            }
        }
        Ok((quot, rem))
    }

    /// Exact quotient `self / g`, if `g` divides `self`.
    pub fn div_exact(&self, g: &Poly) -> Result<Option<Poly>, AlgebraError> {
        let (q, r) = self.div_rem(g)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Decides `self ∈ (g)`.
    pub fn principal_membership(&self, g: &Poly) -> Result<Membership, AlgebraError> {
        let q = self.div_exact(g)?;
        Ok(Membership {
            member: q.is_some(),
            quotient: q,
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = self.field();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let s = f.signed(*c);
            let neg = s < 0;
            let mag = s.unsigned_abs();
            match (k, neg) {
                (0, true) => write!(out, "-")?,
                (0, false) => {}
                (_, true) => write!(out, " - ")?,
                (_, false) => write!(out, " + ")?,
            }
            let mono = format_monomial(self.ring.vars(), m);
            match (mono.is_empty(), mag) {
                (true, _) => write!(out, "{mag}")?,
                (false, 1) => write!(out, "{mono}")?,
                (false, _) => write!(out, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

fn format_monomial(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| match e {
            1 => vars[i].clone(),
            _ => format!("{}^{}", vars[i], e),
        })
        .collect();
    parts.join("*")
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.field().neg(1))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
