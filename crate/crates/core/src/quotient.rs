//! Rings of constants of derivations, the degree of the induced purely
//! inseparable quotient, and a library of ramification checks.
//!
//! For a p-closed rank-one `D` the constants `ker D` form the coordinate ring
//! of the quotient. The kernel is computed degree-truncated as an exact linear
//! kernel over `F_p`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, Poly, PolyRing, RationalFn, TaggedSpan};
use crate::cone::{kf_square, ConeError};
use crate::derivation::{Derivation, DerivationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("degree bound {bound} is below p = {p}, so x^p is not visible")]
    BoundTooSmall { bound: u32, p: u64 },
    #[error("the derivation is not p-closed")]
    NotPClosed,
    #[error("the derivation must have polynomial coefficients")]
    NotPolynomial,
}

type Result<T> = std::result::Result<T, QuotientError>;

/// Constants of `D` among polynomials (in normal form, on a hypersurface) of
/// degree at most `degree_bound`.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsBasis {
    pub degree_bound: u32,
    /// Reduced echelon basis of the kernel.
    #[serde(serialize_with = "as_strings")]
    pub basis: Vec<Poly>,
    /// Algebra generators, chosen greedily by degree.
    #[serde(serialize_with = "as_strings")]
    pub generators: Vec<Poly>,
}

fn as_strings<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Poly::to_string))
}

impl ConstantsBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, a: &Poly) -> bool {
        let mut span = TaggedSpan::new();
        for b in &self.basis {
            span.insert(b.clone(), b.clone());
        }
        span.contains(a)
    }
}

/// `[K : K^D]`, certified or left open at the given bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeEstimate {
    Exact(u64),
    Undetermined,
}

/// Exponent vectors of total degree at most `bound`, with the last
/// exponent below `last_cap` when given.
pub fn monomials_up_to(n: usize, bound: u32, last_cap: Option<u32>) -> Vec<Monomial> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, cap: Option<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i == n {
            out.push(Monomial::from_exponents(cur));
            return;
        }
        let max = match cap {
            Some(c) if i == n - 1 => left.min(c.saturating_sub(1)),
            _ => left,
        };
        for e in 0..=max {
            cur[i] = e;
            go(i + 1, left - e, cur, cap, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, bound, &mut vec![0; n], last_cap, &mut out);
    out.sort();
    out
}

fn reducer(d: &Derivation) -> impl Fn(Poly) -> Result<Poly> + '_ {
    move |a: Poly| match d.hypersurface() {
        Some(h) => Ok(h.reduce(&a)?),
        None => Ok(a),
    }
}

/// Exact kernel of `D` on polynomials of degree at most `bound`.
pub fn ring_of_constants(d: &Derivation, bound: u32) -> Result<ConstantsBasis> {
    if d.poly_coeffs().is_none() {
        return Err(QuotientError::NotPolynomial);
    }
    let p = d.p();
    if (bound as u64) < p {
        return Err(QuotientError::BoundTooSmall { bound, p });
    }
    let ring = d.ring();
    let cap = d.hypersurface().map(|h| h.degree());
    let mut images = TaggedSpan::new();
    let mut kernel = TaggedSpan::new();
    for m in monomials_up_to(ring.nvars(), bound, cap) {
        let mono = Poly::monomial(ring, m, 1);
        let image = d.apply_poly(&mono)?.into_poly().expect("polynomial coefficients");
        let (rem, tag) = images.insert(image, mono);
        if rem.is_zero() {
            kernel.insert(tag.clone(), tag);
        }
    }
    let mut basis: Vec<Poly> = kernel.basis().cloned().collect();
    basis.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.leading().cmp(&b.leading())));
    let generators = greedy_generators(d, &basis, bound)?;
    Ok(ConstantsBasis {
        degree_bound: bound,
        basis,
        generators,
    })
}

fn greedy_generators(d: &Derivation, basis: &[Poly], bound: u32) -> Result<Vec<Poly>> {
    let reduce = reducer(d);
    let max_exponent = bound * d.hypersurface().map_or(1, |h| h.degree()).max(1);
    let mut generators: Vec<Poly> = Vec::new();
    let mut span = subalgebra_span(d.ring(), &generators, bound, max_exponent, &reduce)?;
    for b in basis {
        if b.is_constant() || span.contains(b) {
            continue;
        }
        generators.push(b.clone());
        span = subalgebra_span(d.ring(), &generators, bound, max_exponent, &reduce)?;
    }
    Ok(generators)
}

/// Span of all products of `generators` of degree at most `bound`.
fn subalgebra_span(
    ring: &Arc<PolyRing>,
    generators: &[Poly],
    bound: u32,
    max_exponent: u32,
    reduce: &impl Fn(Poly) -> Result<Poly>,
) -> Result<TaggedSpan> {
    let mut span = TaggedSpan::new();
    let one = Poly::one(ring);
    span.insert(one.clone(), one.clone());
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::from([(vec![0u32; generators.len()], one)]);
    while let Some((exps, prod)) = queue.pop_front() {
        for (k, g) in generators.iter().enumerate() {
            let mut next = exps.clone();
            next[k] += 1;
            if next.iter().sum::<u32>() > max_exponent || !seen.insert(next.clone()) {
                continue;
            }
            let q = reduce(&prod * g)?;
            if q.total_degree().is_some_and(|deg| deg > bound) {
                continue;
            }
            span.insert(q.clone(), q.clone());
            queue.push_back((next, q));
        }
    }
    Ok(span)
}

/// `[K : K^D]` for a p-closed rank-one `D ≠ 0`.
///
/// With `x_j` such that `D(x_j) ≠ 0`, `x_j` is purely inseparable of degree
/// `p` over `K^D`. The degree is certified to be exactly `p` once each other
/// coordinate satisfies `a·x_i = Σ_{k<p} b_k x_j^k` with constants `a ≠ 0`
/// and `b_k` of degree at most `bound`, so that `K = K^D(x_j)`.
pub fn inseparable_degree(d: &Derivation, bound: u32) -> Result<DegreeEstimate> {
    if !d.is_p_closed()?.closed {
        return Err(QuotientError::NotPClosed);
    }
    let constants = ring_of_constants(d, bound)?;
    let ring = d.ring();
    let p = d.p();
    let reduce = reducer(d);
    let j = (0..ring.nvars())
        .find(|&i| !d.coeff(i).is_zero())
        .expect("p-closed derivations are nonzero");
    let xj = Poly::var(ring, j);
    // x_j^p is a constant; confirm it lies in the computed kernel
    if !constants.contains(&reduce(xj.pow(p))?) {
        return Ok(DegreeEstimate::Undetermined);
    }
    let tags = PolyRing::with_field(ring.field(), &["e"])?;
    for i in 0..ring.nvars() {
        // coordinates killed by D are constants themselves
        if i == j || d.coeff(i).is_zero() {
            continue;
        }
        let xi = Poly::var(ring, i);
        // span of b_k x_j^k, then look for a dependency among the c_l x_i modulo it
        let mut rhs = TaggedSpan::new();
        for c in &constants.basis {
            let mut power = Poly::one(ring);
            for _ in 0..p {
                let v = reduce(c * &power)?;
                rhs.insert(v.clone(), v);
                power = &power * &xj;
            }
        }
        let mut lhs = TaggedSpan::new();
        let mut found = false;
        for (l, c) in constants.basis.iter().enumerate() {
            let v = rhs.reduce_vector(reduce(c * &xi)?);
            let tag = Poly::monomial(&tags, Monomial::var(1, 0, l as u32), 1);
            let (rem, _) = lhs.insert(v, tag);
            if rem.is_zero() {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(DegreeEstimate::Undetermined);
        }
    }
    Ok(DegreeEstimate::Exact(p))
}

/// A case of the ramification formula `π*K_{X/F} - K_X = (p - 1) K_F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RamificationCase {
    /// `X = P^1`, `F = T_X`, `π` the Frobenius.
    ProjectiveLineFrobenius { p: u64 },
    /// `X = {z^p = f} ⊂ A^3` with `F = ⟨∂_z⟩`; the quotient is the plane.
    AffineCover { p: u64, section: String },
    /// The cover of an abelian surface branched along a section of
    /// `L^{⊗pm}` with `L² = l_square`.
    FanoCover { p: u64, l_square: i64, m: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationCheck {
    pub case: String,
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
    pub detail: String,
}

pub fn verify_ramification(case: &RamificationCase) -> Result<RamificationCheck> {
    match case {
        RamificationCase::ProjectiveLineFrobenius { p } => projective_line(*p),
        RamificationCase::AffineCover { p, section } => affine_cover(*p, section),
        RamificationCase::FanoCover { p, l_square, m } => fano_cover(*p, *l_square, *m),
    }
}

/// Degree of `K` on `P^1`: `dx` is regular on the affine chart, and at
/// infinity `x = 1/u` gives `dx = d(1/u)/du · du`.
fn canonical_degree_p1(p: u64) -> Result<i64> {
    let r = PolyRing::new(p, &["u"])?;
    let x = RationalFn::new(Poly::one(&r), Poly::var(&r, 0))?;
    Ok(x.partial(0).order_in(0).expect("nonzero"))
}

/// Degree of `T` on `P^1`: `∂_x` is nonvanishing on the affine chart, and at
/// infinity it equals `∂_x(u)·∂_u` with `u = 1/x`.
fn tangent_degree_p1(p: u64) -> Result<i64> {
    let r = PolyRing::new(p, &["x"])?;
    let dx = Derivation::partial(&r, 0);
    let u = RationalFn::new(Poly::one(&r), Poly::var(&r, 0))?;
    let coefficient = dx.apply(&u)?;
    // order at infinity of a rational function of x
    let deg = |a: &Poly| a.total_degree().expect("nonzero") as i64;
    Ok(deg(coefficient.denominator()) - deg(coefficient.numerator()))
}

fn projective_line(p: u64) -> Result<RamificationCheck> {
    let k_x = canonical_degree_p1(p)?;
    let k_f = -tangent_degree_p1(p)?;
    // the quotient by T_X is again P^1, reached by a map of degree [K : K^D]
    let r = PolyRing::new(p, &["x"])?;
    let degree = match inseparable_degree(&Derivation::partial(&r, 0), p as u32)? {
        DegreeEstimate::Exact(d) => d as i64,
        DegreeEstimate::Undetermined => {
            return Ok(RamificationCheck {
                case: format!("projective line, Frobenius, p = {p}"),
                lhs: 0,
                rhs: 0,
                equal: false,
                detail: "quotient degree undetermined".into(),
            })
        }
    };
    let k_quotient = canonical_degree_p1(p)?;
    let lhs = degree * k_quotient - k_x;
    let rhs = (p as i64 - 1) * k_f;
    Ok(RamificationCheck {
        case: format!("projective line, Frobenius, p = {p}"),
        lhs,
        rhs,
        equal: lhs == rhs,
        detail: format!("deg π = {degree}, deg K_X = {k_x}, deg K_Y = {k_quotient}, deg K_F = {k_f}"),
    })
}

/// Every class is trivial: the quotient is the plane with `dx∧dy`, `X` is a
/// hypersurface with trivial dualizing sheaf, and `dz(∂_z) = 1` trivializes `K_F`.
fn affine_cover(p: u64, section: &str) -> Result<RamificationCheck> {
    let base = PolyRing::new(p, &["x", "y"])?;
    let f = crate::algebra::parse_poly(&base, section).map_err(AlgebraError::from)?;
    let mut vars = base.vars().to_vec();
    vars.push("z".into());
    let ambient = PolyRing::with_field(base.field(), &vars)?;
    let h = Arc::new(crate::algebra::HypersurfaceRing::new(&ambient, p as u32, f.embed(&ambient)?)?);
    let dz = Derivation::parse_on(&h, "d/dz")?;
    let omega = [Poly::zero(&ambient), Poly::zero(&ambient), Poly::one(&ambient)];
    let pairing = dz.pair(&omega)?;
    let k_f = if pairing.as_poly().is_some_and(|a| a.is_constant() && !a.is_zero()) {
        0
    } else {
        return Ok(RamificationCheck {
            case: format!("affine cover z^{p} = {section}"),
            lhs: 0,
            rhs: 0,
            equal: false,
            detail: "dz(∂_z) is not a unit".into(),
        });
    };
    let constants = ring_of_constants(&dz, p as u32)?;
    let quotient_is_plane = constants.contains(&Poly::var(&ambient, 0)) && constants.contains(&Poly::var(&ambient, 1));
    // orders of the generating forms along every divisor are 0
    let (k_x, k_y) = (0i64, 0i64);
    let lhs = k_y - k_x;
    let rhs = (p as i64 - 1) * k_f;
    Ok(RamificationCheck {
        case: format!("affine cover z^{p} = {section}"),
        lhs,
        rhs,
        equal: lhs == rhs && quotient_is_plane,
        detail: format!("x, y are constants: {quotient_is_plane}; dz(∂_z) = {pairing}"),
    })
}

/// Classes are multiples of `H = π*L` with `H² = p·L²`. The cyclic cover
/// formula gives `K_X = π*(K_Y + (p-1)mL)` with `K_Y ≡ 0`, while the
/// foliation has `K_F = -mH`. Both sides are intersected with `H`.
fn fano_cover(p: u64, l_square: i64, m: i64) -> Result<RamificationCheck> {
    let pi = p as i64;
    let h_square = pi * l_square;
    let k_x = (pi - 1) * m;
    let k_y = 0;
    let k_f = -m;
    let lhs = (k_y - k_x) * h_square;
    let rhs = (pi - 1) * k_f * h_square;
    let kf2 = k_f * k_f * h_square;
    let expected = kf_square(l_square, p, m)?;
    Ok(RamificationCheck {
        case: format!("Fano cover, p = {p}, L² = {l_square}, m = {m}"),
        lhs,
        rhs,
        equal: lhs == rhs && kf2 == expected,
        detail: format!("K_F² = {kf2} (projection formula gives {expected})"),
    })
}
