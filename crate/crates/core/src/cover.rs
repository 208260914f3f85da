//! Cyclic covers `y^d = f` over an affine chart, their induced foliation and
//! their singular points over finite fields.
//!
//! When `p | d` the cover variable's derivative `∂_y` kills the relation, so
//! it descends to a p-closed vector field on the cover. The cover is then
//! singular exactly over the critical points of `f`, which are found by
//! brute-force enumeration over `F_q^n` and classified by the Hessian rank.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, CompiledPoly, FiniteField, HypersurfaceRing, Poly, PolyRing};
use crate::derivation::{Derivation, DerivationError, FoliationChart, Primitivity};

/// Largest number of points any enumeration may visit.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("the section must be nonzero")]
    ZeroSection,
    #[error("the cover degree must be positive")]
    ZeroDegree,
    #[error("the section involves the cover variable '{0}'")]
    SectionInvolvesCoverVariable(String),
    #[error("the induced foliation needs p | d (p = {p}, d = {d})")]
    DegreeNotDivisible { p: u64, d: u32 },
    #[error("F_{q} does not have characteristic {p}")]
    CharacteristicMismatch { q: u64, p: u64 },
    #[error("enumeration of {points} points exceeds the budget of {budget}")]
    BudgetExceeded { points: u64, budget: u64 },
    #[error("the point is not a critical point of the section")]
    NotCritical,
    #[error("{0}")]
    Unsupported(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

type Result<T> = std::result::Result<T, CoverError>;

/// The datum `(f, d)` of a cyclic cover `y^d = f` over the chart with
/// coordinates the variables of `f`; the characteristic is that of `f`.
#[derive(Clone, Debug)]
pub struct CoverDatum {
    section: Poly,
    degree: u32,
    cover_var: String,
}

/// The cover ring together with whether the cover is inseparable.
#[derive(Clone, Debug)]
pub struct Cover {
    pub ring: Arc<HypersurfaceRing>,
    /// `p | d`.
    pub inseparable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    /// Coordinates as element codes of `F_q`.
    pub location: Vec<u32>,
    pub hessian_rank: usize,
    pub nondegenerate: bool,
}

/// A change of variables over `F_{field_order}` taking the quadratic part
/// of the section to `uv`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormWitness {
    pub field_order: u64,
    pub matrix: [[u32; 2]; 2],
    /// The matrix entries rendered as field elements.
    pub rendered: [[String; 2]; 2],
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HessianClass {
    pub rank: usize,
    pub nondegenerate: bool,
    pub witness: Option<NormalFormWitness>,
}

impl CoverDatum {
    pub fn new(section: Poly, degree: u32, cover_var: &str) -> Result<Self> {
        if section.is_zero() {
            return Err(CoverError::ZeroSection);
        }
        if degree == 0 {
            return Err(CoverError::ZeroDegree);
        }
        if section.ring().var_index(cover_var).is_some() {
            return Err(CoverError::SectionInvolvesCoverVariable(cover_var.to_string()));
        }
        Ok(Self {
            section,
            degree,
            cover_var: cover_var.to_string(),
        })
    }

    pub fn section(&self) -> &Poly {
        &self.section
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn p(&self) -> u64 {
        self.section.ring().p()
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        self.section.ring()
    }

    pub fn cover_var(&self) -> &str {
        &self.cover_var
    }

    /// `k[x_1..x_n, y] / (y^d - f)`.
    pub fn build_cover(&self) -> Result<Cover> {
        let base = self.base();
        let mut vars = base.vars().to_vec();
        vars.push(self.cover_var.clone());
        let ambient = PolyRing::with_field(base.field(), &vars)?;
        let f = self.section.embed(&ambient)?;
        let ring = HypersurfaceRing::new(&ambient, self.degree, f)?;
        Ok(Cover {
            ring: Arc::new(ring),
            inseparable: (self.degree as u64).is_multiple_of(self.p()),
        })
    }

    /// The foliation generated by `∂_y` on the cover; requires `p | d`.
    pub fn induced_foliation(&self) -> Result<FoliationChart> {
        let cover = self.build_cover()?;
        if !cover.inseparable {
            return Err(CoverError::DegreeNotDivisible {
                p: self.p(),
                d: self.degree,
            });
        }
        let h = &cover.ring;
        let y = h.distinguished_var();
        let generator = Derivation::on_hypersurface(h, Derivation::partial(h.ambient(), y).poly_coeffs().unwrap())?;
        let closed = generator.is_p_closed()?;
        let invariant = generator.is_invariant(&h.relation())?;
        if !closed.closed || !invariant {
            return Err(CoverError::CrossCheck("∂_y is not a p-closed invariant generator".into()));
        }
        Ok(FoliationChart {
            generator,
            primitivity: Primitivity::Certified,
            removed_factor: Poly::one(h.ambient()),
        })
    }

    fn field_for(&self, q: u64) -> Result<FiniteField> {
        let field = FiniteField::new(q)?;
        if field.characteristic() != self.p() {
            return Err(CoverError::CharacteristicMismatch { q, p: self.p() });
        }
        Ok(field)
    }

    /// All points of `F_q^n` where `df` vanishes, in lexicographic order.
    pub fn critical_points(&self, q: u64, jobs: usize) -> Result<Vec<CriticalPoint>> {
        let field = self.field_for(q)?;
        let n = self.base().nvars();
        let total = budget(q, n)?;
        let f = &self.section;
        let grad: Vec<CompiledPoly> = (0..n).map(|i| CompiledPoly::new(&f.partial(i), &field)).collect();
        let hess: Vec<Vec<CompiledPoly>> = (0..n)
            .map(|i| (0..n).map(|j| CompiledPoly::new(&f.partial(i).partial(j), &field)).collect())
            .collect();
        let visit = |index: u64| {
            let pt = decode(index, q, n);
            if grad.iter().any(|g| g.eval(&field, &pt) != 0) {
                return None;
            }
            let rows: Vec<Vec<u32>> = hess
                .iter()
                .map(|row| row.iter().map(|h| h.eval(&field, &pt)).collect())
                .collect();
            let rank = field.rank(&rows);
            Some(CriticalPoint {
                location: pt,
                hessian_rank: rank,
                nondegenerate: rank == n,
            })
        };
        Ok(enumerate(total, jobs, visit))
    }

    /// Singular points of `{y^d = f}` in `F_q^(n+1)` by the Jacobian
    /// criterion, with the cover coordinate last, in lexicographic order.
    pub fn singular_points_of_cover(&self, q: u64, jobs: usize) -> Result<Vec<Vec<u32>>> {
        let field = self.field_for(q)?;
        let cover = self.build_cover()?;
        let g = cover.ring.relation();
        let n = g.ring().nvars();
        let total = budget(q, n)?;
        let rel = CompiledPoly::new(&g, &field);
        let grad: Vec<CompiledPoly> = (0..n).map(|i| CompiledPoly::new(&g.partial(i), &field)).collect();
        let visit = |index: u64| {
            let pt = decode(index, q, n);
            if rel.eval(&field, &pt) != 0 || grad.iter().any(|d| d.eval(&field, &pt) != 0) {
                return None;
            }
            Some(pt)
        };
        Ok(enumerate(total, jobs, visit))
    }

    /// Points `(x, y)` of the cover with `x` critical, which by the local
    /// computation for `p | d` is the singular locus.
    pub fn points_over_critical(&self, q: u64, jobs: usize) -> Result<Vec<Vec<u32>>> {
        let field = self.field_for(q)?;
        let fc = CompiledPoly::new(&self.section, &field);
        let mut out = Vec::new();
        for c in self.critical_points(q, jobs)? {
            let value = fc.eval(&field, &c.location);
            for y in field.elements() {
                if field.pow(y, self.degree as u64) == value {
                    let mut pt = c.location.clone();
                    pt.push(y);
                    out.push(pt);
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

fn budget(q: u64, n: usize) -> Result<u64> {
    match q.checked_pow(n as u32) {
        Some(points) if points <= ENUMERATION_BUDGET => Ok(points),
        Some(points) => Err(CoverError::BudgetExceeded {
            points,
            budget: ENUMERATION_BUDGET,
        }),
        None => Err(CoverError::BudgetExceeded {
            points: u64::MAX,
            budget: ENUMERATION_BUDGET,
        }),
    }
}

/// The point with index `index`; the first coordinate is the most significant digit.
fn decode(mut index: u64, q: u64, n: usize) -> Vec<u32> {
    let mut pt = vec![0u32; n];
    for slot in pt.iter_mut().rev() {
        *slot = (index % q) as u32;
        index /= q;
    }
    pt
}

/// Visits indices `0..total` in order; the output order does not depend on `jobs`.
fn enumerate<T, F>(total: u64, jobs: usize, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync,
{
    if jobs <= 1 {
        return (0..total).filter_map(visit).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| (0..total).into_par_iter().filter_map(&visit).collect()),
        Err(_) => (0..total).filter_map(visit).collect(),
    }
}

/// Classifies the critical point `pt` of `f` by the rank of its Hessian.
/// For two variables and full rank, also returns a linear change of
/// variables taking the quadratic part to `uv`, over `F_q` or `F_{q^2}`.
pub fn hessian_normal_form_check(f: &Poly, field: &FiniteField, pt: &[u32]) -> Result<HessianClass> {
    let p = f.ring().p();
    if p == 2 {
        return Err(CoverError::Unsupported(
            "quadratic normal forms in characteristic 2 are not classified".into(),
        ));
    }
    if field.characteristic() != p {
        return Err(CoverError::CharacteristicMismatch { q: field.order(), p });
    }
    let n = f.ring().nvars();
    if pt.len() != n {
        return Err(AlgebraError::ArityMismatch {
            expected: n,
            found: pt.len(),
        }
        .into());
    }
    for i in 0..n {
        if CompiledPoly::new(&f.partial(i), field).eval(field, pt) != 0 {
            return Err(CoverError::NotCritical);
        }
    }
    let h: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| CompiledPoly::new(&f.partial(i).partial(j), field).eval(field, pt))
                .collect()
        })
        .collect();
    let rank = field.rank(&h);
    let nondegenerate = rank == n;
    let witness = if n == 2 && nondegenerate {
        Some(binary_witness(field, &h)?)
    } else {
        None
    };
    Ok(HessianClass {
        rank,
        nondegenerate,
        witness,
    })
}

/// The quadratic part `a x^2 + b xy + c y^2` with `a = H11/2`, `b = H12`, `c = H22/2`.
fn binary_witness(field: &FiniteField, h: &[Vec<u32>]) -> Result<NormalFormWitness> {
    let half = field.inv(field.from_prime(2)).expect("p is odd");
    let (a, b, c) = (field.mul(h[0][0], half), h[0][1], field.mul(h[1][1], half));
    let four_ac = field.mul(field.from_prime(4), field.mul(a, c));
    let disc = field.sub(field.mul(b, b), four_ac);
    let (work, embed) = match field.sqrt(disc) {
        Some(_) => (field.clone(), (0..field.order() as u32).collect::<Vec<_>>()),
        None => {
            let big = FiniteField::new(field.order() * field.order())?;
            let embed = field.embedding_into(&big)?;
            (big, embed)
        }
    };
    let (a, b, c, disc) = (embed[a as usize], embed[b as usize], embed[c as usize], embed[disc as usize]);
    let f = &work;
    let root = f.sqrt(disc).expect("square in the working field");
    // two independent isotropic vectors r1, r2
    let (r1, r2) = if a == 0 {
        let binv = f.inv(b).expect("nondegenerate");
        ([1, 0], [f.neg(f.mul(c, binv)), 1])
    } else {
        let inv2a = f.inv(f.mul(f.from_prime(2), a)).unwrap();
        let t1 = f.mul(f.add(f.neg(b), root), inv2a);
        let t2 = f.mul(f.sub(f.neg(b), root), inv2a);
        ([t1, 1], [t2, 1])
    };
    let polar = |r: [u32; 2], s: [u32; 2]| {
        let two = f.from_prime(2);
        let t0 = f.mul(two, f.mul(a, f.mul(r[0], s[0])));
        let t1 = f.mul(b, f.add(f.mul(r[0], s[1]), f.mul(r[1], s[0])));
        let t2 = f.mul(two, f.mul(c, f.mul(r[1], s[1])));
        f.add(t0, f.add(t1, t2))
    };
    let quad = |r: [u32; 2]| {
        let t0 = f.mul(a, f.mul(r[0], r[0]));
        let t1 = f.mul(b, f.mul(r[0], r[1]));
        let t2 = f.mul(c, f.mul(r[1], r[1]));
        f.add(t0, f.add(t1, t2))
    };
    let scale = f.inv(polar(r1, r2)).expect("isotropic vectors of a nondegenerate form pair nontrivially");
    let col1 = [f.mul(r1[0], scale), f.mul(r1[1], scale)];
    let col2 = r2;
    let verified = quad(col1) == 0 && quad(col2) == 0 && polar(col1, col2) == 1;
    let matrix = [[col1[0], col2[0]], [col1[1], col2[1]]];
    let rendered = matrix.map(|row| row.map(|e| f.format(e)));
    Ok(NormalFormWitness {
        field_order: f.order(),
        matrix,
        rendered,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn datum(p: u64, vars: &[&str], f: &str, d: u32) -> CoverDatum {
        let r = PolyRing::new(p, vars).unwrap();
        CoverDatum::new(parse_poly(&r, f).unwrap(), d, "z").unwrap()
    }

    #[test]
    fn build_cover_examples() {
        let c = datum(2, &["x", "y"], "x*y", 2).build_cover().unwrap();
        assert_eq!(c.ring.to_string(), "z^2 - x*y");
        assert!(c.inseparable);
        let c = datum(5, &["x", "y"], "x", 3).build_cover().unwrap();
        assert!(!c.inseparable);
        let c = datum(3, &["x"], "x^2 + 1", 1).build_cover().unwrap();
        assert_eq!(c.ring.degree(), 1);
        let r = PolyRing::new(3, &["x", "z"]).unwrap();
        assert!(matches!(
            CoverDatum::new(Poly::var(&r, 1), 3, "z"),
            Err(CoverError::SectionInvolvesCoverVariable(_))
        ));
    }

    #[test]
    fn induced_foliation_examples() {
        for p in [2, 3, 5, 7] {
            let f = datum(p, &["x", "y"], "x*y", p as u32).induced_foliation().unwrap();
            assert_eq!(f.generator.to_string(), "d/dz");
            let f = datum(p, &["x", "y"], "x*y + y^3", 2 * p as u32).induced_foliation().unwrap();
            assert!(f.generator.is_p_closed().unwrap().closed);
        }
        let f = datum(2, &["x", "y"], "x^3 + y^3", 2).induced_foliation().unwrap();
        assert!(f.generator.is_p_closed().unwrap().closed);
        assert!(matches!(
            datum(5, &["x", "y"], "x", 3).induced_foliation(),
            Err(CoverError::DegreeNotDivisible { p: 5, d: 3 })
        ));
    }

    #[test]
    fn critical_point_examples() {
        let pts = datum(2, &["x", "y"], "x*y", 2).critical_points(2, 1).unwrap();
        assert_eq!(
            pts,
            vec![CriticalPoint {
                location: vec![0, 0],
                hessian_rank: 2,
                nondegenerate: true
            }]
        );
        for q in [3, 9, 27] {
            assert!(datum(3, &["x", "y"], "x", 3).critical_points(q, 1).unwrap().is_empty());
        }
        let pts = datum(5, &["x", "y"], "x^3 + y^3", 5).critical_points(5, 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].location, vec![0, 0]);
        assert_eq!(pts[0].hessian_rank, 0);
        assert!(!pts[0].nondegenerate);
    }

    #[test]
    fn singular_point_examples() {
        let c = datum(2, &["x", "y"], "x*y", 2);
        assert_eq!(c.singular_points_of_cover(2, 1).unwrap(), vec![vec![0, 0, 0]]);
        assert!(datum(3, &["x", "y"], "x", 3).singular_points_of_cover(9, 1).unwrap().is_empty());
        let c = datum(3, &["x", "y"], "x^2*y", 3);
        let sing = c.singular_points_of_cover(3, 1).unwrap();
        assert_eq!(sing, c.points_over_critical(3, 1).unwrap());
        // the critical locus of x^2 y is the line x = 0
        assert_eq!(sing.len(), 3);
    }

    #[test]
    fn parallel_enumeration_is_deterministic() {
        let c = datum(5, &["x", "y"], "x^2*y + y^3 - x", 5);
        assert_eq!(c.critical_points(25, 1).unwrap(), c.critical_points(25, 4).unwrap());
        assert_eq!(
            c.singular_points_of_cover(25, 1).unwrap(),
            c.singular_points_of_cover(25, 3).unwrap()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let c = datum(7, &["a", "b", "c", "d", "e", "f", "g", "h", "i"], "a*b", 7);
        assert!(matches!(
            c.critical_points(7, 1),
            Err(CoverError::BudgetExceeded { points: 40_353_607, .. })
        ));
        assert!(matches!(
            datum(2, &["x"], "x", 2).critical_points(3, 1),
            Err(CoverError::CharacteristicMismatch { q: 3, p: 2 })
        ));
    }

    #[test]
    fn hessian_examples() {
        for p in [3, 5, 7] {
            let r = PolyRing::new(p, &["x", "y"]).unwrap();
            let f = parse_poly(&r, "x*y").unwrap();
            let field = FiniteField::new(p).unwrap();
            let class = hessian_normal_form_check(&f, &field, &[0, 0]).unwrap();
            assert!(class.nondegenerate);
            let w = class.witness.unwrap();
            assert!(w.verified);
            assert_eq!(w.matrix, [[1, 0], [0, 1]]);
        }
        let r = PolyRing::new(5, &["x", "y"]).unwrap();
        let field = FiniteField::new(5).unwrap();
        let class = hessian_normal_form_check(&parse_poly(&r, "x^2 + y^2").unwrap(), &field, &[0, 0]).unwrap();
        let w = class.witness.unwrap();
        assert!(w.verified);
        assert_eq!(w.field_order, 5);
        let class = hessian_normal_form_check(&parse_poly(&r, "x^3 + y^3").unwrap(), &field, &[0, 0]).unwrap();
        assert!(!class.nondegenerate);
        let class = hessian_normal_form_check(&parse_poly(&r, "x^2*y").unwrap(), &field, &[0, 0]).unwrap();
        assert!(class.rank <= 1);
        assert!(matches!(
            hessian_normal_form_check(&parse_poly(&r, "x + y").unwrap(), &field, &[0, 0]),
            Err(CoverError::NotCritical)
        ));
        let r2 = PolyRing::new(2, &["x", "y"]).unwrap();
        assert!(matches!(
            hessian_normal_form_check(&parse_poly(&r2, "x*y").unwrap(), &FiniteField::new(2).unwrap(), &[0, 0]),
            Err(CoverError::Unsupported(_))
        ));
    }

    #[test]
    fn anisotropic_forms_split_over_the_quadratic_extension() {
        // x^2 + y^2 over F_3: -1 is not a square, so the witness lives in F_9
        let r = PolyRing::new(3, &["x", "y"]).unwrap();
        let field = FiniteField::new(3).unwrap();
        let class = hessian_normal_form_check(&parse_poly(&r, "x^2 + y^2").unwrap(), &field, &[0, 0]).unwrap();
        let w = class.witness.unwrap();
        assert_eq!(w.field_order, 9);
        assert!(w.verified);
    }
}
