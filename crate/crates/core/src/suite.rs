//! The worked-example suite: every reference computation and property
//! family, each reported as a pass/fail certificate.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{parse_poly, FiniteField, HypersurfaceRing, Poly, PolyRing};
use crate::birational::{
    canonical_discrepancy, foliation_discrepancy, weighted_blowup_chart, DifferentialForm, Tower, TowerStep,
};
use crate::cone::{
    boundary_rays_rank2, kf_square, polyhedrality_check, pushforward_inseparable, Boundary, Lattice,
};
use crate::cover::{hessian_normal_form_check, CoverDatum};
use crate::derivation::Derivation;
use crate::quotient::{inseparable_degree, ring_of_constants, verify_ramification, DegreeEstimate, RamificationCase};
use crate::sample::{random_derivation, random_nonzero_poly, random_section};

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub name: String,
    /// The identity or formula being checked.
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

/// Parameters of a suite run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random cases per characteristic for each property family.
    pub property_cases: usize,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20240611,
            property_cases: 500,
            jobs: 1,
        }
    }
}

type Check = Box<dyn Fn(&SuiteConfig) -> (bool, String) + Send + Sync>;

fn check(name: &str, anchor: &str, f: impl Fn(&SuiteConfig) -> (bool, String) + Send + Sync + 'static) -> (String, String, Check) {
    (name.to_string(), anchor.to_string(), Box::new(f))
}

/// Runs every check; the order of the output is fixed.
pub fn run(config: &SuiteConfig) -> Vec<Certificate> {
    let checks = all_checks();
    let eval = |(name, anchor, f): &(String, String, Check)| {
        let start = Instant::now();
        let (passed, detail) = f(config);
        Certificate {
            name: name.clone(),
            anchor: anchor.clone(),
            passed,
            detail,
            millis: start.elapsed().as_millis(),
        }
    };
    if config.jobs > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
            Ok(pool) => pool.install(|| checks.par_iter().map(eval).collect()),
            Err(_) => checks.iter().map(eval).collect(),
        }
    } else {
        checks.iter().map(eval).collect()
    }
}

fn all_checks() -> Vec<(String, String, Check)> {
    vec![
        check("cover foliations are p-closed", "(∂_y)^[p] ∧ ∂_y = 0, ∂_y(y^p - f) = 0", cover_foliations),
        check("weighted blow-up ledger", "K_Y = π*K_X + pE, K_F̃ = π*K_F", weighted_ledger),
        check("ordinary blow-up of ⟨∂_x⟩", "a(E, F) = 1", ordinary_blowup),
        check("cover singularities over critical points", "Sing(y^p = f) = {(x, y) : df(x) = 0}", cover_singularities),
        check("Hessian normal form", "quadratic part ≅ x_1 x_2", hessian_forms),
        check("ramification on the projective line", "π*K_{X/F} - K_X = (p - 1) K_F", ramification),
        check("Jacobson degree", "[K : K^D] = p", jacobson_degree),
        check("rank-2 boundary rays", "rational rays ⟺ 4B² - 4AC is a square", rank2_oracle),
        check("inseparable pushforward", "F^l_*[C] = p^l [C]", pushforward),
        check("round cone witnesses", "vᵀQv = 0, infinitely many extremal rays", round_cone),
        check("non-boundedness series", "K_F² = p m² L²", kf_series),
        check("Leibniz rule", "D(ab) = a D(b) + b D(a)", |c| property(c, "leibniz", prop_leibniz)),
        check("bracket antisymmetry", "[D, E] = -[E, D]", |c| property(c, "antisymmetry", prop_antisymmetry)),
        check("Jacobi identity", "[D,[E,F]] + [E,[F,D]] + [F,[D,E]] = 0", |c| property(c, "jacobi", prop_jacobi)),
        check("p-th power is a derivation", "D^[p](ab) = a D^[p](b) + b D^[p](a) = D^p(ab)", |c| {
            property(c, "p_power", prop_p_power)
        }),
        check("scaling invariance of p-closedness", "fD p-closed ⟺ D p-closed", |c| property(c, "scaling", prop_scaling)),
        check("Jacobson correction", "(fD)^[p] - f^p D^[p] ∧ D = 0", |c| property(c, "correction", prop_correction)),
        check("pullback functoriality", "(m1 ∘ m2)^* = m2^* ∘ m1^*", |c| property(c, "functorial", prop_functorial)),
        check("pairing preservation", "m^*ω(m^*v) = ω(v) ∘ m", |c| property(c, "pairing", prop_pairing)),
    ]
}

fn rng_for(seed: u64, tag: &str, p: u64) -> ChaCha8Rng {
    let mut h: u64 = seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    for b in tag.bytes() {
        h = h.rotate_left(5) ^ b as u64;
        h = h.wrapping_mul(0x100_0000_01B3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn plane(p: u64) -> Arc<PolyRing> {
    PolyRing::new(p, &["x", "y"]).expect("valid ring")
}

fn cover_foliations(c: &SuiteConfig) -> (bool, String) {
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        let base = plane(p);
        let mut rng = rng_for(c.seed, "cover-foliation", p);
        for _ in 0..10 {
            let f = random_section(&base, 4, &mut rng);
            let datum = CoverDatum::new(f.clone(), p as u32, "z").expect("valid datum");
            let ok = datum.induced_foliation().is_ok_and(|fol| {
                let h = datum.build_cover().unwrap().ring;
                fol.generator.is_p_closed().is_ok_and(|r| r.closed)
                    && fol.generator.is_invariant(&h.relation()).unwrap_or(false)
            });
            if !ok {
                return (false, format!("failed for p = {p}, f = {f}"));
            }
            checked += 1;
        }
    }
    (true, format!("{checked} sections"))
}

fn weighted_ledger(_: &SuiteConfig) -> (bool, String) {
    let mut parts = Vec::new();
    for p in [2u64, 3, 5] {
        let r = plane(p);
        let tower = Tower::from_steps(&r, &[TowerStep { weights: (1, p as u32), center: (0, 0) }]).unwrap();
        let fol = Derivation::partial(&r, 0).saturate().unwrap();
        let k = canonical_discrepancy(&tower).unwrap();
        let a = foliation_discrepancy(&tower, &fol).unwrap();
        if k != p as i64 || a != 0 {
            return (false, format!("p = {p}: canonical {k}, foliated {a}"));
        }
        parts.push(format!("p={p}: ({k}, {a})"));
    }
    (true, parts.join(", "))
}

fn ordinary_blowup(_: &SuiteConfig) -> (bool, String) {
    for p in [2u64, 3, 5, 7] {
        let r = plane(p);
        let tower = Tower::from_steps(&r, &[TowerStep { weights: (1, 1), center: (0, 0) }]).unwrap();
        let fol = Derivation::partial(&r, 0).saturate().unwrap();
        let a = foliation_discrepancy(&tower, &fol).unwrap();
        if a != 1 {
            return (false, format!("p = {p}: a = {a}"));
        }
    }
    (true, "a(E, F) = 1 for p ∈ {2, 3, 5, 7}".into())
}

fn cover_singularities(c: &SuiteConfig) -> (bool, String) {
    let mut total = 0;
    for q in [4u64, 8, 9, 25, 49] {
        let field = FiniteField::new(q).unwrap();
        let p = field.characteristic();
        let base = plane(p);
        let mut rng = rng_for(c.seed, "cover-singular", q);
        for _ in 0..20 {
            let f = random_section(&base, 4, &mut rng);
            let datum = CoverDatum::new(f.clone(), p as u32, "z").unwrap();
            let sing = datum.singular_points_of_cover(q, c.jobs).unwrap();
            let crit: BTreeSet<Vec<u32>> = datum
                .critical_points(q, c.jobs)
                .unwrap()
                .into_iter()
                .map(|cp| cp.location)
                .collect();
            let projected: Vec<Vec<u32>> = sing.iter().map(|pt| pt[..2].to_vec()).collect();
            let distinct: BTreeSet<Vec<u32>> = projected.iter().cloned().collect();
            if distinct.len() != projected.len() || distinct != crit {
                return (false, format!("q = {q}, f = {f}"));
            }
            total += 1;
        }
    }
    (true, format!("{total} sections, bijective projection"))
}

fn hessian_forms(_: &SuiteConfig) -> (bool, String) {
    for p in [3u64, 5, 7] {
        let r = plane(p);
        let f = parse_poly(&r, "x*y").unwrap();
        let field = FiniteField::new(p).unwrap();
        let class = hessian_normal_form_check(&f, &field, &[0, 0]).unwrap();
        if !class.nondegenerate || !class.witness.is_some_and(|w| w.verified) {
            return (false, format!("x*y at p = {p}"));
        }
    }
    let r = plane(5);
    let f = parse_poly(&r, "x^3 + y^3").unwrap();
    let class = hessian_normal_form_check(&f, &FiniteField::new(5).unwrap(), &[0, 0]).unwrap();
    if class.nondegenerate {
        return (false, "x^3 + y^3 classified nondegenerate".into());
    }
    (true, "xy nondegenerate with witness (p = 3, 5, 7); x³ + y³ degenerate (p = 5)".into())
}

fn ramification(_: &SuiteConfig) -> (bool, String) {
    let mut parts = Vec::new();
    for p in [2u64, 3, 5, 7, 11] {
        let r = verify_ramification(&RamificationCase::ProjectiveLineFrobenius { p }).unwrap();
        let expected = (-2 * p as i64 + 2, (p as i64 - 1) * -2);
        if !r.equal || (r.lhs, r.rhs) != expected {
            return (false, format!("p = {p}: {} vs {}", r.lhs, r.rhs));
        }
        parts.push(format!("{}", r.lhs));
    }
    (true, format!("both sides: {}", parts.join(", ")))
}

/// Monomials `x^a y^b z^{pc}` of degree at most `n`.
fn frobenius_monomial_count(p: u64, n: u64) -> u64 {
    let mut count = 0;
    for c in 0..=n / p {
        let rest = n - p * c;
        count += (rest + 1) * (rest + 2) / 2;
    }
    count
}

fn jacobson_degree(_: &SuiteConfig) -> (bool, String) {
    for p in [2u64, 3, 5] {
        let r = PolyRing::new(p, &["x", "y", "z"]).unwrap();
        let g = parse_poly(&r, &format!("z^{p} - x*y")).unwrap();
        let h = Arc::new(HypersurfaceRing::from_relation(&g).unwrap());
        let dz = Derivation::parse_on(&h, "d/dz").unwrap();
        if inseparable_degree(&dz, 2 * p as u32).unwrap() != DegreeEstimate::Exact(p) {
            return (false, format!("degree at p = {p}"));
        }
        let ambient = Derivation::partial(&r, 2);
        let dim = ring_of_constants(&ambient, 3 * p as u32).unwrap().dimension() as u64;
        let want = frobenius_monomial_count(p, 3 * p);
        if dim != want {
            return (false, format!("p = {p}: dimension {dim}, expected {want}"));
        }
    }
    (true, "degree p and binomial dimension for p ∈ {2, 3, 5}".into())
}

/// Whether `A x² + 2B xy + C y² = 0` has a nonzero integer solution with
/// entries bounded by `height`. Candidates come from floating-point roots and
/// are confirmed exactly.
pub fn null_vector_oracle(a: i64, b: i64, c: i64, height: i64) -> bool {
    if a == 0 || c == 0 {
        return true;
    }
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let disc = (b * b - a * c) as f64;
    if disc < 0.0 {
        return false;
    }
    let root = disc.sqrt();
    for y in 1..=height as i128 {
        for sign in [1.0, -1.0] {
            let x = (y as f64) * (-(b as f64) + sign * root) / a as f64;
            let base = x.round() as i128;
            for cand in [base - 1, base, base + 1] {
                if cand.abs() <= height as i128 && a * cand * cand + 2 * b * cand * y + c * y * y == 0 {
                    return true;
                }
            }
        }
    }
    false
}

fn rank2_oracle(_: &SuiteConfig) -> (bool, String) {
    let mut cases = 0;
    // entries bounded by 10, together with [[2a, b], [b, 2c]] for |a|, |b|, |c| ≤ 10
    let cube = || (-10..=10i64).flat_map(|a| (-10..=10).flat_map(move |b| (-10..=10).map(move |c| (a, b, c))));
    let forms: BTreeSet<(i64, i64, i64)> = cube()
        .chain(cube().map(|(a, b, c)| (2 * a, b, 2 * c)))
        .filter(|&(a, b, c)| a * c - b * b < 0)
        .collect();
    for (a, b, c) in forms {
        let l = Lattice::new(vec![vec![a, b], vec![b, c]]).unwrap();
        let report = boundary_rays_rank2(&l).unwrap();
        let rational = matches!(report.boundary, Boundary::Rational(_));
        if rational != null_vector_oracle(a, b, c, 10_000) {
            return (false, format!("Q = [[{a}, {b}], [{b}, {c}]]"));
        }
        cases += 1;
    }
    (true, format!("{cases} forms agree with the height-10⁴ search"))
}

fn pushforward(c: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(c.seed, "pushforward", 0);
    for _ in 0..200 {
        let v: Vec<i64> = (0..3).map(|_| rng.gen_range(-50..=50)).collect();
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let l = rng.gen_range(0..5u32);
        let w = pushforward_inseparable(&v, p, l).unwrap();
        let factor = (p as i64).pow(l);
        if w.iter().zip(&v).any(|(a, b)| *a != b * factor) {
            return (false, format!("{v:?}, p = {p}, l = {l}"));
        }
    }
    (true, "200 vectors scaled by p^l".into())
}

fn round_cone(_: &SuiteConfig) -> (bool, String) {
    let l = Lattice::diagonal(&[1, -1, -1]).unwrap();
    let report = polyhedrality_check(&l, 25, 100).unwrap();
    let distinct: BTreeSet<_> = report.witnesses.iter().collect();
    let null = report.witnesses.iter().all(|w| l.square(w) == Ok(0));
    let ok = !report.polyhedral && distinct.len() >= 25 && null;
    (ok, format!("{} distinct null witnesses", distinct.len()))
}

fn kf_series(_: &SuiteConfig) -> (bool, String) {
    for p in [2u64, 3] {
        let mut prev = 0;
        for m in 1..=10 {
            let k = kf_square(2, p, m).unwrap();
            if k != 2 * p as i64 * m * m || k <= prev {
                return (false, format!("p = {p}, m = {m}: {k}"));
            }
            prev = k;
        }
    }
    (true, "2pm² strictly increasing for m ≤ 10".into())
}

fn property(c: &SuiteConfig, tag: &str, f: fn(u64, &mut ChaCha8Rng) -> Result<(), String>) -> (bool, String) {
    for p in [2u64, 3, 5, 7] {
        let mut rng = rng_for(c.seed, tag, p);
        for i in 0..c.property_cases {
            if let Err(e) = f(p, &mut rng) {
                return (false, format!("p = {p}, case {i}: {e}"));
            }
        }
    }
    (true, format!("{} cases per characteristic, p ∈ {{2, 3, 5, 7}}", c.property_cases))
}

fn small_derivation(r: &Arc<PolyRing>, rng: &mut ChaCha8Rng) -> Derivation {
    random_derivation(r, 2, 3, rng)
}

fn small_poly(r: &Arc<PolyRing>, rng: &mut ChaCha8Rng) -> Poly {
    random_nonzero_poly(r, 3, 4, rng)
}

fn prop_leibniz(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let d = small_derivation(&r, rng);
    let (a, b) = (small_poly(&r, rng), small_poly(&r, rng));
    let lhs = d.apply_poly(&(&a * &b)).unwrap();
    let rhs = d.apply_poly(&b).unwrap().mul_poly(&a) + d.apply_poly(&a).unwrap().mul_poly(&b);
    (lhs == rhs).then_some(()).ok_or_else(|| format!("D = {d}, a = {a}, b = {b}"))
}

fn prop_antisymmetry(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let (d, e) = (small_derivation(&r, rng), small_derivation(&r, rng));
    let de = d.lie_bracket(&e).unwrap();
    let ed = e.lie_bracket(&d).unwrap();
    let ok = de.add(&ed).unwrap().is_zero() && d.lie_bracket(&d).unwrap().is_zero();
    ok.then_some(()).ok_or_else(|| format!("D = {d}, E = {e}"))
}

fn prop_jacobi(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let (d, e, f) = (small_derivation(&r, rng), small_derivation(&r, rng), small_derivation(&r, rng));
    let t1 = d.lie_bracket(&e.lie_bracket(&f).unwrap()).unwrap();
    let t2 = e.lie_bracket(&f.lie_bracket(&d).unwrap()).unwrap();
    let t3 = f.lie_bracket(&d.lie_bracket(&e).unwrap()).unwrap();
    let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
    sum.is_zero().then_some(()).ok_or_else(|| format!("D = {d}, E = {e}, F = {f}"))
}

fn prop_p_power(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let d = small_derivation(&r, rng);
    let dp = d.p_power().unwrap();
    let (a, b) = (small_poly(&r, rng), small_poly(&r, rng));
    let ab = &a * &b;
    let lhs = dp.apply_poly(&ab).unwrap();
    let rhs = dp.apply_poly(&b).unwrap().mul_poly(&a) + dp.apply_poly(&a).unwrap().mul_poly(&b);
    let mut iterated = crate::algebra::RationalFn::from(ab);
    for _ in 0..p {
        iterated = d.apply(&iterated).unwrap();
    }
    (lhs == rhs && lhs == iterated)
        .then_some(())
        .ok_or_else(|| format!("D = {d}, a = {a}, b = {b}"))
}

/// A p-closed field half of the time, a random one otherwise.
fn mixed_derivation(r: &Arc<PolyRing>, rng: &mut ChaCha8Rng) -> Derivation {
    if rng.gen_bool(0.5) {
        return small_derivation(r, rng);
    }
    let p = r.p();
    let (a, b) = (rng.gen_range(0..p) as i64, rng.gen_range(0..p) as i64);
    match rng.gen_range(0..3) {
        0 => Derivation::partial(r, rng.gen_range(0..2)),
        _ if a == 0 && b == 0 => Derivation::partial(r, 1),
        _ => Derivation::parse(r, &format!("{a}*x*d/dx + {b}*y*d/dy")).unwrap(),
    }
}

fn prop_scaling(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let d = mixed_derivation(&r, rng);
    let f = random_nonzero_poly(&r, 2, 2, rng);
    let fd = d.scale(&f.clone().into()).unwrap();
    let a = d.is_p_closed().unwrap().closed;
    let b = fd.is_p_closed().unwrap().closed;
    (a == b).then_some(()).ok_or_else(|| format!("D = {d}, f = {f}"))
}

fn prop_correction(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let d = mixed_derivation(&r, rng);
    let f = random_nonzero_poly(&r, 2, 2, rng);
    let fd = d.scale(&f.clone().into()).unwrap();
    let diff = fd
        .p_power()
        .unwrap()
        .sub(&d.p_power().unwrap().scale(&f.pow(p).into()).unwrap())
        .unwrap();
    d.is_proportional(&diff)
        .unwrap()
        .then_some(())
        .ok_or_else(|| format!("D = {d}, f = {f}"))
}

fn random_weights(p: u64, rng: &mut ChaCha8Rng) -> (u32, u32) {
    loop {
        let (a, b) = (rng.gen_range(1..=3u32), rng.gen_range(1..=p as u32 + 1));
        if gcd(a, b) == 1 {
            return if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prop_functorial(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let steps = [
        TowerStep { weights: random_weights(p, rng), center: (0, 0) },
        TowerStep {
            weights: random_weights(p, rng),
            center: (rng.gen_range(0..p as i64), 0),
        },
    ];
    let tower = Tower::from_steps(&r, &steps).unwrap();
    let (m1, m2) = (&tower.charts()[0], &tower.charts()[1]);
    let composite = tower.composite().unwrap();
    let d = small_derivation(&r, rng);
    let staged = m2.pullback_derivation(&m1.pullback_derivation(&d).unwrap()).unwrap();
    let direct = composite.pullback_derivation(&d).unwrap();
    let omega = DifferentialForm::one_form(&r, vec![small_poly(&r, rng), small_poly(&r, rng)]).unwrap();
    let staged_form = omega.pullback(m1).unwrap().pullback(m2).unwrap();
    let direct_form = omega.pullback(&composite).unwrap();
    let vol = DifferentialForm::volume(&r);
    let vol_ok = vol.pullback(m1).unwrap().pullback(m2).unwrap() == vol.pullback(&composite).unwrap();
    (staged == direct && staged_form == direct_form && vol_ok)
        .then_some(())
        .ok_or_else(|| format!("steps {steps:?}, D = {d}, ω = {omega}"))
}

fn prop_pairing(p: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = plane(p);
    let m = weighted_blowup_chart(&r, random_weights(p, rng)).unwrap();
    let v = small_derivation(&r, rng);
    let omega = DifferentialForm::one_form(&r, vec![small_poly(&r, rng), small_poly(&r, rng)]).unwrap();
    let lhs = omega.pullback(&m).unwrap().pair(&m.pullback_derivation(&v).unwrap()).unwrap();
    let rhs = m.pull_rational(&omega.pair(&v).unwrap()).unwrap();
    (lhs == rhs).then_some(()).ok_or_else(|| format!("m = {m}, v = {v}, ω = {omega}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        assert!(null_vector_oracle(0, 1, 0, 10));
        // 2x² + 10xy + 2y²: 4B² - 4AC = 84 is not a square
        assert!(!null_vector_oracle(2, 5, 2, 10_000));
        // 2x² + 5xy + 2y² = (2x + y)(x + 2y), odd middle coefficient
        assert!(null_vector_oracle(4, 5, 4, 10));
        // x² - y²
        assert!(null_vector_oracle(1, 0, -1, 10));
        assert_eq!(frobenius_monomial_count(2, 2), 6 + 1);
    }

    #[test]
    fn quick_run_passes() {
        let config = SuiteConfig {
            property_cases: 5,
            ..SuiteConfig::default()
        };
        for c in run(&config) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
