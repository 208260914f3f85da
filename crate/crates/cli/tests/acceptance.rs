//! Acceptance gate: one PASS/FAIL line per criterion, each checked against an
//! oracle written here rather than reused from the library.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pfol_core::algebra::{parse_poly, FiniteField, HypersurfaceRing, Poly, PolyRing, RationalFn};
use pfol_core::birational::{
    canonical_discrepancy, foliation_discrepancy, weighted_blowup_chart, DifferentialForm, Tower, TowerStep,
};
use pfol_core::cone::{
    boundary_rays_rank2, kf_square, polyhedrality_check, pushforward_inseparable, Boundary, Lattice,
};
use pfol_core::cover::{hessian_normal_form_check, CoverDatum};
use pfol_core::derivation::Derivation;
use pfol_core::quotient::{inseparable_degree, ring_of_constants, verify_ramification, DegreeEstimate, RamificationCase};
use pfol_core::sample::{random_derivation, random_nonzero_poly, random_section};

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn plane(p: u64) -> Arc<PolyRing> {
    PolyRing::new(p, &["x", "y"]).unwrap()
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + tag)
}

fn cover_foliations() -> Outcome {
    let mut r = rng(1);
    for p in [2u64, 3, 5, 7] {
        let base = plane(p);
        for _ in 0..10 {
            let f = random_section(&base, 4, &mut r);
            let datum = CoverDatum::new(f.clone(), p as u32, "z").map_err(|e| e.to_string())?;
            let fol = datum.induced_foliation().map_err(|e| e.to_string())?;
            let relation = datum.build_cover().map_err(|e| e.to_string())?.ring.relation();
            let closed = fol.generator.is_p_closed().map_err(|e| e.to_string())?.closed;
            let invariant = fol.generator.is_invariant(&relation).map_err(|e| e.to_string())?;
            // oracle: ∂_z kills f, and ∂_z(z^p) = p z^(p-1) = 0
            let direct = relation.partial(2).is_zero();
            ensure(closed && invariant && direct, || format!("p = {p}, f = {f}"))?;
        }
    }
    Ok("40 sections".into())
}

/// Order of vanishing along `s = 0` of a rational function.
fn order_s(f: &RationalFn) -> i64 {
    f.order_in(0).unwrap_or(i64::MAX)
}

fn weighted_ledger() -> Outcome {
    for p in [2u64, 3, 5] {
        let r = plane(p);
        let tower = Tower::from_steps(&r, &[TowerStep { weights: (1, p as u32), center: (0, 0) }])
            .map_err(|e| e.to_string())?;
        let fol = Derivation::partial(&r, 0).saturate().map_err(|e| e.to_string())?;
        let canonical = canonical_discrepancy(&tower).map_err(|e| e.to_string())?;
        let foliated = foliation_discrepancy(&tower, &fol).map_err(|e| e.to_string())?;
        // oracle: det J of (s, s^p t) is s^p, and ∂_x pulls back to ∂_s (∂_s of s^p t vanishes)
        let chart = &tower.charts()[0];
        let det = chart.jacobian_determinant().map_err(|e| e.to_string())?;
        let expected_det = parse_poly(chart.source(), &format!("s^{p}")).unwrap();
        let pulled = chart.pullback_derivation(&fol.generator).map_err(|e| e.to_string())?;
        let min_order = pulled.coeffs().iter().map(order_s).min().unwrap();
        ensure(
            canonical == p as i64 && foliated == 0 && det == expected_det && -min_order == 0,
            || format!("p = {p}: canonical {canonical}, foliated {foliated}, det {det}, pulled {pulled}"),
        )?;
    }
    Ok("(p, 0) for p ∈ {2, 3, 5}".into())
}

fn ordinary_blowup() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let r = plane(p);
        let tower = Tower::from_steps(&r, &[TowerStep { weights: (1, 1), center: (0, 0) }])
            .map_err(|e| e.to_string())?;
        let fol = Derivation::partial(&r, 0).saturate().map_err(|e| e.to_string())?;
        let a = foliation_discrepancy(&tower, &fol).map_err(|e| e.to_string())?;
        // oracle: J = [[1, 0], [t, s]] so J⁻¹(1, 0) = (1, -t/s)
        let chart = &tower.charts()[0];
        let src = chart.source();
        let t = Poly::var(src, 1);
        let s = Poly::var(src, 0);
        let expected = Derivation::new(
            src,
            vec![RationalFn::one(src), RationalFn::new(-&t, s).unwrap()],
        )
        .unwrap();
        let pulled = chart.pullback_derivation(&fol.generator).map_err(|e| e.to_string())?;
        let hand = -pulled.coeffs().iter().map(order_s).min().unwrap();
        ensure(pulled == expected && a == 1 && hand == 1, || format!("p = {p}: a = {a}, pulled {pulled}"))?;
    }
    Ok("a = 1 for p ∈ {2, 3, 5, 7}".into())
}

fn cover_singularities() -> Outcome {
    let mut total = 0;
    let mut points = 0;
    for q in [4u64, 8, 9, 25, 49] {
        let p = FiniteField::new(q).unwrap().characteristic();
        let base = plane(p);
        let mut r = rng(100 + q);
        for _ in 0..20 {
            let f = random_section(&base, 4, &mut r);
            let datum = CoverDatum::new(f.clone(), p as u32, "z").map_err(|e| e.to_string())?;
            let sing = datum.singular_points_of_cover(q, 4).map_err(|e| e.to_string())?;
            let crit: BTreeSet<Vec<u32>> = datum
                .critical_points(q, 4)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|c| c.location)
                .collect();
            let projected: Vec<Vec<u32>> = sing.iter().map(|pt| pt[..2].to_vec()).collect();
            let image: BTreeSet<Vec<u32>> = projected.iter().cloned().collect();
            ensure(image.len() == projected.len() && image == crit, || format!("q = {q}, f = {f}"))?;
            total += 1;
            points += sing.len();
        }
    }
    Ok(format!("{total} sections, {points} singular points, all bijective"))
}

/// Coefficients of `u², uv, v²` in `Q(m00 u + m01 v, m10 u + m11 v)` for
/// `Q = a x² + b xy + c y²` over `Z/p`.
fn substitute(p: u64, (a, b, c): (u64, u64, u64), m: [[u64; 2]; 2]) -> (u64, u64, u64) {
    let [[m00, m01], [m10, m11]] = m;
    let uu = a * m00 * m00 + b * m00 * m10 + c * m10 * m10;
    let uv = 2 * a * m00 * m01 + b * (m00 * m11 + m01 * m10) + 2 * c * m10 * m11;
    let vv = a * m01 * m01 + b * m01 * m11 + c * m11 * m11;
    (uu % p, uv % p, vv % p)
}

fn hessian_forms() -> Outcome {
    for p in [3u64, 5, 7] {
        let r = plane(p);
        let f = parse_poly(&r, "x*y").unwrap();
        let field = FiniteField::new(p).unwrap();
        let class = hessian_normal_form_check(&f, &field, &[0, 0]).map_err(|e| e.to_string())?;
        let w = class.witness.ok_or("no witness")?;
        ensure(w.field_order == p, || format!("witness over F_{}", w.field_order))?;
        let m = w.matrix.map(|row| row.map(u64::from));
        let (uu, uv, vv) = substitute(p, (0, 1, 0), m);
        ensure(class.nondegenerate && uu == 0 && vv == 0 && uv == 1, || {
            format!("p = {p}: witness {:?} gives ({uu}, {uv}, {vv})", w.matrix)
        })?;
    }
    let r = plane(5);
    let f = parse_poly(&r, "x^3 + y^3").unwrap();
    let class = hessian_normal_form_check(&f, &FiniteField::new(5).unwrap(), &[0, 0]).map_err(|e| e.to_string())?;
    ensure(!class.nondegenerate && class.rank == 0, || format!("x³ + y³: rank {}", class.rank))?;
    Ok("xy ≅ uv with verified witness for p ∈ {3, 5, 7}; x³ + y³ degenerate".into())
}

fn ramification() -> Outcome {
    let mut sides = Vec::new();
    for p in [2i64, 3, 5, 7, 11] {
        let check = verify_ramification(&RamificationCase::ProjectiveLineFrobenius { p: p as u64 })
            .map_err(|e| e.to_string())?;
        let (lhs, rhs) = (-2 * p + 2, (p - 1) * -2);
        ensure(lhs == rhs && check.equal && check.lhs == lhs && check.rhs == rhs, || {
            format!("p = {p}: {} vs {}", check.lhs, check.rhs)
        })?;
        sides.push(lhs.to_string());
    }
    Ok(format!("both sides {}", sides.join(", ")))
}

fn jacobson_degree() -> Outcome {
    for p in [2u64, 3, 5] {
        let r = PolyRing::new(p, &["x", "y", "z"]).unwrap();
        let g = parse_poly(&r, &format!("z^{p} - x*y")).unwrap();
        let h = Arc::new(HypersurfaceRing::from_relation(&g).map_err(|e| e.to_string())?);
        let dz = Derivation::parse_on(&h, "d/dz").map_err(|e| e.to_string())?;
        let degree = inseparable_degree(&dz, 2 * p as u32).map_err(|e| e.to_string())?;
        ensure(degree == DegreeEstimate::Exact(p), || format!("p = {p}: {degree:?}"))?;
        let n = 3 * p;
        let dim = ring_of_constants(&Derivation::partial(&r, 2), n as u32)
            .map_err(|e| e.to_string())?
            .dimension() as u64;
        // binomial oracle: Σ_c C(n - pc + 2, 2) over monomials x^a y^b z^{pc}
        let binomial: u64 = (0..=n / p).map(|c| (n - p * c + 2) * (n - p * c + 1) / 2).sum();
        ensure(dim == binomial, || format!("p = {p}: dimension {dim}, binomial {binomial}"))?;
    }
    Ok("degree p; constants dimension matches the binomial count".into())
}

/// Floating-point candidates for `A x² + 2B xy + C y² = 0`, confirmed exactly.
fn brute_force_null_vector(a: i64, b: i64, c: i64, height: i64) -> bool {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let exact = |x: i128, y: i128| a * x * x + 2 * b * x * y + c * y * y == 0;
    if exact(1, 0) {
        return true;
    }
    let disc = (b * b - a * c) as f64;
    if disc < 0.0 {
        return false;
    }
    for y in 1..=height as i128 {
        // roots in x of A x² + 2By x + C y²
        let roots: Vec<f64> = if a == 0 {
            if b == 0 { vec![] } else { vec![-(c as f64) * y as f64 / (2.0 * b as f64)] }
        } else {
            let s = disc.sqrt() * y as f64;
            vec![(-(b as f64) * y as f64 + s) / a as f64, (-(b as f64) * y as f64 - s) / a as f64]
        };
        for x in roots {
            let x0 = x.round() as i128;
            if (x0 - 1..=x0 + 1).any(|x| x.abs() <= height as i128 && exact(x, y)) {
                return true;
            }
        }
    }
    false
}

fn cone_arithmetic() -> Outcome {
    let mut forms = BTreeSet::new();
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            for c in -10i64..=10 {
                forms.insert((a, b, c));
                forms.insert((2 * a, b, 2 * c));
            }
        }
    }
    forms.retain(|&(a, b, c)| a * c - b * b < 0);
    let mut rational = 0;
    for &(a, b, c) in &forms {
        let l = Lattice::new(vec![vec![a, b], vec![b, c]]).map_err(|e| e.to_string())?;
        let report = boundary_rays_rank2(&l).map_err(|e| e.to_string())?;
        let verdict = matches!(report.boundary, Boundary::Rational(_));
        ensure(verdict == brute_force_null_vector(a, b, c, 10_000), || {
            format!("Q = [[{a}, {b}], [{b}, {c}]]: library says rational = {verdict}")
        })?;
        rational += usize::from(verdict);
    }

    let mut r = rng(7);
    for _ in 0..1000 {
        let v: Vec<i64> = (0..4).map(|_| r.gen_range(-1000..=1000)).collect();
        let p = [2u64, 3, 5, 7][r.gen_range(0..4)];
        let l = r.gen_range(0..6u32);
        let w = pushforward_inseparable(&v, p, l).map_err(|e| e.to_string())?;
        let k = (p as i64).pow(l);
        ensure(w.iter().zip(&v).all(|(x, y)| *x == k * y), || format!("{v:?} ↦ {w:?}"))?;
    }

    let l = Lattice::diagonal(&[1, -1, -1]).map_err(|e| e.to_string())?;
    let report = polyhedrality_check(&l, 25, 100).map_err(|e| e.to_string())?;
    let distinct: BTreeSet<&Vec<i64>> = report.witnesses.iter().collect();
    let null = report.witnesses.iter().all(|w| w[0] * w[0] - w[1] * w[1] - w[2] * w[2] == 0 && w[0] != 0);
    ensure(
        !report.polyhedral && report.boundary == Boundary::Round && distinct.len() >= 25 && null,
        || format!("{} distinct witnesses, all null: {null}", distinct.len()),
    )?;
    Ok(format!(
        "{} forms ({rational} rational), 1000 pushforwards, {} round-cone witnesses",
        forms.len(),
        distinct.len()
    ))
}

fn kf_series() -> Outcome {
    for p in [2u64, 3] {
        let mut previous = i64::MIN;
        for m in 1..=10i64 {
            let k = kf_square(2, p, m).map_err(|e| e.to_string())?;
            ensure(k == 2 * p as i64 * m * m && k > previous, || format!("p = {p}, m = {m}: {k}"))?;
            previous = k;
        }
    }
    Ok("2pm², strictly increasing".into())
}

const PROPERTY_CASES: usize = 500;

fn for_each_case(tag: u64, mut case: impl FnMut(u64, &mut ChaCha8Rng) -> Result<(), String>) -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let mut r = rng(1000 * tag + p);
        for i in 0..PROPERTY_CASES {
            case(p, &mut r).map_err(|e| format!("p = {p}, case {i}: {e}"))?;
        }
    }
    Ok(format!("{PROPERTY_CASES} cases per p ∈ {{2, 3, 5, 7}}"))
}

fn derivation_rule(d: &Derivation, a: &Poly, b: &Poly) -> bool {
    let lhs = d.apply_poly(&(a * b)).unwrap();
    let rhs = d.apply_poly(b).unwrap().mul_poly(a) + d.apply_poly(a).unwrap().mul_poly(b);
    lhs == rhs
}

fn random_field(p: u64, r: &mut ChaCha8Rng) -> Derivation {
    random_derivation(&plane(p), 2, 3, r)
}

/// Random, or one of the p-closed fields `∂_x`, `a x∂_x + b y∂_y`.
fn random_mixed_field(p: u64, r: &mut ChaCha8Rng) -> Derivation {
    let ring = plane(p);
    if r.gen_bool(0.5) {
        return random_derivation(&ring, 2, 2, r);
    }
    let (a, b) = (r.gen_range(0..p), r.gen_range(1..p));
    if r.gen_bool(0.3) {
        Derivation::partial(&ring, 0)
    } else {
        Derivation::parse(&ring, &format!("{a}*x*d/dx + {b}*y*d/dy")).unwrap()
    }
}

fn prop_leibniz() -> Outcome {
    for_each_case(1, |p, r| {
        let d = random_field(p, r);
        let (a, b) = (random_nonzero_poly(&plane(p), 3, 4, r), random_nonzero_poly(&plane(p), 3, 4, r));
        ensure(derivation_rule(&d, &a, &b), || format!("D = {d}, a = {a}, b = {b}"))
    })
}

fn prop_jacobi() -> Outcome {
    for_each_case(2, |p, r| {
        let (d, e, f) = (random_field(p, r), random_field(p, r), random_field(p, r));
        let br = |u: &Derivation, v: &Derivation| u.lie_bracket(v).unwrap();
        let sum = br(&d, &br(&e, &f)).add(&br(&e, &br(&f, &d))).unwrap().add(&br(&f, &br(&d, &e))).unwrap();
        ensure(sum.is_zero(), || format!("D = {d}, E = {e}, F = {f}"))
    })
}

fn prop_antisymmetry() -> Outcome {
    for_each_case(3, |p, r| {
        let (d, e) = (random_field(p, r), random_field(p, r));
        let sum = d.lie_bracket(&e).unwrap().add(&e.lie_bracket(&d).unwrap()).unwrap();
        ensure(sum.is_zero() && d.lie_bracket(&d).unwrap().is_zero(), || format!("D = {d}, E = {e}"))
    })
}

fn prop_p_power() -> Outcome {
    for_each_case(4, |p, r| {
        let d = random_field(p, r);
        let dp = d.p_power().unwrap();
        let ring = plane(p);
        let (a, b) = (random_nonzero_poly(&ring, 3, 3, r), random_nonzero_poly(&ring, 3, 3, r));
        // oracle: the p-fold composite applied to ab
        let mut iterated = RationalFn::from(&a * &b);
        for _ in 0..p {
            iterated = d.apply(&iterated).unwrap();
        }
        ensure(
            derivation_rule(&dp, &a, &b) && dp.apply_poly(&(&a * &b)).unwrap() == iterated,
            || format!("D = {d}, a = {a}, b = {b}"),
        )
    })
}

fn prop_scaling() -> Outcome {
    for_each_case(5, |p, r| {
        let d = random_mixed_field(p, r);
        let f = random_nonzero_poly(&plane(p), 2, 2, r);
        let fd = d.scale(&f.clone().into()).unwrap();
        ensure(
            d.is_p_closed().unwrap().closed == fd.is_p_closed().unwrap().closed,
            || format!("D = {d}, f = {f}"),
        )
    })
}

/// All 2×2 minors `u_i v_j - u_j v_i`, computed here.
fn minors_vanish(u: &Derivation, v: &Derivation) -> bool {
    let (a, b) = (u.coeffs(), v.coeffs());
    (0..a.len()).all(|i| {
        (i + 1..a.len()).all(|j| {
            a[i].checked_mul(&b[j]).unwrap().checked_sub(&a[j].checked_mul(&b[i]).unwrap()).unwrap().is_zero()
        })
    })
}

fn prop_correction() -> Outcome {
    for_each_case(6, |p, r| {
        let d = random_mixed_field(p, r);
        let f = random_nonzero_poly(&plane(p), 2, 2, r);
        let fd = d.scale(&f.clone().into()).unwrap();
        let correction = fd
            .p_power()
            .unwrap()
            .sub(&d.p_power().unwrap().scale(&f.pow(p).into()).unwrap())
            .unwrap();
        ensure(minors_vanish(&d, &correction), || format!("D = {d}, f = {f}"))
    })
}

fn coprime_pair(p: u64, r: &mut ChaCha8Rng) -> (u32, u32) {
    loop {
        let (a, b) = (r.gen_range(1..=3u32), r.gen_range(1..=p as u32 + 1));
        if (1..=a.min(b)).rev().find(|g| a % g == 0 && b % g == 0) == Some(1) {
            return if r.gen_bool(0.5) { (a, b) } else { (b, a) };
        }
    }
}

fn random_one_form(p: u64, r: &mut ChaCha8Rng) -> DifferentialForm {
    let ring = plane(p);
    DifferentialForm::one_form(&ring, vec![random_nonzero_poly(&ring, 3, 3, r), random_nonzero_poly(&ring, 3, 3, r)])
        .unwrap()
}

fn prop_functorial() -> Outcome {
    for_each_case(7, |p, r| {
        let ring = plane(p);
        let steps = [
            TowerStep { weights: coprime_pair(p, r), center: (0, 0) },
            TowerStep { weights: coprime_pair(p, r), center: (r.gen_range(0..p as i64), 0) },
        ];
        let tower = Tower::from_steps(&ring, &steps).unwrap();
        let (m1, m2) = (&tower.charts()[0], &tower.charts()[1]);
        let m = tower.composite().unwrap();
        let d = random_field(p, r);
        let w = random_one_form(p, r);
        let vol = DifferentialForm::volume(&ring);
        let ok = m2.pullback_derivation(&m1.pullback_derivation(&d).unwrap()).unwrap()
            == m.pullback_derivation(&d).unwrap()
            && w.pullback(m1).unwrap().pullback(m2).unwrap() == w.pullback(&m).unwrap()
            && vol.pullback(m1).unwrap().pullback(m2).unwrap() == vol.pullback(&m).unwrap();
        ensure(ok, || format!("{steps:?}, D = {d}, ω = {w}"))
    })
}

fn prop_pairing() -> Outcome {
    for_each_case(8, |p, r| {
        let m = weighted_blowup_chart(&plane(p), coprime_pair(p, r)).unwrap();
        let v = random_field(p, r);
        let w = random_one_form(p, r);
        let lhs = w.pullback(&m).unwrap().pair(&m.pullback_derivation(&v).unwrap()).unwrap();
        // oracle: ω(v) = Σ ω_i v_i, then composed with the chart
        let (o, c) = (w.coefficient(&[0]), w.coefficient(&[1]));
        let direct = v.coeff(0).mul_poly(&o) + v.coeff(1).mul_poly(&c);
        let rhs = m.pull_rational(&direct).unwrap();
        ensure(lhs == rhs, || format!("m = {m}, v = {v}, ω = {w}"))
    })
}

fn suite_command() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pfol"))
        .args(["paper-suite", "--jobs", "4", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("unparsable report: {e}"))?;
    let certs = report["certificates"].as_array().ok_or("no certificates")?;
    let failed: Vec<&str> = certs
        .iter()
        .filter(|c| c["passed"] != true)
        .filter_map(|c| c["name"].as_str())
        .collect();
    ensure(out.status.success() && failed.is_empty(), || {
        format!("exit {:?}, failed: {failed:?}", out.status.code())
    })?;
    Ok(format!("{} certificates, exit 0 in {:.1} s", certs.len(), elapsed.as_secs_f64()))
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "p-closedness of cover foliations", limit: secs(5), run: cover_foliations },
        Criterion { name: "weighted blow-up ledger", limit: secs(1), run: weighted_ledger },
        Criterion { name: "ordinary blow-up discrepancy", limit: secs(1), run: ordinary_blowup },
        Criterion { name: "cover-singularity correspondence", limit: secs(60), run: cover_singularities },
        Criterion { name: "Hessian normal form", limit: None, run: hessian_forms },
        Criterion { name: "ramification on the projective line", limit: None, run: ramification },
        Criterion { name: "Jacobson degree and constants dimension", limit: None, run: jacobson_degree },
        Criterion { name: "cone arithmetic", limit: secs(30), run: cone_arithmetic },
        Criterion { name: "non-boundedness series", limit: None, run: kf_series },
        Criterion { name: "property: Leibniz", limit: None, run: prop_leibniz },
        Criterion { name: "property: Jacobi", limit: None, run: prop_jacobi },
        Criterion { name: "property: antisymmetry", limit: None, run: prop_antisymmetry },
        Criterion { name: "property: p-power is a derivation", limit: None, run: prop_p_power },
        Criterion { name: "property: scaling invariance of p-closedness", limit: None, run: prop_scaling },
        Criterion { name: "property: Jacobson correction proportionality", limit: None, run: prop_correction },
        Criterion { name: "property: pullback functoriality", limit: None, run: prop_functorial },
        Criterion { name: "property: pairing preservation", limit: None, run: prop_pairing },
        Criterion { name: "worked-example suite command", limit: secs(180), run: suite_command },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!(
                "took {:.2} s, limit {:.0} s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            )),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {} ({detail}; {:.2} s)", c.name, elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("FAIL {} ({why})", c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
