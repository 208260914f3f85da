use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pfol_core::algebra::{identifiers, parse_poly, FiniteField, HypersurfaceRing, Poly, PolyRing, RationalFn};
use pfol_core::birational::{discrepancy_report, Tower, TowerStep};
use pfol_core::cone::{
    boundary_rays_rank2, is_square, kf_square, numeric_bpf_shell, polyhedrality_check, Boundary, Lattice,
};
use pfol_core::cover::{hessian_normal_form_check, CoverDatum};
use pfol_core::derivation::Derivation;
use pfol_core::quotient::{inseparable_degree, ring_of_constants, verify_ramification};
use pfol_core::sample::random_section;
use pfol_core::suite::{self, SuiteConfig};

use crate::config::{self, ConeConfig, CoverConfig, DiscrepancyConfig, QuotientConfig};
use crate::report::Report;

/// Polynomial ring and optional hypersurface shared by the derivation commands.
#[derive(Args, Debug)]
pub struct RingArgs {
    /// Characteristic.
    #[arg(short = 'p')]
    pub p: u64,
    /// Comma-separated variables; inferred from the expressions when absent.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Relation `w^d - f` cutting out the ambient hypersurface.
    #[arg(long)]
    pub hypersurface: Option<String>,
}

struct Setting {
    ring: Arc<PolyRing>,
    hypersurface: Option<Arc<HypersurfaceRing>>,
}

impl Setting {
    fn new(args: &RingArgs, exprs: &[&str]) -> Result<Self> {
        Self::build(args.p, args.vars.clone(), args.hypersurface.as_deref(), exprs)
    }

    fn build(p: u64, vars: Option<Vec<String>>, hypersurface: Option<&str>, exprs: &[&str]) -> Result<Self> {
        if let Some(vars) = vars {
            let ring = PolyRing::new(p, &vars)?;
            let hypersurface = hypersurface
                .map(|h| -> Result<_> { Ok(Arc::new(HypersurfaceRing::from_relation(&parse_poly(&ring, h)?)?)) })
                .transpose()?;
            return Ok(Self { ring, hypersurface });
        }
        let mut names = BTreeSet::new();
        for e in exprs.iter().chain(hypersurface.iter()) {
            names.extend(identifiers(e)?);
        }
        let names: Vec<String> = names.into_iter().collect();
        match hypersurface {
            None => Ok(Self {
                ring: PolyRing::new(p, &names)?,
                hypersurface: None,
            }),
            Some(h) => infer_hypersurface(p, &names, h),
        }
    }

    fn derivation(&self, src: &str) -> Result<Derivation> {
        Ok(match &self.hypersurface {
            Some(h) => Derivation::parse_on(h, src)?,
            None => Derivation::parse(&self.ring, src)?,
        })
    }

    fn echo(&self, report: &mut Report) {
        report.input("p", self.ring.p()).input("vars", self.ring.vars());
        if let Some(h) = &self.hypersurface {
            report.input("hypersurface", h.to_string());
        }
    }
}

/// Puts the distinguished variable last: the one of highest degree among
/// those for which the relation has the shape `w^d - f`.
fn infer_hypersurface(p: u64, names: &[String], relation: &str) -> Result<Setting> {
    let mut best: Option<(u32, Setting)> = None;
    for w in names {
        let mut order: Vec<String> = names.iter().filter(|n| *n != w).cloned().collect();
        order.push(w.clone());
        let ring = PolyRing::new(p, &order)?;
        let g = parse_poly(&ring, relation)?;
        if let Ok(h) = HypersurfaceRing::from_relation(&g) {
            if best.as_ref().is_none_or(|(d, _)| h.degree() >= *d) {
                let setting = Setting {
                    ring,
                    hypersurface: Some(Arc::new(h)),
                };
                best = Some((setting.hypersurface.as_ref().unwrap().degree(), setting));
            }
        }
    }
    best.map(|(_, s)| s)
        .ok_or_else(|| anyhow!("`{relation}` does not have the shape w^d - f for any variable w"))
}

fn nonzero(d: Derivation) -> Result<Derivation> {
    if d.is_zero() {
        bail!("the derivation is zero");
    }
    Ok(d)
}

pub fn pclosed(args: &RingArgs, expr: &str) -> Result<Report> {
    let s = Setting::new(args, &[expr])?;
    let d = nonzero(s.derivation(expr)?)?;
    let r = d.is_p_closed()?;
    let mut report = Report::new("pclosed");
    report.input("derivation", d.to_string());
    s.echo(&mut report);
    report
        .result("p_power", r.p_power.to_string())
        .result("closed", r.closed)
        .result("witness", r.witness.as_ref().map(RationalFn::to_string));
    match &r.witness {
        Some(g) => {
            let ok = d.scale(g)? == r.p_power;
            report.certify("proportionality witness", "D^[p] = g·D", ok);
        }
        None => {
            let ok = !d.is_proportional(&r.p_power)?;
            report.certify("nonvanishing minor", "D^[p] ∧ D ≠ 0", ok);
        }
    }
    Ok(report)
}

/// Each variable and the product of all of them.
fn probes(ring: &Arc<PolyRing>) -> Vec<Poly> {
    let mut out: Vec<Poly> = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
    out.push(out.iter().fold(Poly::one(ring), |acc, x| &acc * x));
    out
}

pub fn ppower(args: &RingArgs, expr: &str) -> Result<Report> {
    let s = Setting::new(args, &[expr])?;
    let d = nonzero(s.derivation(expr)?)?;
    let dp = d.p_power()?;
    let mut agrees = true;
    for a in probes(&s.ring) {
        let mut iterated = RationalFn::from(a.clone());
        for _ in 0..s.ring.p() {
            iterated = d.apply(&iterated)?;
        }
        agrees &= dp.apply_poly(&a)? == iterated;
    }
    let mut report = Report::new("ppower");
    report.input("derivation", d.to_string());
    s.echo(&mut report);
    report.result("p_power", dp.to_string());
    report.certify("p-fold composite on probes", "D^[p](a) = D^p(a)", agrees);
    Ok(report)
}

pub fn bracket(args: &RingArgs, lhs: &str, rhs: &str) -> Result<Report> {
    let s = Setting::new(args, &[lhs, rhs])?;
    let d = s.derivation(lhs)?;
    let e = s.derivation(rhs)?;
    let de = d.lie_bracket(&e)?;
    let antisymmetric = de.add(&e.lie_bracket(&d)?)?.is_zero();
    let mut commutator = true;
    for a in probes(&s.ring) {
        let a = RationalFn::from(a);
        let direct = d.apply(&e.apply(&a)?)?.checked_sub(&e.apply(&d.apply(&a)?)?)?;
        commutator &= de.apply(&a)? == direct;
    }
    let mut report = Report::new("bracket");
    report.input("lhs", d.to_string()).input("rhs", e.to_string());
    s.echo(&mut report);
    report.result("bracket", de.to_string());
    report
        .certify("antisymmetry", "[D, E] = -[E, D]", antisymmetric)
        .certify("commutator on probes", "[D, E](a) = D(E(a)) - E(D(a))", commutator);
    Ok(report)
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[arg(short = 'p')]
    pub p: Option<u64>,
    /// Size of the enumeration field `F_q`.
    #[arg(short = 'q')]
    pub q: Option<u64>,
    /// Degree `d` of the cover `y^d = f`.
    #[arg(short = 'd')]
    pub degree: Option<u32>,
    /// The section `f`.
    #[arg(short = 'f')]
    pub section: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    #[arg(long)]
    pub cover_var: Option<String>,
    /// Random sections sampled to estimate how often all critical points are nondegenerate.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct CriticalRow {
    location: Vec<String>,
    hessian_rank: usize,
    nondegenerate: bool,
    normal_form: Option<[[String; 2]; 2]>,
}

fn render_point(field: &FiniteField, pt: &[u32]) -> Vec<String> {
    pt.iter().map(|&c| field.format(c)).collect()
}

pub fn cover(args: &CoverArgs, jobs: usize) -> Result<Report> {
    let cfg: CoverConfig = config::load(args.config.as_deref())?;
    let p = args.p.or(cfg.p).context("missing characteristic (-p)")?;
    let q = args.q.or(cfg.q).unwrap_or(p);
    let degree = args.degree.or(cfg.degree).unwrap_or(p as u32);
    let section = args.section.clone().or(cfg.section).context("missing section (-f)")?;
    let cover_var = args.cover_var.clone().or(cfg.cover_variable).unwrap_or_else(|| "z".into());
    let vars = match args.vars.clone().or(cfg.variables) {
        Some(v) => v,
        None => identifiers(&section)?,
    };
    let ring = PolyRing::new(p, &vars)?;
    let f = parse_poly(&ring, &section)?;
    let datum = CoverDatum::new(f.clone(), degree, &cover_var)?;
    let field = FiniteField::new(q)?;

    let mut report = Report::new("cover");
    report
        .input("p", p)
        .input("q", q)
        .input("degree", degree)
        .input("section", f.to_string())
        .input("vars", ring.vars())
        .input("cover_var", &cover_var);

    let critical = datum.critical_points(q, jobs)?;
    let singular = datum.singular_points_of_cover(q, jobs)?;
    let mut rows = Vec::new();
    let mut witnesses_ok = true;
    for c in &critical {
        let class = if c.nondegenerate && p != 2 && ring.nvars() == 2 {
            hessian_normal_form_check(&f, &field, &c.location).ok()
        } else {
            None
        };
        let witness = class.and_then(|h| h.witness);
        witnesses_ok &= witness.as_ref().is_none_or(|w| w.verified);
        rows.push(CriticalRow {
            location: render_point(&field, &c.location),
            hessian_rank: c.hessian_rank,
            nondegenerate: c.nondegenerate,
            normal_form: witness.map(|w| w.rendered),
        });
    }
    let singular_rendered: Vec<Vec<String>> = singular.iter().map(|pt| render_point(&field, pt)).collect();
    report
        .result("critical_points", &rows)
        .result("singular_points", &singular_rendered)
        .result(
            "all_nondegenerate",
            critical.iter().all(|c| c.nondegenerate),
        );
    let cover = datum.build_cover()?;
    report.result("cover", cover.ring.to_string());
    if cover.inseparable {
        let over = datum.points_over_critical(q, jobs)?;
        report.certify(
            "singular locus over critical points",
            "Sing(y^d = f) = {(x, y) : df(x) = 0}",
            over == singular,
        );
        let fol = datum.induced_foliation()?;
        let closed = fol.generator.is_p_closed()?.closed;
        let invariant = fol.generator.is_invariant(&cover.ring.relation())?;
        report.result("foliation", fol.generator.to_string());
        report.certify("induced foliation", "(∂_y)^[p] ∧ ∂_y = 0, ∂_y(y^d - f) = 0", closed && invariant);
    }
    if !rows.iter().all(|r| r.normal_form.is_none()) {
        report.certify("normal form witnesses", "quadratic part ≅ x_1 x_2", witnesses_ok);
    }
    if let Some(samples) = args.samples.or(cfg.samples).filter(|&n| n > 0) {
        let seed = args.seed.or(cfg.seed).unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_degree = f.total_degree().unwrap_or(0).max(2);
        let mut generic = 0usize;
        for _ in 0..samples {
            let g = random_section(&ring, max_degree, &mut rng);
            let d = CoverDatum::new(g, degree, &cover_var)?;
            if d.critical_points(q, jobs)?.iter().all(|c| c.nondegenerate) {
                generic += 1;
            }
        }
        report.input("samples", samples).input("seed", seed);
        report.result(
            "genericity",
            serde_json::json!({
                "samples": samples,
                "only_nondegenerate": generic,
                "fraction": generic as f64 / samples as f64,
            }),
        );
    }
    Ok(report)
}

#[derive(Args, Debug)]
pub struct DiscrepancyArgs {
    #[arg(short = 'p')]
    pub p: Option<u64>,
    /// Weights `a,b` of a blow-up at the origin; repeat for a tower.
    #[arg(long, value_parser = parse_pair)]
    pub weights: Vec<(u32, u32)>,
    /// Generator of a rank-one foliation on the base.
    #[arg(long)]
    pub foliation: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

pub fn discrepancy(args: &DiscrepancyArgs) -> Result<Report> {
    let cfg: DiscrepancyConfig = config::load(args.config.as_deref())?;
    let p = args.p.or(cfg.p).context("missing characteristic (-p)")?;
    let vars = args
        .vars
        .clone()
        .or(cfg.variables)
        .unwrap_or_else(|| vec!["x".into(), "y".into()]);
    let steps: Vec<TowerStep> = if args.weights.is_empty() {
        cfg.steps.context("missing blow-up weights (--weights)")?
    } else {
        args.weights
            .iter()
            .map(|&weights| TowerStep { weights, center: (0, 0) })
            .collect()
    };
    let ring = PolyRing::new(p, &vars)?;
    let tower = Tower::from_steps(&ring, &steps)?;
    let foliation = args
        .foliation
        .clone()
        .or(cfg.foliation)
        .map(|src| -> Result<_> { Ok(nonzero(Derivation::parse(&ring, &src)?)?.saturate()?) })
        .transpose()?;

    let mut report = Report::new("discrepancy");
    report.input("p", p).input("vars", ring.vars()).input("steps", &steps);
    let ledger = discrepancy_report(&tower, foliation.as_ref())?;
    let charts: Vec<String> = tower.charts().iter().map(ToString::to_string).collect();
    report.result("charts", &charts).result("ledger", &ledger);
    if let [step] = steps.as_slice() {
        let e1 = &ledger["E1"];
        report
            .result("canonical", e1.canonical)
            .result("foliated", e1.foliated);
        if step.center == (0, 0) {
            let (a, b) = step.weights;
            report.certify(
                "canonical discrepancy of a weighted blow-up",
                "K_Y = π*K_X + (a + b - 1)E",
                e1.canonical == (a + b) as i64 - 1,
            );
        }
    }

    // det J(m1 ∘ ... ∘ mk) from the chain rule, chart by chart
    let mut det = tower.charts()[0].jacobian_determinant()?;
    for chart in &tower.charts()[1..] {
        det = &chart.pull_poly(&det)? * &chart.jacobian_determinant()?;
    }
    report.certify(
        "Jacobian chain rule",
        "det J(m ∘ n) = n*(det J(m)) · det J(n)",
        det == tower.composite()?.jacobian_determinant()?,
    );
    if let Some(fol) = &foliation {
        report
            .input("foliation", fol.generator.to_string())
            .result("removed_factor", fol.removed_factor.to_string());
        let pulled = tower.composite()?.pullback_derivation(&fol.generator)?;
        report.result("pulled_back_generator", pulled.to_string());
        report.certify("saturated generator", "gcd of coefficients = 1", fol.is_primitive());
    }
    Ok(report)
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    /// The derivation whose constants are computed.
    pub derivation: Option<String>,
    #[arg(short = 'p')]
    pub p: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    #[arg(long)]
    pub hypersurface: Option<String>,
    /// Degree bound of the constants search; defaults to `2p`.
    #[arg(long)]
    pub bound: Option<u32>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn quotient(args: &QuotientArgs) -> Result<Report> {
    let cfg: QuotientConfig = config::load(args.config.as_deref())?;
    let mut report = Report::new("quotient");
    if let Some(case) = &cfg.ramification {
        let check = verify_ramification(case)?;
        report.input("ramification", case).result("ramification", &check);
        report.certify("ramification formula", "π*K_{X/F} - K_X = (p - 1) K_F", check.equal);
    }
    let Some(expr) = args.derivation.clone().or(cfg.derivation) else {
        if cfg.ramification.is_none() {
            bail!("missing derivation");
        }
        return Ok(report);
    };
    let p = args.p.or(cfg.p).context("missing characteristic (-p)")?;
    let hypersurface = args.hypersurface.clone().or(cfg.hypersurface);
    let s = Setting::build(p, args.vars.clone().or(cfg.variables), hypersurface.as_deref(), &[&expr])?;
    let d = nonzero(s.derivation(&expr)?)?;
    let bound = args.bound.or(cfg.bound).unwrap_or(2 * p as u32);
    report.input("derivation", d.to_string()).input("bound", bound);
    s.echo(&mut report);

    let constants = ring_of_constants(&d, bound)?;
    let degree = inseparable_degree(&d, bound)?;
    report
        .result("dimension", constants.dimension())
        .result("generators", constants.generators.iter().map(Poly::to_string).collect::<Vec<_>>())
        .result("inseparable_degree", degree);

    let mut annihilated = true;
    for b in &constants.basis {
        annihilated &= d.apply_poly(b)?.is_zero();
    }
    report.certify("basis is annihilated", "D(b) = 0", annihilated);
    let mut powers = true;
    for i in 0..s.ring.nvars() {
        let mut xp = Poly::var(&s.ring, i).pow(p);
        if let Some(h) = &s.hypersurface {
            xp = h.reduce(&xp)?;
        }
        if xp.total_degree().is_some_and(|deg| deg <= bound) {
            powers &= constants.contains(&xp);
        }
    }
    report.certify("p-th powers are constants", "D(x^p) = p x^{p-1} D(x) = 0", powers);
    Ok(report)
}

#[derive(Args, Debug)]
pub struct ConeArgs {
    /// Symmetric intersection matrix as JSON, e.g. "[[2,5],[5,2]]".
    #[arg(long)]
    pub matrix: Option<String>,
    /// Number of boundary-ray witnesses for a round cone.
    #[arg(long)]
    pub witnesses: Option<usize>,
    /// Height bound of the rational null-vector search.
    #[arg(long)]
    pub height: Option<i64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn cone(args: &ConeArgs) -> Result<Report> {
    let cfg: ConeConfig = config::load(args.config.as_deref())?;
    let matrix: Vec<Vec<i64>> = match &args.matrix {
        Some(m) => serde_json::from_str(m).context("--matrix must be a JSON array of integer rows")?,
        None => cfg.matrix.context("missing intersection matrix (--matrix)")?,
    };
    let lattice = Lattice::new(matrix)?;
    let mut report = Report::new("cone");
    report.input("matrix", lattice.form());
    let cone = if lattice.rank() == 2 {
        boundary_rays_rank2(&lattice)?
    } else {
        let count = args.witnesses.or(cfg.witnesses).unwrap_or(25);
        let height = args.height.or(cfg.height).unwrap_or(100);
        report.input("witnesses", count).input("height", height);
        polyhedrality_check(&lattice, count, height)?
    };
    report.result("signature", lattice.signature()?).result("cone", &cone);
    match &cone.boundary {
        Boundary::Rational(rays) => {
            let form = lattice.form();
            let disc = 4 * (form[0][1] as i128).pow(2) - 4 * form[0][0] as i128 * form[1][1] as i128;
            let null = rays.iter().all(|r| lattice.square(r).is_ok_and(|q| q == 0));
            report.certify("rational boundary rays", "4B² - 4AC is a square, v·v = 0", null && is_square(disc));
        }
        Boundary::Irrational(rays) => {
            report.certify(
                "irrational boundary rays",
                "4B² - 4AC is not a square",
                !is_square(rays.discriminant),
            );
        }
        Boundary::Round => {
            let distinct: BTreeSet<_> = cone.witnesses.iter().collect();
            let null = cone.witnesses.iter().all(|w| lattice.square(w).is_ok_and(|q| q == 0));
            report.certify(
                "round cone witnesses",
                "distinct rational v with v·v = 0",
                null && distinct.len() == cone.witnesses.len(),
            );
        }
    }
    if let Some(shell) = &cfg.shell {
        report.result("bpf_shell", numeric_bpf_shell(&shell.d, &shell.kf, &lattice)?);
    }
    if let Some(series) = &cfg.kf_series {
        let values: BTreeMap<i64, i64> = (1..=series.m_max)
            .map(|m| Ok((m, kf_square(series.l_square, series.p, m)?)))
            .collect::<Result<_>>()?;
        report.result("kf_square", values);
    }
    Ok(report)
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Random cases per characteristic in each property family.
    #[arg(long, default_value_t = 500)]
    pub cases: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn worked_examples(args: &SuiteArgs, jobs: usize) -> Result<Report> {
    let mut config = SuiteConfig {
        property_cases: args.cases,
        jobs,
        ..SuiteConfig::default()
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let mut report = Report::new("paper-suite");
    report.input("cases", config.property_cases).input("seed", config.seed);
    let certificates = suite::run(&config);
    let details: Vec<_> = certificates
        .iter()
        .map(|c| serde_json::json!({ "name": c.name, "detail": c.detail, "millis": c.millis }))
        .collect();
    report.result("checks", details);
    for c in &certificates {
        report.certify(&c.name, &c.anchor, c.passed);
    }
    Ok(report)
}
