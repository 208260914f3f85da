//! Blow-up charts, towers of charts, pullbacks of differential forms and
//! vector fields, and discrepancies along exceptional divisors.
//!
//! A [`ChartMap`] `m` sends source coordinates `s` to target coordinates
//! `x = m(s)`. Forms pull back by substitution and the exterior algebra of
//! the Jacobian; vector fields pull back by solving `J·ṽ = D∘m` over the
//! function field of the source. Orders along an exceptional divisor are
//! orders in its source coordinate, so poles appear as negative orders.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{determinant, AlgebraError, Poly, PolyRing, RationalFn};
use crate::derivation::{Derivation, DerivationError, FoliationChart};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirationalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("the Jacobian determinant vanishes identically; vector fields do not pull back")]
    SingularJacobian,
    #[error("weights ({0}, {1}) must be positive and coprime")]
    BadWeights(u32, u32),
    #[error("chart {0} does not compose with the previous chart")]
    NotComposable(usize),
    #[error("the tower is empty")]
    EmptyTower,
    #[error("the chart has no exceptional divisor")]
    NoExceptional,
    #[error("discrepancies need a generator with certified primitive coefficients")]
    NotPrimitive,
    #[error("charts act on polynomial rings, not on hypersurface rings")]
    HypersurfaceUnsupported,
    #[error("weighted blow-up charts are defined for surfaces only")]
    NotSurface,
}

type Result<T> = std::result::Result<T, BirationalError>;

/// A polynomial map from the `source` chart to the `target` chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMap {
    source: Arc<PolyRing>,
    target: Arc<PolyRing>,
    /// One component per target variable, in the source ring.
    components: Vec<Poly>,
    /// Source variable cutting out the exceptional divisor.
    exceptional: Option<usize>,
}

impl ChartMap {
    pub fn new(
        source: &Arc<PolyRing>,
        target: &Arc<PolyRing>,
        components: Vec<Poly>,
        exceptional: Option<usize>,
    ) -> Result<Self> {
        if components.len() != target.nvars() || source.nvars() != target.nvars() {
            return Err(AlgebraError::ArityMismatch {
                expected: target.nvars(),
                found: components.len(),
            }
            .into());
        }
        if components.iter().any(|c| c.ring() != source) || source.p() != target.p() {
            return Err(AlgebraError::RingMismatch.into());
        }
        if exceptional.is_some_and(|e| e >= source.nvars()) {
            return Err(BirationalError::NoExceptional);
        }
        let m = Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            components,
            exceptional,
        };
        if m.jacobian_determinant()?.is_zero() {
            return Err(BirationalError::SingularJacobian);
        }
        Ok(m)
    }

    pub fn identity(ring: &Arc<PolyRing>) -> Self {
        Self {
            source: Arc::clone(ring),
            target: Arc::clone(ring),
            components: (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect(),
            exceptional: None,
        }
    }

    pub fn source(&self) -> &Arc<PolyRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PolyRing> {
        &self.target
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn exceptional(&self) -> Option<usize> {
        self.exceptional
    }

    /// `J[i][j] = ∂m_i/∂s_j`.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.components
            .iter()
            .map(|c| (0..self.source.nvars()).map(|j| c.partial(j)).collect())
            .collect()
    }

    pub fn jacobian_determinant(&self) -> Result<Poly> {
        Ok(determinant(self.jacobian())?)
    }

    pub fn pull_poly(&self, a: &Poly) -> Result<Poly> {
        if a.ring() != &self.target {
            return Err(AlgebraError::RingMismatch.into());
        }
        Ok(a.compose(&self.components)?)
    }

    pub fn pull_rational(&self, a: &RationalFn) -> Result<RationalFn> {
        if a.ring() != &self.target {
            return Err(AlgebraError::RingMismatch.into());
        }
        Ok(a.compose(&self.components)?)
    }

    /// `self ∘ inner`: first `inner`, then `self`. The exceptional divisor
    /// is that of `inner`.
    pub fn compose(&self, inner: &ChartMap) -> Result<ChartMap> {
        if inner.target != self.source {
            return Err(BirationalError::NotComposable(1));
        }
        let components = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ChartMap {
            source: Arc::clone(&inner.source),
            target: Arc::clone(&self.target),
            components,
            exceptional: inner.exceptional,
        })
    }

    /// The unique rational vector field `ṽ` on the source with `J·ṽ = D∘m`.
    pub fn pullback_derivation(&self, d: &Derivation) -> Result<Derivation> {
        if d.hypersurface().is_some() {
            return Err(BirationalError::HypersurfaceUnsupported);
        }
        if d.ring() != &self.target {
            return Err(AlgebraError::RingMismatch.into());
        }
        let det = self.jacobian_determinant()?;
        if det.is_zero() {
            return Err(BirationalError::SingularJacobian);
        }
        let rhs = d
            .coeffs()
            .iter()
            .map(|c| self.pull_rational(c))
            .collect::<Result<Vec<_>>>()?;
        let adj = adjugate(&self.jacobian())?;
        let det = RationalFn::from(det);
        let coeffs = adj
            .iter()
            .map(|row| {
                let mut acc = RationalFn::zero(&self.source);
                for (a, r) in row.iter().zip(&rhs) {
                    if !a.is_zero() {
                        acc = acc.checked_add(&r.mul_poly(a))?;
                    }
                }
                Ok(acc.checked_div(&det)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation::new(&self.source, coeffs)?)
    }

    pub fn pullback_form(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        form.pullback(self)
    }
}

impl fmt::Display for ChartMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = self.source.vars().join(", ");
        let comps: Vec<String> = self.components.iter().map(Poly::to_string).collect();
        write!(f, "({src}) -> ({})", comps.join(", "))
    }
}

/// Adjugate of a square polynomial matrix.
fn adjugate(m: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>> {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    if n == 1 {
        return Ok(vec![vec![Poly::one(&ring)]]);
    }
    let mut adj = vec![vec![Poly::zero(&ring); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Poly>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let cof = determinant(minor)?;
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    Ok(adj)
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Exponents `(γ, δ) ≥ 0` with `aδ - bγ = 1`.
fn unimodular_completion(a: u32, b: u32) -> Result<(u32, u32)> {
    if a == 0 || b == 0 {
        return Err(BirationalError::BadWeights(a, b));
    }
    let (g, x, _) = extended_gcd(a as i64, b as i64);
    if g != 1 {
        return Err(BirationalError::BadWeights(a, b));
    }
    // a·x ≡ 1 (mod b); the least positive such δ
    let delta = if b == 1 { 1 } else { x.rem_euclid(b as i64) as u32 };
    let gamma = (a as i64 * delta as i64 - 1) / b as i64;
    Ok((gamma as u32, delta))
}

/// The chart `(s, t) ↦ (c0 + s^a t^γ, c1 + s^b t^δ)` of the `(a, b)`-weighted
/// blow-up at `center`, with `aδ - bγ = 1`. It contains the generic point of
/// the exceptional divisor `{s = 0}`, whose valuation gives `x` weight `a`
/// and `y` weight `b`. For `(1, b)` this is `(s, t) ↦ (s, s^b t)`.
pub fn weighted_blowup_chart_at(
    target: &Arc<PolyRing>,
    source_vars: [&str; 2],
    weights: (u32, u32),
    center: (i64, i64),
) -> Result<ChartMap> {
    if target.nvars() != 2 {
        return Err(BirationalError::NotSurface);
    }
    let (a, b) = weights;
    let (gamma, delta) = unimodular_completion(a, b)?;
    let source = PolyRing::with_field(target.field(), &source_vars)?;
    let s = Poly::var(&source, 0);
    let t = Poly::var(&source, 1);
    let x = &s.pow(a as u64) * &t.pow(gamma as u64) + Poly::constant(&source, center.0);
    let y = &s.pow(b as u64) * &t.pow(delta as u64) + Poly::constant(&source, center.1);
    ChartMap::new(&source, target, vec![x, y], Some(0))
}

/// The `(a, b)`-weighted blow-up chart at the origin with coordinates `s, t`.
pub fn weighted_blowup_chart(target: &Arc<PolyRing>, weights: (u32, u32)) -> Result<ChartMap> {
    weighted_blowup_chart_at(target, ["s", "t"], weights, (0, 0))
}

/// One blow-up in a tower, centred at a point of the previous chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct TowerStep {
    pub weights: (u32, u32),
    #[serde(default)]
    pub center: (i64, i64),
}

/// A sequence of charts; chart `k + 1` maps into the source of chart `k`,
/// and chart 0 maps into the base.
#[derive(Clone, Debug)]
pub struct Tower {
    charts: Vec<ChartMap>,
}

impl Tower {
    pub fn new(charts: Vec<ChartMap>) -> Result<Self> {
        if charts.is_empty() {
            return Err(BirationalError::EmptyTower);
        }
        for k in 1..charts.len() {
            if charts[k].target != charts[k - 1].source {
                return Err(BirationalError::NotComposable(k));
            }
        }
        Ok(Self { charts })
    }

    /// Weighted blow-ups of the surface `base`. Coordinates are `s, t` for a
    /// single step and `s1, t1, s2, t2, ...` otherwise.
    pub fn from_steps(base: &Arc<PolyRing>, steps: &[TowerStep]) -> Result<Self> {
        let mut charts: Vec<ChartMap> = Vec::with_capacity(steps.len());
        for (k, step) in steps.iter().enumerate() {
            let (s, t) = if steps.len() == 1 {
                ("s".to_string(), "t".to_string())
            } else {
                (format!("s{}", k + 1), format!("t{}", k + 1))
            };
            let target = charts.last().map_or(base, |c| &c.source);
            charts.push(weighted_blowup_chart_at(target, [&s, &t], step.weights, step.center)?);
        }
        Self::new(charts)
    }

    pub fn charts(&self) -> &[ChartMap] {
        &self.charts
    }

    pub fn depth(&self) -> usize {
        self.charts.len()
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        &self.charts[0].target
    }

    /// The composite of the first `depth` charts.
    pub fn composite_to(&self, depth: usize) -> Result<ChartMap> {
        let mut acc = self.charts[0].clone();
        for c in &self.charts[1..depth] {
            acc = acc.compose(c)?;
        }
        Ok(acc)
    }

    pub fn composite(&self) -> Result<ChartMap> {
        self.composite_to(self.charts.len())
    }
}

/// A differential `k`-form `Σ c_I dx_I` with increasing index sets `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    ring: Arc<PolyRing>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

impl DifferentialForm {
    pub fn new(ring: &Arc<PolyRing>, degree: usize, terms: BTreeMap<Vec<usize>, Poly>) -> Result<Self> {
        for (idx, c) in &terms {
            let increasing = idx.windows(2).all(|w| w[0] < w[1]);
            if idx.len() != degree || !increasing || idx.iter().any(|&i| i >= ring.nvars()) {
                return Err(AlgebraError::ArityMismatch {
                    expected: degree,
                    found: idx.len(),
                }
                .into());
            }
            if c.ring() != ring {
                return Err(AlgebraError::RingMismatch.into());
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self {
            ring: Arc::clone(ring),
            degree,
            terms,
        })
    }

    /// `Σ ω_i dx_i`.
    pub fn one_form(ring: &Arc<PolyRing>, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != ring.nvars() {
            return Err(AlgebraError::ArityMismatch {
                expected: ring.nvars(),
                found: coeffs.len(),
            }
            .into());
        }
        let terms = coeffs.into_iter().enumerate().map(|(i, c)| (vec![i], c)).collect();
        Self::new(ring, 1, terms)
    }

    /// `dx_i`.
    pub fn differential(ring: &Arc<PolyRing>, i: usize) -> Self {
        let terms = BTreeMap::from([(vec![i], Poly::one(ring))]);
        Self {
            ring: Arc::clone(ring),
            degree: 1,
            terms,
        }
    }

    /// `dx_1 ∧ ... ∧ dx_n`.
    pub fn volume(ring: &Arc<PolyRing>) -> Self {
        let terms = BTreeMap::from([((0..ring.nvars()).collect(), Poly::one(ring))]);
        Self {
            ring: Arc::clone(ring),
            degree: ring.nvars(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.terms
    }

    pub fn coefficient(&self, idx: &[usize]) -> Poly {
        self.terms.get(idx).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `m^*(c dx_I) = (c∘m) Σ_J det(J[I, J]) ds_J`.
    pub fn pullback(&self, m: &ChartMap) -> Result<DifferentialForm> {
        if self.ring != m.target {
            return Err(AlgebraError::RingMismatch.into());
        }
        let jac = m.jacobian();
        let n = m.source.nvars();
        let mut out: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
        for cols in subsets(n, self.degree) {
            let mut acc = Poly::zero(&m.source);
            for (rows, c) in &self.terms {
                let minor = if self.degree == 0 {
                    Poly::one(&m.source)
                } else {
                    let sub = rows
                        .iter()
                        .map(|&r| cols.iter().map(|&j| jac[r][j].clone()).collect())
                        .collect();
                    determinant(sub)?
                };
                if !minor.is_zero() {
                    acc = &acc + &(&m.pull_poly(c)? * &minor);
                }
            }
            if !acc.is_zero() {
                out.insert(cols, acc);
            }
        }
        Ok(DifferentialForm {
            ring: Arc::clone(&m.source),
            degree: self.degree,
            terms: out,
        })
    }

    /// Largest power of `x_var` dividing every coefficient; `None` for the zero form.
    pub fn order_along(&self, var: usize) -> Option<u32> {
        self.terms.values().filter_map(|c| c.order_in(var)).min()
    }

    /// `ω(v)` for a 1-form.
    pub fn pair(&self, v: &Derivation) -> Result<RationalFn> {
        if self.degree != 1 {
            return Err(AlgebraError::ArityMismatch {
                expected: 1,
                found: self.degree,
            }
            .into());
        }
        let coeffs: Vec<Poly> = (0..self.ring.nvars()).map(|i| self.coefficient(&[i])).collect();
        Ok(v.pair(&coeffs)?)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", vars[i])).collect();
                let basis = basis.join("^");
                match (c.is_one(), c.num_terms()) {
                    (true, _) => basis,
                    (false, 1) => format!("{c}*{basis}"),
                    _ => format!("({c})*{basis}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimal order of the coefficients of `v` along `{x_var = 0}`.
pub fn order_of_vector_field(v: &Derivation, var: usize) -> Option<i64> {
    v.coeffs().iter().filter_map(|c| c.order_in(var)).min()
}

/// `a(E, F)` for the exceptional divisor of the composite chart of `tower`:
/// minus the order along `E` of the pulled-back primitive generator.
pub fn foliation_discrepancy(tower: &Tower, foliation: &FoliationChart) -> Result<i64> {
    foliation_discrepancy_at(tower, tower.depth(), foliation)
}

fn foliation_discrepancy_at(tower: &Tower, depth: usize, foliation: &FoliationChart) -> Result<i64> {
    if !foliation.is_primitive() {
        return Err(BirationalError::NotPrimitive);
    }
    let m = tower.composite_to(depth)?;
    let e = m.exceptional.ok_or(BirationalError::NoExceptional)?;
    let v = m.pullback_derivation(&foliation.generator)?;
    let order = order_of_vector_field(&v, e).expect("pullback of a nonzero field is nonzero");
    Ok(-order)
}

/// `a(E)` for `K`: the order along `E` of the pulled-back volume form.
pub fn canonical_discrepancy(tower: &Tower) -> Result<i64> {
    canonical_discrepancy_at(tower, tower.depth())
}

fn canonical_discrepancy_at(tower: &Tower, depth: usize) -> Result<i64> {
    let m = tower.composite_to(depth)?;
    let e = m.exceptional.ok_or(BirationalError::NoExceptional)?;
    let vol = DifferentialForm::volume(tower.base()).pullback(&m)?;
    Ok(vol.order_along(e).ok_or(BirationalError::SingularJacobian)? as i64)
}

/// Integer combination of labelled divisors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DivisorLedger(BTreeMap<String, i64>);

impl DivisorLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: &str, coefficient: i64) {
        self.0.insert(label.to_string(), coefficient);
    }

    pub fn get(&self, label: &str) -> i64 {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<String, i64> {
        &self.0
    }

    /// Formal sum; zero coefficients are dropped.
    pub fn add(&self, other: &DivisorLedger) -> DivisorLedger {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += v;
        }
        out.retain(|_, v| *v != 0);
        DivisorLedger(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancies {
    pub canonical: i64,
    pub foliated: Option<i64>,
}

/// Canonical and (when a foliation is given) foliated discrepancies of
/// every exceptional divisor `E1, E2, ...` of the tower.
pub fn discrepancy_report(
    tower: &Tower,
    foliation: Option<&FoliationChart>,
) -> Result<BTreeMap<String, Discrepancies>> {
    let mut out = BTreeMap::new();
    for depth in 1..=tower.depth() {
        let canonical = canonical_discrepancy_at(tower, depth)?;
        let foliated = foliation
            .map(|f| foliation_discrepancy_at(tower, depth, f))
            .transpose()?;
        out.insert(format!("E{depth}"), Discrepancies { canonical, foliated });
    }
    Ok(out)
}

/// The ledgers `K_Y - π*K_X` and `K_F̃ - π*K_F` of a report.
pub fn ledgers(report: &BTreeMap<String, Discrepancies>) -> (DivisorLedger, Option<DivisorLedger>) {
    let mut canonical = DivisorLedger::new();
    let mut foliated = DivisorLedger::new();
    let mut has_foliated = true;
    for (label, d) in report {
        canonical.insert(label, d.canonical);
        match d.foliated {
            Some(a) => foliated.insert(label, a),
            None => has_foliated = false,
        }
    }
    (canonical, has_foliated.then_some(foliated))
}
