//! Integral intersection forms and the numerical cones they cut out.
//!
//! A [`Lattice`] is an integer symmetric form of signature `(1, r - 1)`, the
//! shape of a Néron–Severi lattice of a surface. Its positive cone
//! `{v : v·v ≥ 0, v·h ≥ 0}` is round when the form is nondegenerate. In rank
//! two its boundary consists of two rays, rational exactly when the
//! discriminant is a perfect square.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("the form must be a nonempty square matrix")]
    NotSquare,
    #[error("the form is not symmetric")]
    NotSymmetric,
    #[error("the form is degenerate (determinant 0)")]
    Degenerate,
    #[error("expected signature (1, {expected}), found ({positive}, {negative})")]
    Signature {
        expected: usize,
        positive: usize,
        negative: usize,
    },
    #[error("expected rank {expected}, found {found}")]
    Rank { expected: String, found: usize },
    #[error("vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("integer overflow")]
    Overflow,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, ConeError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    form: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(form: Vec<Vec<i64>>) -> Result<Self> {
        let n = form.len();
        if n == 0 || form.iter().any(|r| r.len() != n) {
            return Err(ConeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(ConeError::NotSymmetric);
                }
            }
        }
        Ok(Self { form })
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(ConeError::Length {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `uᵀQv`.
    pub fn pair(&self, u: &[i64], v: &[i64]) -> Result<i128> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut acc: i128 = 0;
        for (i, row) in self.form.iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                let t = (u[i] as i128)
                    .checked_mul(*q as i128)
                    .and_then(|t| t.checked_mul(v[j] as i128))
                    .ok_or(ConeError::Overflow)?;
                acc = acc.checked_add(t).ok_or(ConeError::Overflow)?;
            }
        }
        Ok(acc)
    }

    pub fn square(&self, v: &[i64]) -> Result<i128> {
        self.pair(v, v)
    }

    pub fn determinant(&self) -> Result<i128> {
        let m: Vec<Vec<i128>> = self.form.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        bareiss(m)
    }

    /// Coefficients of `det(tI - Q)`, constant term first.
    pub fn characteristic_polynomial(&self) -> Result<Vec<i128>> {
        // Faddeev–LeVerrier: exact over the integers since c_k·k divides evenly
        let n = self.rank();
        let q: Vec<Vec<i128>> = self.form.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut coeffs = vec![0i128; n + 1];
        coeffs[n] = 1;
        let mut m = vec![vec![0i128; n]; n];
        for k in 1..=n {
            // M_k = Q·M_{k-1} + c_{n-k+1} I
            let mut next = matmul(&q, &m)?;
            for (i, row) in next.iter_mut().enumerate() {
                row[i] = row[i].checked_add(coeffs[n - k + 1]).ok_or(ConeError::Overflow)?;
            }
            m = next;
            let qm = matmul(&q, &m)?;
            let trace = (0..n).try_fold(0i128, |acc, i| acc.checked_add(qm[i][i])).ok_or(ConeError::Overflow)?;
            coeffs[n - k] = -trace / k as i128;
        }
        Ok(coeffs)
    }

    /// `(positive, negative)` eigenvalue counts. The characteristic polynomial
    /// of a symmetric matrix has only real roots, so Descartes' rule of signs
    /// counts them exactly.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let c = self.characteristic_polynomial()?;
        let positive = sign_changes(&c);
        let flipped: Vec<i128> = c
            .iter()
            .enumerate()
            .map(|(i, &x)| if i % 2 == 1 { -x } else { x })
            .collect();
        let negative = sign_changes(&flipped);
        Ok((positive, negative))
    }

    /// Requires a nondegenerate form of signature `(1, r - 1)`.
    pub fn check_hyperbolic(&self) -> Result<()> {
        if self.determinant()? == 0 {
            return Err(ConeError::Degenerate);
        }
        let (positive, negative) = self.signature()?;
        if positive != 1 || negative != self.rank() - 1 {
            return Err(ConeError::Signature {
                expected: self.rank() - 1,
                positive,
                negative,
            });
        }
        Ok(())
    }

    /// A basis vector or sum of two with positive square, used to pick the
    /// half of the positive cone.
    pub fn positive_vector(&self) -> Result<Vec<i64>> {
        let n = self.rank();
        for i in 0..n {
            let e = unit(n, i);
            if self.square(&e)? > 0 {
                return Ok(e);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for sign in [1, -1] {
                    let mut v = unit(n, i);
                    v[j] = sign;
                    if self.square(&v)? > 0 {
                        return Ok(v);
                    }
                }
            }
        }
        self.diagonal_positive_vector()
    }

    /// Fraction-free orthogonalization: every basis vector is made
    /// orthogonal to the chosen pivots, so some pivot has positive square.
    fn diagonal_positive_vector(&self) -> Result<Vec<i64>> {
        let n = self.rank();
        let mut rest: Vec<Vec<i128>> = (0..n).map(|i| unit(n, i).into_iter().map(i128::from).collect()).collect();
        while !rest.is_empty() {
            let pivot = match rest.iter().position(|u| self.square_wide(u).is_ok_and(|q| q != 0)) {
                Some(i) => rest.swap_remove(i),
                None => {
                    // all remaining vectors are null; a non-orthogonal pair sums to a non-null one
                    let (i, j) = (0..rest.len())
                        .flat_map(|i| (i + 1..rest.len()).map(move |j| (i, j)))
                        .find(|&(i, j)| self.pair_wide(&rest[i], &rest[j]).is_ok_and(|b| b != 0))
                        .ok_or(ConeError::Degenerate)?;
                    let sum: Vec<i128> = rest[i].iter().zip(&rest[j]).map(|(a, b)| a + b).collect();
                    rest.swap_remove(j);
                    rest[i] = sum.clone();
                    rest.swap_remove(i);
                    sum
                }
            };
            let q = self.square_wide(&pivot)?;
            if q > 0 {
                let g = pivot.iter().fold(0i128, |g, &x| gcd128(g, x));
                return pivot
                    .iter()
                    .map(|&x| i64::try_from(x / g.max(1)).map_err(|_| ConeError::Overflow))
                    .collect();
            }
            for w in rest.iter_mut() {
                let b = self.pair_wide(&pivot, w)?;
                let next: Option<Vec<i128>> = w
                    .iter()
                    .zip(&pivot)
                    .map(|(&wi, &ui)| q.checked_mul(wi)?.checked_sub(b.checked_mul(ui)?))
                    .collect();
                let next = next.ok_or(ConeError::Overflow)?;
                let g = next.iter().fold(0i128, |g, &x| gcd128(g, x));
                *w = next.into_iter().map(|x| x / g.max(1)).collect();
            }
        }
        Err(ConeError::Invalid("the form has no positive direction".into()))
    }

    fn pair_wide(&self, u: &[i128], v: &[i128]) -> Result<i128> {
        let mut acc = 0i128;
        for (i, row) in self.form.iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                let t = u[i]
                    .checked_mul(q as i128)
                    .and_then(|t| t.checked_mul(v[j]))
                    .ok_or(ConeError::Overflow)?;
                acc = acc.checked_add(t).ok_or(ConeError::Overflow)?;
            }
        }
        Ok(acc)
    }

    fn square_wide(&self, u: &[i128]) -> Result<i128> {
        self.pair_wide(u, u)
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn small_vectors(n: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * h + 1) as u64;
    (0..side.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % side) as i64 - h;
                code /= side;
                d
            })
            .collect()
    })
}

fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let n = a.len();
    let mut out = vec![vec![0i128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                let t = a[i][k].checked_mul(b[k][j]).ok_or(ConeError::Overflow)?;
                out[i][j] = out[i][j].checked_add(t).ok_or(ConeError::Overflow)?;
            }
        }
    }
    Ok(out)
}

fn bareiss(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(ConeError::Overflow)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

fn sign_changes(c: &[i128]) -> usize {
    let signs: Vec<i128> = c.iter().filter(|&&x| x != 0).map(|x| x.signum()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `⌊√n⌋` for `n ≥ 0`, exactly.
pub fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n);
        r * r == n
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: &[i128]) -> Result<Vec<i64>> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    v.iter()
        .map(|&x| i64::try_from(if g == 0 { x } else { x / g }).map_err(|_| ConeError::Overflow))
        .collect()
}

/// `p^l · v`: the action of an `l`-fold Frobenius factorization on curve classes.
pub fn pushforward_inseparable(v: &[i64], p: u64, l: u32) -> Result<Vec<i64>> {
    let factor = i64::try_from(p)
        .ok()
        .and_then(|p| p.checked_pow(l))
        .ok_or(ConeError::Overflow)?;
    v.iter()
        .map(|x| x.checked_mul(factor).ok_or(ConeError::Overflow))
        .collect()
}

/// A boundary ray that is not rational: the null lines of `a x² + b xy + c y²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrationalRays {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub discriminant: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Rational(Vec<Vec<i64>>),
    Irrational(IrrationalRays),
    Round,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub rank: usize,
    pub boundary: Boundary,
    pub polyhedral: bool,
    /// Rational null vectors on the boundary.
    pub witnesses: Vec<Vec<i64>>,
    pub notes: Vec<String>,
}

pub const NO_MFS_NOTE: &str =
    "both boundary rays are irrational; no contraction to a curve exists, so there is no Mori fibre space structure";

pub const NO_RATIONAL_CURVES_NOTE: &str =
    "a variety with a finite morphism to an abelian surface contains no rational curves (geometric fact, not verified numerically)";

/// The boundary of the positive cone in rank 2. With
/// `Q = [[A, B], [B, C]]`, null vectors `(x, y)` solve `A x² + 2B xy + C y² = 0`,
/// whose discriminant is `4B² - 4AC`.
pub fn boundary_rays_rank2(lattice: &Lattice) -> Result<ConeReport> {
    if lattice.rank() != 2 {
        return Err(ConeError::Rank {
            expected: "2".into(),
            found: lattice.rank(),
        });
    }
    lattice.check_hyperbolic()?;
    let q = lattice.form();
    let (a, b, c) = (q[0][0] as i128, q[0][1] as i128, q[1][1] as i128);
    let disc = 4 * b * b - 4 * a * c;
    let h = lattice.positive_vector()?;
    if !is_square(disc) {
        return Ok(ConeReport {
            rank: 2,
            boundary: Boundary::Irrational(IrrationalRays {
                a: a as i64,
                b: (2 * b) as i64,
                c: c as i64,
                discriminant: disc,
            }),
            polyhedral: true,
            witnesses: vec![],
            notes: vec![NO_MFS_NOTE.into()],
        });
    }
    let r = isqrt(disc);
    let rays = if a != 0 {
        // x/y = (-2B ± r) / 2A
        [(-2 * b + r, 2 * a), (-2 * b - r, 2 * a)]
    } else {
        // y (2B x + C y) = 0
        [(1, 0), (-c, 2 * b)]
    };
    let mut out = Vec::new();
    for (x, y) in rays {
        let mut v = primitive(&[x, y])?;
        if lattice.pair(&v, &h)? < 0 {
            v.iter_mut().for_each(|e| *e = -*e);
        }
        debug_assert_eq!(lattice.square(&v)?, 0);
        out.push(v);
    }
    out.sort();
    Ok(ConeReport {
        rank: 2,
        boundary: Boundary::Rational(out.clone()),
        polyhedral: true,
        witnesses: out,
        notes: vec![],
    })
}

/// Certifies that the positive cone of a hyperbolic lattice of rank at
/// least 3 is round, hence has infinitely many extremal rays, and samples
/// `count` rational boundary rays when a rational null vector of height at
/// most `height` exists.
pub fn polyhedrality_check(lattice: &Lattice, count: usize, height: i64) -> Result<ConeReport> {
    if lattice.rank() < 3 {
        return Err(ConeError::Rank {
            expected: "at least 3".into(),
            found: lattice.rank(),
        });
    }
    lattice.check_hyperbolic()?;
    let h = lattice.positive_vector()?;
    let mut notes = vec![
        "nondegenerate hyperbolic form: the boundary quadric is smooth away from 0, the cone is round and every boundary ray is extremal".to_string(),
        NO_RATIONAL_CURVES_NOTE.to_string(),
    ];
    let witnesses = match find_null_vector(lattice, height)? {
        Some(v0) => parametrize_null_vectors(lattice, &v0, &h, count)?,
        None => {
            notes.push(format!("no rational null vector of height ≤ {height}; witness list is empty"));
            vec![]
        }
    };
    Ok(ConeReport {
        rank: lattice.rank(),
        boundary: Boundary::Round,
        polyhedral: false,
        witnesses,
        notes,
    })
}

const NULL_SEARCH_BUDGET: u64 = 5_000_000;

/// A primitive nonzero `v` with `vᵀQv = 0` and entries bounded by `height`,
/// searched within a fixed budget of candidate vectors.
pub fn find_null_vector(lattice: &Lattice, height: i64) -> Result<Option<Vec<i64>>> {
    let n = lattice.rank();
    let mut visited: u64 = 0;
    // search by increasing max-norm so small witnesses come first
    for hgt in 1..=height {
        let side = 2 * hgt + 1;
        let total = (side as u64).checked_pow(n as u32).ok_or(ConeError::Overflow)?;
        visited = visited.saturating_add(total);
        if visited > NULL_SEARCH_BUDGET {
            break;
        }
        for mut code in 0..total {
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (code % side as u64) as i64 - hgt;
                    code /= side as u64;
                    d
                })
                .collect();
            if v.iter().map(|x| x.abs()).max() != Some(hgt) {
                continue;
            }
            if lattice.square(&v)? == 0 {
                let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
                return Ok(Some(primitive(&w)?));
            }
        }
    }
    Ok(None)
}

/// Rational null vectors `q(w)·v0 - 2B(v0, w)·w` through the rational point `v0`,
/// as `w` runs over small integer vectors; oriented so that `v·h ≥ 0`.
fn parametrize_null_vectors(lattice: &Lattice, v0: &[i64], h: &[i64], count: usize) -> Result<Vec<Vec<i64>>> {
    let n = lattice.rank();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |v: Vec<i64>, out: &mut Vec<Vec<i64>>| -> Result<()> {
        let mut v = v;
        if lattice.pair(&v, h)? < 0 {
            v.iter_mut().for_each(|e| *e = -*e);
        }
        if v.iter().any(|&x| x != 0) && seen.insert(v.clone()) {
            out.push(v);
        }
        Ok(())
    };
    push(v0.to_vec(), &mut out)?;
    let mut radius = 1;
    while out.len() < count && radius <= 20 {
        for w in small_vectors(n, radius) {
            if out.len() >= count {
                break;
            }
            let qw = lattice.square(&w)?;
            let b = lattice.pair(v0, &w)?;
            let v: Vec<i128> = (0..n)
                .map(|i| qw * v0[i] as i128 - 2 * b * w[i] as i128)
                .collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let v = primitive(&v)?;
            debug_assert_eq!(lattice.square(&v)?, 0);
            push(v, &mut out)?;
        }
        radius += 1;
    }
    Ok(out)
}

/// `K_F² = p·m²·L²` for the Fano foliation of a degree-`p` cyclic cover
/// branched along a section of `L^{⊗pm}`.
pub fn kf_square(l_square: i64, p: u64, m: i64) -> Result<i64> {
    if l_square <= 0 {
        return Err(ConeError::Invalid("L² must be positive".into()));
    }
    if m < 1 {
        return Err(ConeError::Invalid("m must be at least 1".into()));
    }
    i64::try_from(p)
        .ok()
        .and_then(|p| p.checked_mul(m)?.checked_mul(m)?.checked_mul(l_square))
        .ok_or(ConeError::Overflow)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BpfShellReport {
    pub d_nef: bool,
    pub d_numerically_trivial: bool,
    pub d_minus_kf_ample: bool,
    pub shell_holds: bool,
    pub notes: Vec<String>,
}

pub const SEMI_AMPLENESS_NOTE: &str =
    "semi-ampleness is not determined by numerical classes; a nef class in Pic^0 that is not torsion exists only over uncountable fields and is not decided here";

/// Numerical hypotheses of the base-point-free theorem for a foliation on
/// a surface whose nef cone is the closed positive cone: `D` nef and
/// `D - K_F` ample.
pub fn numeric_bpf_shell(d: &[i64], kf: &[i64], lattice: &Lattice) -> Result<BpfShellReport> {
    lattice.check_hyperbolic()?;
    lattice.check_len(d)?;
    lattice.check_len(kf)?;
    let h = lattice.positive_vector()?;
    let in_closed_cone = |v: &[i64]| -> Result<bool> {
        if v.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        let sq = lattice.square(v)?;
        Ok(sq > 0 && lattice.pair(v, &h)? > 0 || sq == 0 && lattice.pair(v, &h)? >= 0)
    };
    let in_open_cone = |v: &[i64]| -> Result<bool> { Ok(lattice.square(v)? > 0 && lattice.pair(v, &h)? > 0) };
    let diff: Vec<i64> = d
        .iter()
        .zip(kf)
        .map(|(a, b)| a.checked_sub(*b).ok_or(ConeError::Overflow))
        .collect::<Result<_>>()?;
    let d_numerically_trivial = d.iter().all(|&x| x == 0);
    let d_nef = in_closed_cone(d)?;
    let d_minus_kf_ample = in_open_cone(&diff)?;
    Ok(BpfShellReport {
        d_nef,
        d_numerically_trivial,
        d_minus_kf_ample,
        shell_holds: d_nef && d_minus_kf_ample,
        notes: vec![SEMI_AMPLENESS_NOTE.into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn pushforward_examples() {
        assert_eq!(pushforward_inseparable(&[3, 4], 2, 1).unwrap(), vec![6, 8]);
        assert_eq!(pushforward_inseparable(&[3, 4], 7, 0).unwrap(), vec![3, 4]);
        assert_eq!(pushforward_inseparable(&[1, 0, 1], 3, 2).unwrap(), vec![9, 0, 9]);
        assert_eq!(pushforward_inseparable(&[1], 2, 70), Err(ConeError::Overflow));
    }

    #[test]
    fn rank2_examples() {
        let r = boundary_rays_rank2(&lat(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(r.boundary, Boundary::Rational(vec![vec![0, 1], vec![1, 0]]));
        let r = boundary_rays_rank2(&lat(&[&[2, 5], &[5, 2]])).unwrap();
        match r.boundary {
            Boundary::Irrational(i) => assert_eq!(i.discriminant, 84),
            other => panic!("{other:?}"),
        }
        assert_eq!(r.notes, vec![NO_MFS_NOTE.to_string()]);
        let r = boundary_rays_rank2(&lat(&[&[2, 3], &[3, 2]])).unwrap();
        assert!(matches!(r.boundary, Boundary::Irrational(IrrationalRays { discriminant: 20, .. })));
        assert_eq!(boundary_rays_rank2(&lat(&[&[1, 1], &[1, 1]])).unwrap_err(), ConeError::Degenerate);
        assert!(matches!(
            boundary_rays_rank2(&lat(&[&[1, 0], &[0, 1]])),
            Err(ConeError::Signature { .. })
        ));
    }

    #[test]
    fn rank2_rays_are_null_and_oriented() {
        let l = lat(&[&[2, 3], &[3, 4]]);
        // 4·9 - 4·8 = 4 is a square
        let r = boundary_rays_rank2(&l).unwrap();
        let Boundary::Rational(rays) = r.boundary else { panic!() };
        let h = l.positive_vector().unwrap();
        for v in rays {
            assert_eq!(l.square(&v).unwrap(), 0);
            assert!(l.pair(&v, &h).unwrap() > 0);
        }
    }

    #[test]
    fn signature_examples() {
        assert_eq!(Lattice::diagonal(&[1, -1, -1]).unwrap().signature().unwrap(), (1, 2));
        assert_eq!(lat(&[&[0, 1], &[1, 0]]).signature().unwrap(), (1, 1));
        assert_eq!(lat(&[&[2, 1], &[1, 2]]).signature().unwrap(), (2, 0));
        assert_eq!(
            lat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).characteristic_polynomial().unwrap(),
            // (t² - 1)(t + 2) = t³ + 2t² - t - 2
            vec![-2, -1, 2, 1]
        );
    }

    #[test]
    fn round_cone_examples() {
        let r = polyhedrality_check(&Lattice::diagonal(&[1, -1, -1]).unwrap(), 25, 100).unwrap();
        assert!(!r.polyhedral);
        assert_eq!(r.witnesses.len(), 25);
        let l = Lattice::diagonal(&[1, -1, -1]).unwrap();
        for w in &r.witnesses {
            assert_eq!(l.square(w).unwrap(), 0);
        }
        let h = lat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
        let r = polyhedrality_check(&h, 25, 100).unwrap();
        assert_eq!(r.boundary, Boundary::Round);
        assert!(!r.witnesses.is_empty());
        assert!(matches!(
            polyhedrality_check(&Lattice::diagonal(&[1, -1]).unwrap(), 25, 100),
            Err(ConeError::Rank { .. })
        ));
        // 3x² - y² - z² has no rational zero: x² ≡ 0 mod 3 forces y ≡ z ≡ 0
        let r = polyhedrality_check(&Lattice::diagonal(&[3, -1, -1]).unwrap(), 25, 20).unwrap();
        assert!(r.witnesses.is_empty());
        assert!(!r.polyhedral);
    }

    #[test]
    fn kf_square_examples() {
        assert_eq!(kf_square(2, 2, 1).unwrap(), 4);
        assert_eq!(kf_square(2, 2, 10).unwrap(), 400);
        for m in 1..20 {
            assert!(kf_square(6, 5, m + 1).unwrap() > kf_square(6, 5, m).unwrap());
        }
        assert!(kf_square(0, 2, 1).is_err());
    }

    #[test]
    fn bpf_shell_examples() {
        let l = lat(&[&[0, 1], &[1, 0]]);
        let kf = [-1, -1];
        let r = numeric_bpf_shell(&[0, 0], &kf, &l).unwrap();
        assert!(r.shell_holds && r.d_numerically_trivial);
        let r = numeric_bpf_shell(&[1, 1], &kf, &l).unwrap();
        assert!(r.shell_holds);
        let r = numeric_bpf_shell(&[1, -1], &kf, &l).unwrap();
        assert!(!r.d_nef && !r.shell_holds);
    }
}
