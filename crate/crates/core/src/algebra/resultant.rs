//! Resultants and coprimality certificates.

use super::{AlgebraError, Poly};

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination. Every intermediate division is exact.
pub fn determinant(mut m: Vec<Vec<Poly>>) -> Result<Poly, AlgebraError> {
    let n = m.len();
    if n == 0 {
        return Err(AlgebraError::ArityMismatch {
            expected: 1,
            found: 0,
        });
    }
    let ring = m[0][0].ring().clone();
    let mut prev = Poly::one(&ring);
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(Poly::zero(&ring)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev)?.expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// The Sylvester resultant of `a` and `b` with respect to `x_var`.
pub fn resultant(a: &Poly, b: &Poly, var: usize) -> Result<Poly, AlgebraError> {
    let ca = a.coefficients_in(var);
    let cb = b.coefficients_in(var);
    let (m, n) = (ca.len() - 1, cb.len() - 1);
    let ring = a.ring().clone();
    if a.is_zero() || b.is_zero() {
        return Ok(Poly::zero(&ring));
    }
    if m == 0 {
        return Ok(ca[0].pow(n as u64));
    }
    if n == 0 {
        return Ok(cb[0].pow(m as u64));
    }
    let size = m + n;
    let mut rows = vec![vec![Poly::zero(&ring); size]; size];
    for r in 0..n {
        for (i, c) in ca.iter().rev().enumerate() {
            rows[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in cb.iter().rev().enumerate() {
            rows[n + r][r + i] = c.clone();
        }
    }
    determinant(rows)
}

/// Certifies that `a` and `b` share no factor of positive degree.
///
/// A common factor involving `x_v` forces `Res_v(a, b) = 0` whenever both
/// have positive degree in `x_v`; if one of them is free of `x_v`, no common
/// factor can involve `x_v` at all.
pub fn coprime(a: &Poly, b: &Poly) -> Result<bool, AlgebraError> {
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_constant() && !a.is_zero() || b.is_constant() && !b.is_zero());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(true);
    }
    for v in 0..a.ring().nvars() {
        let (da, db) = (a.degree_in(v).unwrap(), b.degree_in(v).unwrap());
        if da == 0 || db == 0 {
            continue;
        }
        if resultant(a, b, v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
