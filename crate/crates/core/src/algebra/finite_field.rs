//! Finite fields `F_q`, `q = p^k`, with log/exp tables.
//!
//! An element is encoded as the integer `Σ c_i p^i`, where `c_0 + c_1 α + ...`
//! is its expansion in powers of a root `α` of the stored primitive polynomial.
//! Codes `0..p` are the prime subfield.

use super::{AlgebraError, Poly, PrimeField};

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct FiniteField {
    base: PrimeField,
    k: u32,
    q: u32,
    /// Monic primitive polynomial of degree `k`, low coefficients first (without the leading 1).
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    /// Builds `F_q`; `q` must be a power of a prime.
    pub fn new(q: u64) -> Result<Self, AlgebraError> {
        let (p, k) = prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(AlgebraError::FieldTooLarge(q));
        }
        let base = PrimeField::new(p)?;
        let q32 = q as u32;
        let mut digits = vec![0u64; k as usize];
        // enumerate monic candidates x^k + c_{k-1} x^{k-1} + ... + c_0
        loop {
            if let Some((exp, log)) = primitive_tables(base, &digits, q32) {
                return Ok(Self {
                    base,
                    k,
                    q: q32,
                    modulus: digits,
                    exp,
                    log,
                });
            }
            if !increment(&mut digits, p) {
                unreachable!("primitive polynomials exist in every degree");
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn characteristic(&self) -> u64 {
        self.base.p()
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn prime_field(&self) -> PrimeField {
        self.base
    }

    /// Embeds a prime-field residue.
    pub fn from_prime(&self, c: u64) -> u32 {
        (c % self.base.p()) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return self.base.add(a as u64, b as u64) as u32;
        }
        let p = self.base.p() as u32;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.base.p() as u32;
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..self.k {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] as u64 + self.log[b as usize] as u64) % n as u64) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// A square root, if one exists in this field.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        let n = self.q - 1;
        if n % 2 == 1 {
            // characteristic 2: squaring is a bijection
            let half = (l as u64 * (n as u64).div_ceil(2)) % n as u64;
            return Some(self.exp[half as usize]);
        }
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Embeds this field into `big`, whose degree must be a multiple of ours.
    /// Returns the image of every element code.
    pub fn embedding_into(&self, big: &FiniteField) -> Result<Vec<u32>, AlgebraError> {
        if big.characteristic() != self.characteristic() || !big.k.is_multiple_of(self.k) {
            return Err(AlgebraError::NoEmbedding {
                from: self.order(),
                to: big.order(),
            });
        }
        let p = self.base.p();
        // a root of our modulus inside the big field
        let root = big
            .elements()
            .find(|&b| {
                let mut acc = big.pow(b, self.k as u64);
                for (i, c) in self.modulus.iter().enumerate() {
                    acc = big.add(acc, big.mul(big.from_prime(*c), big.pow(b, i as u64)));
                }
                acc == 0
            })
            .ok_or(AlgebraError::NoEmbedding {
                from: self.order(),
                to: big.order(),
            })?;
        Ok(self
            .elements()
            .map(|code| {
                let (mut c, mut acc) = (code as u64, 0u32);
                for i in 0..self.k {
                    let digit = c % p;
                    c /= p;
                    acc = big.add(acc, big.mul(big.from_prime(digit), big.pow(root, i as u64)));
                }
                acc
            })
            .collect())
    }

    /// Rank of a square or rectangular matrix by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = self.inv(m[rank][col]).unwrap();
            for c in col..ncols {
                m[rank][c] = self.mul(m[rank][c], inv);
            }
            for r in 0..m.len() {
                if r != rank && m[r][col] != 0 {
                    let factor = m[r][col];
                    for c in col..ncols {
                        let v = self.mul(factor, m[rank][c]);
                        m[r][c] = self.sub(m[r][c], v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Human-readable element: the integer for prime fields, otherwise a polynomial in `a`.
    pub fn format(&self, code: u32) -> String {
        if self.k == 1 {
            return code.to_string();
        }
        let p = self.base.p() as u32;
        let mut parts = Vec::new();
        let mut c = code;
        for i in 0..self.k {
            let d = c % p;
            c /= p;
            if d == 0 {
                continue;
            }
            parts.push(match (i, d) {
                (0, _) => d.to_string(),
                (1, 1) => "a".into(),
                (1, _) => format!("{d}*a"),
                (_, 1) => format!("a^{i}"),
                _ => format!("{d}*a^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.reverse();
            parts.join("+")
        }
    }
}

fn increment(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// If `t` generates the unit group of `F_p[t]/(m)`, returns exp/log tables.
fn primitive_tables(base: PrimeField, lower: &[u64], q: u32) -> Option<(Vec<u32>, Vec<u32>)> {
    let k = lower.len();
    let p = base.p();
    let n = (q - 1) as usize;
    if k == 1 {
        // x - g: t ≡ g, so g must be a primitive root
        let g = base.neg(lower[0]);
        if g == 0 {
            return None;
        }
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u64;
        for i in 0..n {
            if log[x as usize] != u32::MAX {
                return None;
            }
            log[x as usize] = i as u32;
            exp.push(x as u32);
            x = base.mul(x, g);
        }
        return (x == 1).then_some((exp, log));
    }
    let mut exp = Vec::with_capacity(n);
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    for i in 0..n {
        let code = cur.iter().rev().fold(0u64, |acc, d| acc * p + d) as usize;
        if log[code] != u32::MAX || code == 0 {
            return None;
        }
        log[code] = i as u32;
        exp.push(code as u32);
        // multiply by t modulo t^k + lower
        let top = cur[k - 1];
        for j in (1..k).rev() {
            cur[j] = base.sub(cur[j - 1], base.mul(top, lower[j]));
        }
        cur[0] = base.neg(base.mul(top, lower[0]));
    }
    (cur[0] == 1 && cur[1..].iter().all(|&c| c == 0)).then_some((exp, log))
}

/// `Some((p, k))` with `q = p^k`, `p` prime, `k ≥ 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// A polynomial compiled for fast evaluation over `F_q`.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(u32, Vec<(usize, u64)>)>,
}

impl CompiledPoly {
    pub fn new(poly: &Poly, field: &FiniteField) -> Self {
        let terms = poly
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| (i, *e as u64))
                    .collect();
                (field.from_prime(c), factors)
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, field: &FiniteField, point: &[u32]) -> u32 {
        let mut acc = 0;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for (i, e) in factors {
                t = field.mul(t, field.pow(point[*i], *e));
                if t == 0 {
                    break;
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
