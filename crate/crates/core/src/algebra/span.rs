//! Sparse linear algebra over `F_p` with polynomials as coordinate vectors.

use std::collections::BTreeMap;

use super::{Monomial, Poly};

/// A reduced echelon basis of a subspace of polynomials. Each row carries a
/// tag that is transformed along with it, which records how a vector was
/// reduced (kernel vectors, cofactors).
#[derive(Clone, Debug, Default)]
pub struct TaggedSpan {
    rows: BTreeMap<Monomial, (Poly, Poly)>,
}

impl TaggedSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `(v, tag)` against the basis.
    pub fn reduce(&self, mut v: Poly, mut tag: Poly) -> (Poly, Poly) {
        let f = v.field();
        for (pivot, (row, row_tag)) in self.rows.iter().rev() {
            let c = v.coefficient(pivot);
            if c == 0 {
                continue;
            }
            let k = f.neg(c);
            v = &v + &row.scale(k);
            tag = &tag + &row_tag.scale(k);
        }
        (v, tag)
    }

    /// Inserts `v`; returns the reduced remainder and its tag. A zero
    /// remainder means `v` was already in the span, and then the tag records
    /// the linear dependency.
    pub fn insert(&mut self, v: Poly, tag: Poly) -> (Poly, Poly) {
        let (v, tag) = self.reduce(v, tag);
        if v.is_zero() {
            return (v, tag);
        }
        let (pivot, lc) = v.leading().map(|(m, c)| (m.clone(), c)).unwrap();
        let inv = v.field().inv(lc).unwrap();
        let (v, tag) = (v.scale(inv), tag.scale(inv));
        // keep the basis fully reduced
        let f = v.field();
        for (row, row_tag) in self.rows.values_mut() {
            let c = row.coefficient(&pivot);
            if c != 0 {
                let k = f.neg(c);
                *row = &*row + &v.scale(k);
                *row_tag = &*row_tag + &tag.scale(k);
            }
        }
        self.rows.insert(pivot, (v.clone(), tag.clone()));
        (v, tag)
    }

    /// Reduces `v` without tracking tags.
    pub fn reduce_vector(&self, mut v: Poly) -> Poly {
        let f = v.field();
        for (pivot, (row, _)) in self.rows.iter().rev() {
            let c = v.coefficient(pivot);
            if c != 0 {
                v = &v + &row.scale(f.neg(c));
            }
        }
        v
    }

    pub fn contains(&self, v: &Poly) -> bool {
        self.reduce_vector(v.clone()).is_zero()
    }

    /// Basis vectors in ascending pivot order.
    pub fn basis(&self) -> impl Iterator<Item = &Poly> {
        self.rows.values().map(|(v, _)| v)
    }
}
