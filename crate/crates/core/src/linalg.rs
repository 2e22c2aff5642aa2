//! Exact Gaussian elimination over a field: echelon spans, rank, kernels.

use alloc::vec::Vec;

use crate::exactnum::Ring;

/// A subspace of `K^dim` kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Span<R: Ring> {
    ring: R,
    dim: usize,
    rows: Vec<Vec<R::Elem>>,
    pivots: Vec<usize>,
}

impl<R: Ring> Span<R> {
    pub fn new(ring: R, dim: usize) -> Self {
        assert!(ring.is_field(), "echelon forms need a field");
        Span { ring, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<R::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the remainder is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        let r = &self.ring;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.is_zero(&v[p]) {
                continue;
            }
            let f = v[p].clone();
            for (k, e) in row.iter().enumerate() {
                if !r.is_zero(e) {
                    v[k] = r.sub(&v[k], &r.mul(&f, e));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        self.reduce(v).iter().all(|e| self.ring.is_zero(e))
    }

    /// Add `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[R::Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.ring.clone();
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|e| !r.is_zero(e)) else {
            return false;
        };
        let inv = r.inv(&v[p]).expect("nonzero pivot in a field");
        for e in v.iter_mut() {
            if !r.is_zero(e) {
                *e = r.mul(e, &inv);
            }
        }
        for row in self.rows.iter_mut() {
            if r.is_zero(&row[p]) {
                continue;
            }
            let f = row[p].clone();
            for (k, e) in v.iter().enumerate() {
                if !r.is_zero(e) {
                    row[k] = r.sub(&row[k], &r.mul(&f, e));
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    /// Same subspace (both are in reduced echelon form, so this is row equality).
    pub fn same_as(&self, other: &Span<R>) -> bool {
        self.dim == other.dim && self.pivots == other.pivots && self.rows == other.rows
    }
}

pub fn rank<R: Ring>(ring: &R, dim: usize, vectors: &[Vec<R::Elem>]) -> usize {
    let mut s = Span::new(ring.clone(), dim);
    for v in vectors {
        s.insert(v);
    }
    s.dim()
}

/// Basis of `{v : M v = 0}` for the matrix given by its rows.
pub fn kernel<R: Ring>(ring: &R, ncols: usize, rows: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let mut s = Span::new(ring.clone(), ncols);
    for row in rows {
        s.insert(row);
        if s.dim() == ncols {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !s.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![ring.zero(); ncols];
            v[f] = ring.one();
            for (row, &p) in s.rows.iter().zip(&s.pivots) {
                if !ring.is_zero(&row[f]) {
                    v[p] = ring.neg(&row[f]);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{make_prime_field, Integer, Rational, RationalField};
    use alloc::vec;

    fn q(n: i64) -> Rational {
        Rational::from_integer(Integer::from(n))
    }

    #[test]
    fn rank_and_membership() {
        let f = RationalField;
        let mut s = Span::new(f, 3);
        assert!(s.insert(&[q(1), q(2), q(3)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(2), q(5), q(7)]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[q(1), q(1), q(2)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn kernel_basis() {
        let f = make_prime_field(5).unwrap();
        let rows = vec![vec![1, 2, 3], vec![2, 4, 2]];
        let ker = kernel(&f, 3, &rows);
        assert_eq!(ker.len(), 1);
        for row in &rows {
            let dot = (0..3).fold(0, |acc, k| (acc + row[k] * ker[0][k]) % 5);
            assert_eq!(dot, 0);
        }
    }
}
