//! The (possibly noncommutative) algebra interface shared by every element
//! type that relation checks and polynomial evaluation run against.

use alloc::vec::Vec;
use core::fmt::Debug;

use crate::exactnum::{Integer, Ring};

pub trait Algebra {
    type Scalars: Ring;
    type Elem: Clone + PartialEq + Debug;

    fn scalars(&self) -> &Self::Scalars;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn scalar(&self, c: &<Self::Scalars as Ring>::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiply by a central scalar.
    fn scale(&self, c: &<Self::Scalars as Ring>::Elem, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.scalar(c), a)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_integer(&self, n: &Integer) -> Self::Elem {
        self.scalar(&self.scalars().from_integer(n))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_integer(&Integer::from(n))
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum(&self, items: &[Self::Elem]) -> Self::Elem {
        items.iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product(&self, items: &[Self::Elem]) -> Self::Elem {
        items.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// A commutative ring viewed as an algebra over itself.
#[derive(Debug, Clone)]
pub struct Scalars<R: Ring>(pub R);

impl<R: Ring> Algebra for Scalars<R> {
    type Scalars = R;
    type Elem = R::Elem;
    fn scalars(&self) -> &R {
        &self.0
    }
    fn zero(&self) -> R::Elem {
        self.0.zero()
    }
    fn one(&self) -> R::Elem {
        self.0.one()
    }
    fn scalar(&self, c: &R::Elem) -> R::Elem {
        c.clone()
    }
    fn add(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.0.add(a, b)
    }
    fn neg(&self, a: &R::Elem) -> R::Elem {
        self.0.neg(a)
    }
    fn sub(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.0.mul(a, b)
    }
    fn is_zero(&self, a: &R::Elem) -> bool {
        self.0.is_zero(a)
    }
}

/// The opposite algebra: same elements, reversed multiplication.
#[derive(Debug)]
pub struct Opposite<'a, A: Algebra>(pub &'a A);

impl<A: Algebra> Algebra for Opposite<'_, A> {
    type Scalars = A::Scalars;
    type Elem = A::Elem;
    fn scalars(&self) -> &A::Scalars {
        self.0.scalars()
    }
    fn zero(&self) -> A::Elem {
        self.0.zero()
    }
    fn one(&self) -> A::Elem {
        self.0.one()
    }
    fn scalar(&self, c: &<A::Scalars as Ring>::Elem) -> A::Elem {
        self.0.scalar(c)
    }
    fn add(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.0.add(a, b)
    }
    fn neg(&self, a: &A::Elem) -> A::Elem {
        self.0.neg(a)
    }
    fn mul(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.0.mul(b, a)
    }
    fn is_zero(&self, a: &A::Elem) -> bool {
        self.0.is_zero(a)
    }
    fn scale(&self, c: &<A::Scalars as Ring>::Elem, a: &A::Elem) -> A::Elem {
        self.0.scale(c, a)
    }
}

/// Square matrices over a field, row-major.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra<R: Ring> {
    pub ring: R,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    pub dim: usize,
    pub entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<E>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }
}

impl<R: Ring> MatrixAlgebra<R> {
    pub fn new(ring: R, dim: usize) -> Self {
        MatrixAlgebra { ring, dim }
    }

    pub fn from_fn(&self, f: impl Fn(usize, usize) -> R::Elem) -> Matrix<R::Elem> {
        let mut entries = Vec::with_capacity(self.dim * self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                entries.push(f(r, c));
            }
        }
        Matrix { dim: self.dim, entries }
    }

    pub fn trace(&self, a: &Matrix<R::Elem>) -> R::Elem {
        (0..self.dim).fold(self.ring.zero(), |acc, i| self.ring.add(&acc, a.get(i, i)))
    }
}

impl<R: Ring> Algebra for MatrixAlgebra<R> {
    type Scalars = R;
    type Elem = Matrix<R::Elem>;
    fn scalars(&self) -> &R {
        &self.ring
    }
    fn zero(&self) -> Self::Elem {
        self.from_fn(|_, _| self.ring.zero())
    }
    fn one(&self) -> Self::Elem {
        self.scalar(&self.ring.one())
    }
    fn scalar(&self, c: &R::Elem) -> Self::Elem {
        self.from_fn(|r, k| if r == k { c.clone() } else { self.ring.zero() })
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Matrix {
            dim: self.dim,
            entries: a.entries.iter().zip(&b.entries).map(|(x, y)| self.ring.add(x, y)).collect(),
        }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Matrix { dim: self.dim, entries: a.entries.iter().map(|x| self.ring.neg(x)).collect() }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let d = self.dim;
        let mut out = self.zero();
        for r in 0..d {
            for k in 0..d {
                let x = &a.entries[r * d + k];
                if self.ring.is_zero(x) {
                    continue;
                }
                for c in 0..d {
                    let y = &b.entries[k * d + c];
                    if !self.ring.is_zero(y) {
                        let slot = &mut out.entries[r * d + c];
                        *slot = self.ring.add(slot, &self.ring.mul(x, y));
                    }
                }
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.entries.iter().all(|x| self.ring.is_zero(x))
    }
    fn scale(&self, c: &R::Elem, a: &Self::Elem) -> Self::Elem {
        Matrix { dim: self.dim, entries: a.entries.iter().map(|x| self.ring.mul(c, x)).collect() }
    }
}
