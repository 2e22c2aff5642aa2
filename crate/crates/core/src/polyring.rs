//! Multivariate polynomials in an X-block and a Y-block of variables, with
//! exponents indexed by positive integers.
//!
//! The same term table doubles as the normal form `x^i y^j` of elements of
//! the noncommutative algebras in [`crate::balgebra`]: every monomial is read
//! with its X-part to the left of its Y-part.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::algebra::Algebra;
use crate::exactnum::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    MissingVariable { block: char, index: u32 },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::MissingVariable { block, index } => {
                write!(f, "no image given for {block}_{index}")
            }
        }
    }
}

/// Finitely supported exponent vector: sorted `(index, exponent)` pairs with
/// positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpVec(Vec<(u32, u32)>);

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(i, e)| (i, e))).finish()
    }
}

impl ExpVec {
    pub fn new() -> Self {
        ExpVec(Vec::new())
    }

    pub fn single(index: u32, exp: u32) -> Self {
        if exp == 0 {
            ExpVec::new()
        } else {
            ExpVec(alloc::vec![(index, exp)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, e) in pairs {
            *map.entry(i).or_insert(0) += e;
        }
        ExpVec(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: u32) -> u32 {
        match self.0.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn set(&mut self, index: u32, exp: u32) {
        match self.0.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(k) => {
                if exp == 0 {
                    self.0.remove(k);
                } else {
                    self.0[k].1 = exp;
                }
            }
            Err(k) => {
                if exp > 0 {
                    self.0.insert(k, (index, exp));
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&(i, _)| i)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        ExpVec::from_pairs(self.iter().chain(other.iter()))
    }

    /// `self - other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &ExpVec) -> Option<ExpVec> {
        let mut out = self.clone();
        for (i, e) in other.iter() {
            let have = out.get(i);
            if have < e {
                return None;
            }
            out.set(i, have - e);
        }
        Some(out)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn first(&self) -> Option<(u32, u32)> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<(u32, u32)> {
        self.0.last().copied()
    }

    /// Relabel indices through `f` (which must be injective and monotone).
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> ExpVec {
        ExpVec(self.0.iter().map(|&(i, e)| (f(i), e)).collect())
    }
}

/// The lexicographic order on exponent vectors: `i < j` when, at the
/// smallest index where they differ, `i` has the smaller exponent.
pub fn lex_compare(a: &ExpVec, b: &ExpVec) -> Ordering {
    let (mut ia, mut ib) = (a.0.iter(), b.0.iter());
    let (mut na, mut nb) = (ia.next(), ib.next());
    loop {
        match (na, nb) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(ka, ea)), Some(&(kb, eb))) => {
                if ka < kb {
                    return Ordering::Greater;
                }
                if kb < ka {
                    return Ordering::Less;
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
                na = ia.next();
                nb = ib.next();
            }
        }
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A monomial `X^i Y^j`.
pub type Mono = (ExpVec, ExpVec);

/// Polynomial (or normal-form element) with coefficients of type `E`. Zero
/// coefficients are never stored; iteration is in increasing lex order.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<E> {
    terms: BTreeMap<Mono, E>,
}

impl<E: fmt::Debug> fmt::Debug for Poly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.iter()).finish()
    }
}

impl<E> Default for Poly<E> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &E)> {
        self.terms.iter()
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, r: &R, x: &ExpVec, y: &ExpVec) -> E {
        self.terms
            .get(&(x.clone(), y.clone()))
            .cloned()
            .unwrap_or_else(|| r.zero())
    }

    pub fn monomial<R: Ring<Elem = E>>(r: &R, x: ExpVec, y: ExpVec, c: E) -> Self {
        let mut p = Self::zero();
        p.add_term(r, (x, y), c);
        p
    }

    pub fn constant<R: Ring<Elem = E>>(r: &R, c: E) -> Self {
        Self::monomial(r, ExpVec::new(), ExpVec::new(), c)
    }

    pub fn one<R: Ring<Elem = E>>(r: &R) -> Self {
        Self::constant(r, r.one())
    }

    pub fn x_var<R: Ring<Elem = E>>(r: &R, index: u32) -> Self {
        Self::monomial(r, ExpVec::single(index, 1), ExpVec::new(), r.one())
    }

    pub fn y_var<R: Ring<Elem = E>>(r: &R, index: u32) -> Self {
        Self::monomial(r, ExpVec::new(), ExpVec::single(index, 1), r.one())
    }

    /// Accumulate `c * mono` into `self`.
    pub fn add_term<R: Ring<Elem = E>>(&mut self, r: &R, mono: Mono, c: E) {
        if r.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(slot) => {
                let s = r.add(slot, &c);
                if r.is_zero(&s) {
                    self.terms.remove(&mono);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let (mut big, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in small.terms.iter() {
            big.add_term(r, m.clone(), c.clone());
        }
        big
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), r.neg(c))).collect() }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        self.add(r, &other.neg(r))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        let mut out = Self::zero();
        for (m, d) in self.terms.iter() {
            out.add_term(r, m.clone(), r.mul(c, d));
        }
        out
    }

    /// Commutative product.
    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((x1, y1), c1) in self.terms.iter() {
            for ((x2, y2), c2) in other.terms.iter() {
                out.add_term(r, (x1.add(x2), y1.add(y2)), r.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(r);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(r, &base);
            }
        }
        acc
    }

    pub fn map_coeffs<S: Ring>(&self, s: &S, f: impl Fn(&E) -> S::Elem) -> Poly<S::Elem> {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(s, m.clone(), f(c));
        }
        out
    }

    /// Rebuild with every monomial transformed; colliding monomials add.
    pub fn map_monos<R: Ring<Elem = E>>(&self, r: &R, f: impl Fn(&Mono) -> Mono) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(r, f(m), c.clone());
        }
        out
    }

    /// Largest X-exponent present; `None` stands for the degree of zero.
    pub fn deg_x(&self) -> Option<ExpVec> {
        self.terms.keys().map(|(x, _)| x).max().cloned()
    }

    pub fn deg_y(&self) -> Option<ExpVec> {
        self.terms.keys().map(|(_, y)| y).max().cloned()
    }

    pub fn x_support(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|(x, _)| x.support()).collect()
    }

    pub fn y_support(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|(_, y)| y.support()).collect()
    }

    pub fn constant_term<R: Ring<Elem = E>>(&self, r: &R) -> E {
        self.coeff(r, &ExpVec::new(), &ExpVec::new())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(x, y)| x.is_zero() && y.is_zero())
    }

    /// Swap the roles of the X- and Y-blocks.
    pub fn swap_blocks(&self) -> Self {
        Poly { terms: self.terms.iter().map(|((x, y), c)| ((y.clone(), x.clone()), c.clone())).collect() }
    }
}

/// Evaluate `p` by sending `X_d` to `xs[d]` and `Y_e` to `ys[e]`, with each
/// monomial evaluated as `coef * x-part * y-part` in that order.
pub fn eval_ordered<A: Algebra, E: Clone + PartialEq>(
    alg: &A,
    p: &Poly<E>,
    coef: impl Fn(&E) -> A::Elem,
    xs: &BTreeMap<u32, A::Elem>,
    ys: &BTreeMap<u32, A::Elem>,
) -> Result<A::Elem, PolyError> {
    let mut powers: BTreeMap<(bool, u32, u32), A::Elem> = BTreeMap::new();
    let mut power = |is_y: bool, idx: u32, e: u32| -> Result<A::Elem, PolyError> {
        if let Some(v) = powers.get(&(is_y, idx, e)) {
            return Ok(v.clone());
        }
        let base = if is_y { ys.get(&idx) } else { xs.get(&idx) };
        let base = base.ok_or(PolyError::MissingVariable { block: if is_y { 'Y' } else { 'X' }, index: idx })?;
        let v = alg.pow(base, e as u64);
        powers.insert((is_y, idx, e), v.clone());
        Ok(v)
    };
    let mut acc = alg.zero();
    for ((x, y), c) in p.terms() {
        let mut term = coef(c);
        for (i, e) in x.iter() {
            term = alg.mul(&term, &power(false, i, e)?);
        }
        for (i, e) in y.iter() {
            term = alg.mul(&term, &power(true, i, e)?);
        }
        acc = alg.add(&acc, &term);
    }
    Ok(acc)
}

/// Commutative polynomials over `R` as an algebra (used to compose
/// polynomials by substitution).
#[derive(Debug, Clone)]
pub struct CommPolys<R: Ring>(pub R);

impl<R: Ring> Algebra for CommPolys<R> {
    type Scalars = R;
    type Elem = Poly<R::Elem>;
    fn scalars(&self) -> &R {
        &self.0
    }
    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }
    fn one(&self) -> Self::Elem {
        Poly::one(&self.0)
    }
    fn scalar(&self, c: &R::Elem) -> Self::Elem {
        Poly::constant(&self.0, c.clone())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(&self.0, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.0)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(&self.0, b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn scale(&self, c: &R::Elem, a: &Self::Elem) -> Self::Elem {
        a.scale(&self.0, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{make_prime_field, Integer, IntegerRing};

    fn ev(pairs: &[(u32, u32)]) -> ExpVec {
        ExpVec::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&ev(&[]), &ev(&[])), Ordering::Equal);
        // (1,0) vs (0,5) over {1,2}
        assert_eq!(lex_compare(&ev(&[(1, 1)]), &ev(&[(2, 5)])), Ordering::Greater);
        // (2,1) vs (2,3)
        assert_eq!(lex_compare(&ev(&[(1, 2), (2, 1)]), &ev(&[(1, 2), (2, 3)])), Ordering::Less);
    }

    #[test]
    fn degrees() {
        let r = IntegerRing;
        let z: Poly<Integer> = Poly::zero();
        assert_eq!(z.deg_x(), None);
        let x1 = Poly::x_var(&r, 1);
        let y1 = Poly::y_var(&r, 1);
        let p = x1.mul(&r, &x1).mul(&r, &y1).add(&r, &Poly::x_var(&r, 2));
        assert_eq!(p.deg_x(), Some(ev(&[(1, 2)])));
        let q = x1.pow(&r, 3);
        assert_eq!(q.deg_y(), Some(ExpVec::new()));
    }

    #[test]
    fn arithmetic_examples() {
        let r = IntegerRing;
        let x1 = Poly::x_var(&r, 1);
        let one = Poly::one(&r);
        let p = x1.add(&r, &one).add(&r, &one.neg(&r));
        assert_eq!(p, x1);
        let f2 = make_prime_field(2).unwrap();
        let s = Poly::x_var(&f2, 1).add(&f2, &Poly::y_var(&f2, 1));
        let sq = s.mul(&f2, &s);
        let expect = Poly::x_var(&f2, 1).pow(&f2, 2).add(&f2, &Poly::y_var(&f2, 1).pow(&f2, 2));
        assert_eq!(sq, expect);
    }

    #[test]
    fn eval_examples() {
        let r = IntegerRing;
        let alg = CommPolys(r);
        let p = Poly::x_var(&r, 1).add(&r, &Poly::one(&r));
        let mut xs = BTreeMap::new();
        xs.insert(1, Poly::zero());
        let v = eval_ordered(&alg, &p, |c| alg.scalar(c), &xs, &BTreeMap::new()).unwrap();
        assert_eq!(v, Poly::one(&r));
        let missing = eval_ordered(&alg, &Poly::y_var(&r, 3), |c| alg.scalar(c), &xs, &BTreeMap::new());
        assert_eq!(missing, Err(PolyError::MissingVariable { block: 'Y', index: 3 }));
    }
}
