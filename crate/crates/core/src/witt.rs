//! Universal and p-typical Witt vectors over truncation sets.
//!
//! Positions are always addressed by their embedded index in N*: the
//! p-typical position k is the index p^k. The integral polynomials for sum,
//! product, negation and Frobenius are obtained from the ghost equations by
//! triangular solving over Q and cached in a process-wide table.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;
use spin::{Lazy, RwLock};

use crate::algebra::{Algebra, Scalars};
use crate::exactnum::{Integer, IntegerRing, Rational, RationalField, Ring};
use crate::polyring::{eval_ordered, ExpVec, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WittError {
    IndexOutOfSet(u32),
    NotTruncationSet(u32),
    NotASubset,
    ContextMismatch,
    IntegralityViolation,
}

impl fmt::Display for WittError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WittError::IndexOutOfSet(n) => write!(f, "index {n} is not in the index set"),
            WittError::NotTruncationSet(n) => write!(f, "index set is not divisor closed at {n}"),
            WittError::NotASubset => write!(f, "target set is not a subset"),
            WittError::ContextMismatch => write!(f, "index sets differ"),
            WittError::IntegralityViolation => write!(f, "non-integral Witt polynomial"),
        }
    }
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Proper divisors, D*(n).
pub fn proper_divisors(n: u32) -> Vec<u32> {
    (1..n).filter(|d| n % d == 0).collect()
}

pub fn ipow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("power overflow")
}

/// `Some(e)` if `k = p^e`.
pub fn log_p(k: u64, p: u64) -> Option<u32> {
    let (mut k, mut e) = (k, 0);
    while k > 1 {
        if k % p != 0 {
            return None;
        }
        k /= p;
        e += 1;
    }
    (k == 1).then_some(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Universal,
    PTypical(u64),
}

/// A finite set of positive integers indexing Witt components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    kind: IndexKind,
    indices: Vec<u32>,
}

impl IndexSet {
    /// Any finite subset of N*, sorted; zero is dropped.
    pub fn universal(s: impl IntoIterator<Item = u32>) -> Self {
        let mut indices: Vec<u32> = s.into_iter().filter(|&n| n > 0).collect();
        indices.sort_unstable();
        indices.dedup();
        IndexSet { kind: IndexKind::Universal, indices }
    }

    /// A divisor-closed subset of N*.
    pub fn truncation(s: impl IntoIterator<Item = u32>) -> Result<Self, WittError> {
        let set = Self::universal(s);
        for &n in &set.indices {
            for d in proper_divisors(n) {
                if !set.contains(d) {
                    return Err(WittError::NotTruncationSet(n));
                }
            }
        }
        Ok(set)
    }

    /// {1, ..., n}.
    pub fn first(n: u32) -> Self {
        Self::universal(1..=n)
    }

    /// D(n).
    pub fn divisors_of(n: u32) -> Self {
        Self::universal(divisors(n))
    }

    /// {1, p, ..., p^(len-1)}.
    pub fn ptypical(p: u64, len: usize) -> Self {
        let indices = (0..len as u32).map(|k| ipow(p, k) as u32).collect();
        IndexSet { kind: IndexKind::PTypical(p), indices }
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, n: u32) -> bool {
        self.indices.binary_search(&n).is_ok()
    }

    pub fn position(&self, n: u32) -> Option<usize> {
        self.indices.binary_search(&n).ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.indices.iter().all(|&n| other.contains(n))
    }

    /// P/k = {n : kn in P}.
    pub fn quotient(&self, k: u32) -> Self {
        let indices = self.indices.iter().filter(|&&n| n % k == 0).map(|&n| n / k).collect();
        IndexSet { kind: self.kind, indices }
    }

    /// D(k)P = {dn : d | k, n in P}; for p-typical sets, the set one
    /// p-power step longer per factor of p in k.
    pub fn dilate(&self, k: u32) -> Self {
        match self.kind {
            IndexKind::PTypical(p) => {
                let e = log_p(k as u64, p).expect("p-typical dilation by a p-power");
                Self::ptypical(p, self.len() + e as usize)
            }
            IndexKind::Universal => {
                let ds = divisors(k);
                Self::universal(self.indices.iter().flat_map(|&n| ds.iter().map(move |&d| d * n)))
            }
        }
    }
}

/// Cached integral Witt polynomials. `X_d` and `Y_d` sit in the X- and
/// Y-blocks of [`Poly`] at index `d`.
pub struct WittTable {
    sum: RwLock<BTreeMap<u32, Arc<Poly<Integer>>>>,
    prod: RwLock<BTreeMap<u32, Arc<Poly<Integer>>>>,
    neg: RwLock<BTreeMap<u32, Arc<Poly<Integer>>>>,
    frob: RwLock<BTreeMap<(u32, u32), Arc<Poly<Integer>>>>,
}

static TABLE: Lazy<WittTable> = Lazy::new(|| WittTable {
    sum: RwLock::new(BTreeMap::new()),
    prod: RwLock::new(BTreeMap::new()),
    neg: RwLock::new(BTreeMap::new()),
    frob: RwLock::new(BTreeMap::new()),
});

pub fn witt_table() -> &'static WittTable {
    &TABLE
}

fn to_q(p: &Poly<Integer>) -> Poly<Rational> {
    p.map_coeffs(&RationalField, |c| Rational::from_integer(c.clone()))
}

fn to_z(p: &Poly<Rational>) -> Result<Poly<Integer>, WittError> {
    if p.terms().any(|(_, c)| !c.denom().is_one()) {
        return Err(WittError::IntegralityViolation);
    }
    Ok(p.map_coeffs(&IntegerRing, |c| c.numer().clone()))
}

/// w_n as a polynomial in the X-block (`y = false`) or Y-block.
pub fn ghost_poly(n: u32, y: bool) -> Poly<Integer> {
    let r = IntegerRing;
    let mut out = Poly::zero();
    for d in divisors(n) {
        let e = ExpVec::single(d, n / d);
        let mono = if y { (ExpVec::new(), e) } else { (e, ExpVec::new()) };
        out.add_term(&r, mono, Integer::from(d));
    }
    out
}

/// Solve `sum_{d|n} d z_d^{n/d} = target` for `z_n`, given `z_d` for the
/// proper divisors.
fn ghost_solve(
    n: u32,
    target: Poly<Rational>,
    lower: impl Fn(u32) -> Arc<Poly<Integer>>,
) -> Result<Poly<Integer>, WittError> {
    let q = RationalField;
    let mut rest = target;
    for d in proper_divisors(n) {
        let zd = to_q(&lower(d)).pow(&q, (n / d) as u64);
        rest = rest.sub(&q, &zd.scale(&q, &Rational::from_integer(Integer::from(d))));
    }
    let inv = Rational::new(Integer::one(), Integer::from(n));
    to_z(&rest.scale(&q, &inv))
}

impl WittTable {
    fn cached<K: Ord + Copy>(
        map: &RwLock<BTreeMap<K, Arc<Poly<Integer>>>>,
        key: K,
        make: impl FnOnce() -> Poly<Integer>,
    ) -> Arc<Poly<Integer>> {
        if let Some(p) = map.read().get(&key) {
            return p.clone();
        }
        let p = Arc::new(make());
        map.write().entry(key).or_insert(p).clone()
    }

    /// s_n, with `w_n(s) = w_n(X) + w_n(Y)`.
    ///
    /// # Panics
    /// If the solve produces a non-integral coefficient.
    pub fn sum(&self, n: u32) -> Arc<Poly<Integer>> {
        Self::cached(&self.sum, n, || {
            let q = RationalField;
            let target = to_q(&ghost_poly(n, false)).add(&q, &to_q(&ghost_poly(n, true)));
            ghost_solve(n, target, |d| self.sum(d)).expect("s_n integral")
        })
    }

    /// p_n, with `w_n(p) = w_n(X) w_n(Y)`.
    pub fn prod(&self, n: u32) -> Arc<Poly<Integer>> {
        Self::cached(&self.prod, n, || {
            let q = RationalField;
            let target = to_q(&ghost_poly(n, false)).mul(&q, &to_q(&ghost_poly(n, true)));
            ghost_solve(n, target, |d| self.prod(d)).expect("p_n integral")
        })
    }

    /// Negation polynomial in the X-block, `w_n(neg) = -w_n(X)`.
    pub fn neg(&self, n: u32) -> Arc<Poly<Integer>> {
        Self::cached(&self.neg, n, || {
            let q = RationalField;
            let target = to_q(&ghost_poly(n, false)).neg(&q);
            ghost_solve(n, target, |d| self.neg(d)).expect("negation integral")
        })
    }

    /// `(F_k X)_n`, with `w_n(F_k X) = w_{kn}(X)`.
    pub fn frobenius(&self, k: u32, n: u32) -> Arc<Poly<Integer>> {
        Self::cached(&self.frob, (k, n), || {
            let target = to_q(&ghost_poly(k * n, false));
            ghost_solve(n, target, |d| self.frobenius(k, d)).expect("Frobenius integral")
        })
    }
}

/// `w_{kn}(X) - k w_n(V_{k^-1} X)` contains no `X_d` with `k | d`.
pub fn lemma_2_24_check(k: u32, n: u32) -> bool {
    let r = IntegerRing;
    let mut shifted = Poly::zero();
    for d in divisors(n) {
        shifted.add_term(&r, (ExpVec::single(k * d, n / d), ExpVec::new()), Integer::from(d));
    }
    let diff = ghost_poly(k * n, false).sub(&r, &shifted.scale(&r, &Integer::from(k)));
    diff.x_support().iter().all(|d| d % k != 0)
}

/// A Witt vector: one component per index of its set.
#[derive(Debug, Clone, PartialEq)]
pub struct WittVector<E> {
    set: IndexSet,
    comps: Vec<E>,
}

impl<E: Clone> WittVector<E> {
    pub fn new(set: IndexSet, comps: Vec<E>) -> Self {
        assert_eq!(set.len(), comps.len(), "one component per index");
        WittVector { set, comps }
    }

    pub fn set(&self) -> &IndexSet {
        &self.set
    }

    pub fn comps(&self) -> &[E] {
        &self.comps
    }

    pub fn get(&self, n: u32) -> Option<&E> {
        self.set.position(n).map(|k| &self.comps[k])
    }

    pub fn component_map(&self) -> BTreeMap<u32, E> {
        self.set.indices().iter().copied().zip(self.comps.iter().cloned()).collect()
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> WittVector<F> {
        WittVector { set: self.set.clone(), comps: self.comps.iter().map(f).collect() }
    }

    pub fn truncate(&self, q: &IndexSet) -> Result<WittVector<E>, WittError> {
        if !q.is_subset(&self.set) {
            return Err(WittError::NotASubset);
        }
        let comps = q.indices().iter().map(|&n| self.get(n).unwrap().clone()).collect();
        Ok(WittVector { set: q.clone(), comps })
    }
}

/// Witt-vector arithmetic with components in an algebra whose components
/// (within and across the operands) commute.
pub struct WittOps<'a, A: Algebra> {
    pub alg: &'a A,
}

impl<'a, A: Algebra> WittOps<'a, A> {
    pub fn new(alg: &'a A) -> Self {
        WittOps { alg }
    }

    fn eval(&self, p: &Poly<Integer>, x: &BTreeMap<u32, A::Elem>, y: &BTreeMap<u32, A::Elem>) -> A::Elem {
        eval_ordered(self.alg, p, |c| self.alg.from_integer(c), x, y).expect("components present")
    }

    pub fn zero(&self, set: &IndexSet) -> WittVector<A::Elem> {
        WittVector::new(set.clone(), set.indices().iter().map(|_| self.alg.zero()).collect())
    }

    pub fn one(&self, set: &IndexSet) -> WittVector<A::Elem> {
        let comps = set
            .indices()
            .iter()
            .map(|&n| if n == 1 { self.alg.one() } else { self.alg.zero() })
            .collect();
        WittVector::new(set.clone(), comps)
    }

    pub fn ghost(&self, x: &WittVector<A::Elem>, n: u32) -> Result<A::Elem, WittError> {
        if !x.set.contains(n) {
            return Err(WittError::IndexOutOfSet(n));
        }
        Ok(self.eval(&ghost_poly(n, false), &x.component_map(), &BTreeMap::new()))
    }

    fn binary(
        &self,
        x: &WittVector<A::Elem>,
        y: &WittVector<A::Elem>,
        poly: impl Fn(u32) -> Arc<Poly<Integer>>,
    ) -> Result<WittVector<A::Elem>, WittError> {
        if x.set.indices() != y.set.indices() {
            return Err(WittError::ContextMismatch);
        }
        let (xm, ym) = (x.component_map(), y.component_map());
        let comps = x.set.indices().iter().map(|&n| self.eval(&poly(n), &xm, &ym)).collect();
        Ok(WittVector::new(x.set.clone(), comps))
    }

    pub fn add(&self, x: &WittVector<A::Elem>, y: &WittVector<A::Elem>) -> Result<WittVector<A::Elem>, WittError> {
        self.binary(x, y, |n| witt_table().sum(n))
    }

    pub fn mul(&self, x: &WittVector<A::Elem>, y: &WittVector<A::Elem>) -> Result<WittVector<A::Elem>, WittError> {
        self.binary(x, y, |n| witt_table().prod(n))
    }

    pub fn neg(&self, x: &WittVector<A::Elem>) -> WittVector<A::Elem> {
        let xm = x.component_map();
        let comps = x.set.indices().iter().map(|&n| self.eval(&witt_table().neg(n), &xm, &BTreeMap::new())).collect();
        WittVector::new(x.set.clone(), comps)
    }

    pub fn sub(&self, x: &WittVector<A::Elem>, y: &WittVector<A::Elem>) -> Result<WittVector<A::Elem>, WittError> {
        self.add(x, &self.neg(y))
    }

    /// F_k. In characteristic p on a p-typical vector with k a power of p
    /// the result keeps the index set and raises entries to the k-th power;
    /// otherwise it is indexed by P/k and computed from the integral
    /// Frobenius polynomials.
    pub fn frobenius(&self, x: &WittVector<A::Elem>, k: u32) -> WittVector<A::Elem> {
        let ch = self.alg.scalars().characteristic();
        if let IndexKind::PTypical(p) = x.set.kind {
            if ch == p && log_p(k as u64, p).is_some() {
                return x.map(|c| self.alg.pow(c, k as u64));
            }
        }
        let target = x.set.quotient(k);
        let xm = x.component_map();
        let comps = target
            .indices()
            .iter()
            .map(|&n| self.eval(&witt_table().frobenius(k, n), &xm, &BTreeMap::new()))
            .collect();
        WittVector::new(target, comps)
    }

    /// F^e in characteristic p: entries raised to the p^e-th power.
    pub fn frobenius_iter(&self, x: &WittVector<A::Elem>, e: u32) -> WittVector<A::Elem> {
        let p = self.alg.scalars().characteristic();
        assert!(p > 0, "iterated Frobenius needs characteristic p");
        x.map(|c| self.alg.pow(c, ipow(p, e)))
    }

    /// V_k onto `target`: `(V_k x)_n = x_{n/k}` when `k | n`, else 0.
    pub fn verschiebung_into(&self, x: &WittVector<A::Elem>, k: u32, target: &IndexSet) -> WittVector<A::Elem> {
        let comps = target
            .indices()
            .iter()
            .map(|&n| {
                if n % k == 0 {
                    x.get(n / k).cloned().unwrap_or_else(|| self.alg.zero())
                } else {
                    self.alg.zero()
                }
            })
            .collect();
        WittVector::new(target.clone(), comps)
    }

    /// V_k onto its natural index set D(k)P.
    pub fn verschiebung(&self, x: &WittVector<A::Elem>, k: u32) -> WittVector<A::Elem> {
        self.verschiebung_into(x, k, &x.set.dilate(k))
    }

    /// Multiply by the integer `k` (as the Witt vector `k * 1`).
    pub fn times_integer(&self, x: &WittVector<A::Elem>, k: u64) -> WittVector<A::Elem> {
        let mut acc = self.zero(&x.set);
        for _ in 0..k {
            acc = self.add(&acc, x).unwrap();
        }
        acc
    }
}

/// V_{k^-1}: `(x_{kn})_{n in P/k}`.
pub fn v_inverse<E: Clone>(x: &WittVector<E>, k: u32) -> WittVector<E> {
    let target = x.set.quotient(k);
    let comps = target.indices().iter().map(|&n| x.get(k * n).unwrap().clone()).collect();
    WittVector::new(target, comps)
}

/// Witt vectors whose components are scalars of a commutative ring.
pub fn scalar_ops<R: Ring>(r: &Scalars<R>) -> WittOps<'_, Scalars<R>> {
    WittOps::new(r)
}
