//! The algebras B_{P,Q}(R): normal-form multiplication in the basis
//! `x^i y^j`, the structure polynomials c_{m,n}, and structural checks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use spin::{Lazy, Mutex, RwLock};

use crate::algebra::{Algebra, Opposite};
use crate::exactnum::{Integer, IntegerRing, Rational, RationalField, Ring};
use crate::polyring::{eval_ordered, CommPolys, ExpVec, Mono, Poly};
use crate::relations::{check_b_relations, check_commute, RelationFailure};
use crate::witt::{divisors, proper_divisors, IndexSet, WittOps, WittVector};

/// Power reduction `v^bound = value` for a central generator `v`.
#[derive(Debug, Clone)]
pub struct Reduction<E> {
    pub bound: u32,
    pub value: E,
}

/// B_{P,Q}(R), optionally modulo central power relations on generators.
pub struct BAlgebra<R: Ring> {
    ring: R,
    xset: IndexSet,
    yset: IndexSet,
    ctab: RwLock<BTreeMap<(u32, u32), Arc<Poly<R::Elem>>>>,
    xred: BTreeMap<u32, Reduction<R::Elem>>,
    yred: BTreeMap<u32, Reduction<R::Elem>>,
    memo: RwLock<BTreeMap<(ExpVec, ExpVec), Arc<Poly<R::Elem>>>>,
}

impl<R: Ring> core::fmt::Debug for BAlgebra<R> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BAlgebra")
            .field("ring", &self.ring)
            .field("xset", &self.xset)
            .field("yset", &self.yset)
            .finish()
    }
}

impl<R: Ring> BAlgebra<R> {
    /// B_{P,Q}(R) with structure polynomials mapped in from the integral table.
    pub fn new(ring: R, xset: IndexSet, yset: IndexSet) -> Self {
        Self::with_reductions(ring, xset, yset, BTreeMap::new(), BTreeMap::new())
    }

    pub fn with_reductions(
        ring: R,
        xset: IndexSet,
        yset: IndexSet,
        xred: BTreeMap<u32, Reduction<R::Elem>>,
        yred: BTreeMap<u32, Reduction<R::Elem>>,
    ) -> Self {
        let mut ctab = BTreeMap::new();
        for &m in xset.indices() {
            for &n in yset.indices() {
                let c = c_table().get(m, n);
                ctab.insert((m, n), Arc::new(c.map_coeffs(&ring, |z| ring.from_integer(z))));
            }
        }
        BAlgebra { ring, xset, yset, ctab: RwLock::new(ctab), xred, yred, memo: RwLock::new(BTreeMap::new()) }
    }

    fn bare(ring: R) -> Self {
        BAlgebra {
            ring,
            xset: IndexSet::universal([]),
            yset: IndexSet::universal([]),
            ctab: RwLock::new(BTreeMap::new()),
            xred: BTreeMap::new(),
            yred: BTreeMap::new(),
            memo: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn xset(&self) -> &IndexSet {
        &self.xset
    }

    pub fn yset(&self) -> &IndexSet {
        &self.yset
    }

    pub fn x_reductions(&self) -> &BTreeMap<u32, Reduction<R::Elem>> {
        &self.xred
    }

    pub fn y_reductions(&self) -> &BTreeMap<u32, Reduction<R::Elem>> {
        &self.yred
    }

    /// c_{m,n} with coefficients in R.
    pub fn c(&self, m: u32, n: u32) -> Arc<Poly<R::Elem>> {
        self.ctab
            .read()
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| panic!("c_{{{m},{n}}} is not available in this algebra"))
    }

    pub fn x(&self, m: u32) -> Poly<R::Elem> {
        assert!(self.xset.contains(m), "x_{m} is not a generator");
        self.reduce_poly(Poly::x_var(&self.ring, m))
    }

    pub fn y(&self, n: u32) -> Poly<R::Elem> {
        assert!(self.yset.contains(n), "y_{n} is not a generator");
        self.reduce_poly(Poly::y_var(&self.ring, n))
    }

    pub fn x_vector(&self) -> WittVector<Poly<R::Elem>> {
        WittVector::new(self.xset.clone(), self.xset.indices().iter().map(|&m| self.x(m)).collect())
    }

    pub fn y_vector(&self) -> WittVector<Poly<R::Elem>> {
        WittVector::new(self.yset.clone(), self.yset.indices().iter().map(|&n| self.y(n)).collect())
    }

    fn reduce_block(
        &self,
        v: &ExpVec,
        red: &BTreeMap<u32, Reduction<R::Elem>>,
        coef: &mut R::Elem,
    ) -> ExpVec {
        if red.is_empty() {
            return v.clone();
        }
        let mut out = v.clone();
        for (i, e) in v.iter() {
            if let Some(r) = red.get(&i) {
                if e >= r.bound {
                    let q = e / r.bound;
                    *coef = self.ring.mul(coef, &self.ring.pow(&r.value, q as u64));
                    out.set(i, e % r.bound);
                }
            }
        }
        out
    }

    fn push_reduced(&self, out: &mut Poly<R::Elem>, x: ExpVec, y: ExpVec, c: R::Elem) {
        let mut c = c;
        let x = self.reduce_block(&x, &self.xred, &mut c);
        let y = self.reduce_block(&y, &self.yred, &mut c);
        out.add_term(&self.ring, (x, y), c);
    }

    pub fn reduce_poly(&self, p: Poly<R::Elem>) -> Poly<R::Elem> {
        if self.xred.is_empty() && self.yred.is_empty() {
            return p;
        }
        let mut out = Poly::zero();
        for ((x, y), c) in p.terms() {
            self.push_reduced(&mut out, x.clone(), y.clone(), c.clone());
        }
        out
    }

    /// Normal form of `y^j x^i`.
    pub fn swap(&self, j: &ExpVec, i: &ExpVec) -> Arc<Poly<R::Elem>> {
        let r = &self.ring;
        if j.is_zero() || i.is_zero() {
            let mut out = Poly::zero();
            self.push_reduced(&mut out, i.clone(), j.clone(), r.one());
            return Arc::new(out);
        }
        let key = (j.clone(), i.clone());
        if let Some(hit) = self.memo.read().get(&key) {
            return hit.clone();
        }
        let mut out = Poly::zero();
        if j.total_degree() == 1 {
            // y_e x_d x^rest = x_d (y_e x^rest) + c_{d,e} x^rest
            let (e, _) = j.first().unwrap();
            let (d, _) = i.first().unwrap();
            let rest = i.checked_sub(&ExpVec::single(d, 1)).unwrap();
            let xd = ExpVec::single(d, 1);
            for ((a, b), c) in self.swap(j, &rest).terms() {
                self.push_reduced(&mut out, a.add(&xd), b.clone(), c.clone());
            }
            for ((a, b), c) in self.c(d, e).terms() {
                for ((a2, b2), c2) in self.swap(b, &rest).terms() {
                    self.push_reduced(&mut out, a.add(a2), b2.clone(), r.mul(c, c2));
                }
            }
        } else {
            // y^j' (y_e x^i) with e the largest index in j
            let (e, _) = j.last().unwrap();
            let ye = ExpVec::single(e, 1);
            let jrest = j.checked_sub(&ye).unwrap();
            for ((a, b), c) in self.swap(&ye, i).terms() {
                for ((a2, b2), c2) in self.swap(&jrest, a).terms() {
                    self.push_reduced(&mut out, a2.clone(), b2.add(b), r.mul(c, c2));
                }
            }
        }
        let out = Arc::new(out);
        self.memo.write().insert(key, out.clone());
        out
    }

    /// Product of the normal-form monomials `x^a y^b` and `x^c y^d`.
    pub fn mul_monos(&self, u: &Mono, v: &Mono) -> Poly<R::Elem> {
        let mut out = Poly::zero();
        for ((a, b), c) in self.swap(&u.1, &v.0).terms() {
            self.push_reduced(&mut out, u.0.add(a), b.add(&v.1), c.clone());
        }
        out
    }

    pub fn nf_mul(&self, u: &Poly<R::Elem>, v: &Poly<R::Elem>) -> Poly<R::Elem> {
        let r = &self.ring;
        let mut out = Poly::zero();
        for (mu, cu) in u.terms() {
            for (mv, cv) in v.terms() {
                let c = r.mul(cu, cv);
                for (m, d) in self.mul_monos(mu, mv).terms() {
                    out.add_term(r, m.clone(), r.mul(&c, d));
                }
            }
        }
        out
    }

    pub fn nf_commutator(&self, u: &Poly<R::Elem>, v: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.nf_mul(u, v).sub(&self.ring, &self.nf_mul(v, u))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().len()
    }
}

impl<R: Ring> Algebra for BAlgebra<R> {
    type Scalars = R;
    type Elem = Poly<R::Elem>;
    fn scalars(&self) -> &R {
        &self.ring
    }
    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }
    fn one(&self) -> Self::Elem {
        Poly::one(&self.ring)
    }
    fn scalar(&self, c: &R::Elem) -> Self::Elem {
        Poly::constant(&self.ring, c.clone())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(&self.ring, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.ring)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.nf_mul(a, b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn scale(&self, c: &R::Elem, a: &Self::Elem) -> Self::Elem {
        a.scale(&self.ring, c)
    }
}

/// The coefficient a_k of `prod_d (1 - X_d s^d)^{-1}`: the sum of all
/// monomials of weight k, each with coefficient 1. Placed in the Y-block
/// when `y` is set.
pub fn lambda_coeff(k: u32, y: bool) -> Poly<Integer> {
    fn parts(k: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for d in (1..=max.min(k)).rev() {
            cur.push(d);
            parts(k - d, d, cur, out);
            cur.pop();
        }
    }
    let r = IntegerRing;
    let mut all = Vec::new();
    parts(k, k, &mut Vec::new(), &mut all);
    let mut out = Poly::zero();
    for p in all {
        let e = ExpVec::from_pairs(p.into_iter().map(|d| (d, 1)));
        let mono = if y { (ExpVec::new(), e) } else { (e, ExpVec::new()) };
        out.add_term(&r, mono, Integer::one());
    }
    out
}

/// Process-wide table of c_{m,n} over Z, filled through the Lambda-series
/// identity `b_n a_m = sum_r a_{m-r} b_{n-r}` by increasing `m + n`.
pub struct CTable {
    engine: BAlgebra<IntegerRing>,
    build: Mutex<()>,
}

static CTABLE: Lazy<CTable> = Lazy::new(|| CTable { engine: BAlgebra::bare(IntegerRing), build: Mutex::new(()) });

pub fn c_table() -> &'static CTable {
    &CTABLE
}

impl CTable {
    pub fn get(&self, m: u32, n: u32) -> Arc<Poly<Integer>> {
        assert!(m >= 1 && n >= 1, "c_{{m,n}} needs m, n >= 1");
        if let Some(c) = self.engine.ctab.read().get(&(m, n)) {
            return c.clone();
        }
        let _guard = self.build.lock();
        for s in 2..=m + n {
            for m1 in 1..s {
                let n1 = s - m1;
                if m1 > m || n1 > n || self.engine.ctab.read().contains_key(&(m1, n1)) {
                    continue;
                }
                let c = Arc::new(self.solve(m1, n1));
                self.engine.ctab.write().insert((m1, n1), c);
            }
        }
        self.engine.c(m, n)
    }

    fn solve(&self, m: u32, n: u32) -> Poly<Integer> {
        let r = IntegerRing;
        let e = &self.engine;
        let xm = Poly::x_var(&r, m);
        let yn = Poly::y_var(&r, n);
        let alpha = lambda_coeff(m, false).sub(&r, &xm);
        let beta = lambda_coeff(n, true).sub(&r, &yn);
        let known = e
            .nf_mul(&yn, &alpha)
            .add(&r, &e.nf_mul(&beta, &xm))
            .add(&r, &e.nf_mul(&beta, &alpha));
        let mut rhs = Poly::zero();
        for k in 0..=m.min(n) {
            rhs = rhs.add(&r, &lambda_coeff(m - k, false).mul(&r, &lambda_coeff(n - k, true)));
        }
        rhs.sub(&r, &xm.mul(&r, &yn)).sub(&r, &known)
    }
}

/// c_{m,n} by the Lambda-series route.
pub fn compute_c(m: u32, n: u32) -> Poly<Integer> {
    (*c_table().get(m, n)).clone()
}

/// Product in the Weyl algebra on `z` (X-block) and `t` (Y-block) with
/// `[t_n, z_m] = delta_{mn}`, on normal-ordered polynomials.
fn weyl_mul(u: &Poly<Rational>, v: &Poly<Rational>) -> Poly<Rational> {
    let q = RationalField;
    let mut out = Poly::zero();
    for ((a, b), cu) in u.terms() {
        for ((c, d), cv) in v.terms() {
            // t^b z^c = sum_k prod_i C(b_i, k_i) c_i!/(c_i-k_i)! z^{c-k} t^{b-k}
            let common: Vec<(u32, u32, u32)> =
                b.iter().filter_map(|(i, bi)| (c.get(i) > 0).then(|| (i, bi, c.get(i)))).collect();
            let mut ks: Vec<(ExpVec, Integer)> = vec![(ExpVec::new(), Integer::one())];
            for &(i, bi, ci) in &common {
                let mut next = Vec::new();
                for (kv, w) in &ks {
                    for k in 0..=bi.min(ci) {
                        let mut kv2 = kv.clone();
                        kv2.set(i, k);
                        next.push((kv2, w * binom(bi, k) * falling(ci, k)));
                    }
                }
                ks = next;
            }
            let base = q.mul(cu, cv);
            for (kv, w) in ks {
                let x = a.add(&c.checked_sub(&kv).unwrap());
                let y = b.checked_sub(&kv).unwrap().add(d);
                out.add_term(&q, (x, y), q.mul(&base, &Rational::from_integer(w)));
            }
        }
    }
    out
}

fn binom(n: u32, k: u32) -> Integer {
    let mut acc = Integer::one();
    for i in 0..k {
        acc = acc * Integer::from(n - i) / Integer::from(i + 1);
    }
    acc
}

fn falling(n: u32, k: u32) -> Integer {
    (0..k).fold(Integer::one(), |acc, i| acc * Integer::from(n - i))
}

/// c_{m,n} over Q through the Weyl algebra: with `z_m = w_m(x)` and
/// `t_n = w_n(y)/n` the relations become `[t_n, z_m] = delta_{mn}`.
pub fn compute_c_weyl_oracle(m: u32, n: u32) -> Poly<Rational> {
    let q = RationalField;
    let qr = |k: u32| Rational::from_integer(Integer::from(k));
    // x_d as polynomials in z, y_e as polynomials in t.
    let mut xs: BTreeMap<u32, Poly<Rational>> = BTreeMap::new();
    let mut ys: BTreeMap<u32, Poly<Rational>> = BTreeMap::new();
    for d in divisors(m) {
        let mut p = Poly::x_var(&q, d);
        for e in proper_divisors(d) {
            p = p.sub(&q, &xs[&e].pow(&q, (d / e) as u64).scale(&q, &qr(e)));
        }
        xs.insert(d, p.scale(&q, &Rational::new(Integer::one(), Integer::from(d))));
    }
    for d in divisors(n) {
        let mut p = Poly::y_var(&q, d).scale(&q, &qr(d));
        for e in proper_divisors(d) {
            p = p.sub(&q, &ys[&e].pow(&q, (d / e) as u64).scale(&q, &qr(e)));
        }
        ys.insert(d, p.scale(&q, &Rational::new(Integer::one(), Integer::from(d))));
    }
    let (xm, yn) = (&xs[&m], &ys[&n]);
    let comm = weyl_mul(yn, xm).sub(&q, &weyl_mul(xm, yn));
    // back to x, y: z_d = w_d(x), t_e = w_e(y)/e
    let alg = CommPolys(q);
    let zimg: BTreeMap<u32, Poly<Rational>> = comm
        .x_support()
        .into_iter()
        .map(|d| (d, crate::witt::ghost_poly(d, false).map_coeffs(&q, |c| Rational::from_integer(c.clone()))))
        .collect();
    let timg: BTreeMap<u32, Poly<Rational>> = comm
        .y_support()
        .into_iter()
        .map(|e| {
            let w = crate::witt::ghost_poly(e, true).map_coeffs(&q, |c| Rational::from_integer(c.clone()));
            (e, w.scale(&q, &Rational::new(Integer::one(), Integer::from(e))))
        })
        .collect();
    eval_ordered(&alg, &comm, |c| alg.scalar(c), &zimg, &timg).expect("all variables substituted")
}

/// Whether `c` has X-support in D*(m) and Y-support in D*(n).
pub fn c_support_ok<E: Clone + PartialEq>(c: &Poly<E>, m: u32, n: u32) -> bool {
    c.x_support().iter().all(|&d| d < m && m % d == 0) && c.y_support().iter().all(|&e| e < n && n % e == 0)
}

/// Elements of a tensor product of B-type algebras over a common ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElem<E> {
    terms: BTreeMap<Vec<Mono>, E>,
}

impl<E: Clone + PartialEq> TensorElem<E> {
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Mono>, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Tensor product of at most three B-type algebras.
pub struct TensorAlgebra<R: Ring> {
    ring: R,
    factors: Vec<Arc<BAlgebra<R>>>,
}

impl<R: Ring> TensorAlgebra<R> {
    pub fn new(factors: Vec<Arc<BAlgebra<R>>>) -> Self {
        assert!(!factors.is_empty() && factors.len() <= 3, "one to three factors");
        let ring = factors[0].ring().clone();
        TensorAlgebra { ring, factors }
    }

    pub fn factors(&self) -> &[Arc<BAlgebra<R>>] {
        &self.factors
    }

    fn unit_key(&self) -> Vec<Mono> {
        vec![(ExpVec::new(), ExpVec::new()); self.factors.len()]
    }

    fn push(&self, out: &mut TensorElem<R::Elem>, key: Vec<Mono>, c: R::Elem) {
        let r = &self.ring;
        if r.is_zero(&c) {
            return;
        }
        match out.terms.get_mut(&key) {
            Some(slot) => {
                let s = r.add(slot, &c);
                if r.is_zero(&s) {
                    out.terms.remove(&key);
                } else {
                    *slot = s;
                }
            }
            None => {
                out.terms.insert(key, c);
            }
        }
    }

    /// `1 ⊗ .. ⊗ u ⊗ .. ⊗ 1` with `u` in factor `k`.
    pub fn embed(&self, k: usize, u: &Poly<R::Elem>) -> TensorElem<R::Elem> {
        let mut out = TensorElem { terms: BTreeMap::new() };
        for (m, c) in u.terms() {
            let mut key = self.unit_key();
            key[k] = m.clone();
            self.push(&mut out, key, c.clone());
        }
        out
    }

    pub fn embed_vector(&self, k: usize, v: &WittVector<Poly<R::Elem>>) -> WittVector<TensorElem<R::Elem>> {
        v.map(|u| self.embed(k, u))
    }
}

impl<R: Ring> Algebra for TensorAlgebra<R> {
    type Scalars = R;
    type Elem = TensorElem<R::Elem>;
    fn scalars(&self) -> &R {
        &self.ring
    }
    fn zero(&self) -> Self::Elem {
        TensorElem { terms: BTreeMap::new() }
    }
    fn one(&self) -> Self::Elem {
        self.scalar(&self.ring.one())
    }
    fn scalar(&self, c: &R::Elem) -> Self::Elem {
        let mut out = self.zero();
        self.push(&mut out, self.unit_key(), c.clone());
        out
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.clone();
        for (k, c) in b.terms.iter() {
            self.push(&mut out, k.clone(), c.clone());
        }
        out
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        TensorElem { terms: a.terms.iter().map(|(k, c)| (k.clone(), self.ring.neg(c))).collect() }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        let mut out = self.zero();
        for (ka, ca) in a.terms.iter() {
            for (kb, cb) in b.terms.iter() {
                let mut partial: Vec<(Vec<Mono>, R::Elem)> = vec![(Vec::new(), r.mul(ca, cb))];
                for (f, alg) in self.factors.iter().enumerate() {
                    let prod = alg.mul_monos(&ka[f], &kb[f]);
                    let mut next = Vec::new();
                    for (key, c) in &partial {
                        for (m, d) in prod.terms() {
                            let mut k2 = key.clone();
                            k2.push(m.clone());
                            next.push((k2, r.mul(c, d)));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    self.push(&mut out, k, c);
                }
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }
}

fn entries<E: Clone>(v: &WittVector<E>) -> Vec<(u32, E)> {
    v.set().indices().iter().copied().zip(v.comps().iter().cloned()).collect()
}

/// B(x,y)^op = B_{Q,P}(y,x) = B(x,-y) = B(-x,y), checked as relation
/// satisfaction inside the opposite algebra.
pub fn opposite_check<R: Ring>(b: &BAlgebra<R>) -> Result<(), RelationFailure> {
    let op = Opposite(b);
    let ops = WittOps::new(b);
    let (x, y) = (b.x_vector(), b.y_vector());
    check_b_relations(&op, &entries(&y), &entries(&x)).map_err(|e| e.context("(y, x) in the opposite"))?;
    check_b_relations(&op, &entries(&x), &entries(&ops.neg(&y))).map_err(|e| e.context("(x, -y) in the opposite"))?;
    check_b_relations(&op, &entries(&ops.neg(&x)), &entries(&y)).map_err(|e| e.context("(-x, y) in the opposite"))
}

/// B(x,y) = B(x+a, y+b) for scalar Witt vectors `a`, `b`.
pub fn shift_check<R: Ring>(
    b: &BAlgebra<R>,
    a: &WittVector<R::Elem>,
    bv: &WittVector<R::Elem>,
) -> Result<(), RelationFailure> {
    let ops = WittOps::new(b);
    let a = a.map(|c| b.scalar(c));
    let bv = bv.map(|c| b.scalar(c));
    let x2 = ops.add(&b.x_vector(), &a).map_err(|_| RelationFailure::new("shift vector has the wrong index set"))?;
    let y2 = ops.add(&b.y_vector(), &bv).map_err(|_| RelationFailure::new("shift vector has the wrong index set"))?;
    check_b_relations(b, &entries(&x2), &entries(&y2))
}

/// In B(x,y) ⊗ B(z,t): the families (x+z, y) and (z, t-y) satisfy the
/// relations of a tensor product of two B algebras.
pub fn lemma_2_21_check<R: Ring>(b: Arc<BAlgebra<R>>) -> Result<(), RelationFailure> {
    if b.xset().is_empty() && b.yset().is_empty() {
        return Ok(());
    }
    let t = TensorAlgebra::new(vec![b.clone(), b.clone()]);
    let ops = WittOps::new(&t);
    let x = t.embed_vector(0, &b.x_vector());
    let y = t.embed_vector(0, &b.y_vector());
    let z = t.embed_vector(1, &b.x_vector());
    let tt = t.embed_vector(1, &b.y_vector());
    let x1 = ops.add(&x, &z).unwrap();
    let y2 = ops.sub(&tt, &y).unwrap();
    check_b_relations(&t, &entries(&x1), &entries(&y)).map_err(|e| e.context("family (x+z, y)"))?;
    check_b_relations(&t, &entries(&z), &entries(&y2)).map_err(|e| e.context("family (z, t-y)"))?;
    let f1: Vec<_> = x1.comps().iter().chain(y.comps()).cloned().collect();
    let f2: Vec<_> = z.comps().iter().chain(y2.comps()).cloned().collect();
    check_commute(&t, &f1, &f2).map_err(|e| e.context("across the two families"))
}

/// In B(x1,y1) ⊗ B(x2,y2) ⊗ B(x3,y3) with P = Q: the families
/// (x_a, y_a - x_b x_c) satisfy the relations of three commuting B algebras.
pub fn lemma_2_22_check<R: Ring>(b: Arc<BAlgebra<R>>) -> Result<(), RelationFailure> {
    assert_eq!(b.xset(), b.yset(), "the triple factorization needs P = Q");
    if b.xset().is_empty() {
        return Ok(());
    }
    let t = TensorAlgebra::new(vec![b.clone(), b.clone(), b.clone()]);
    let ops = WittOps::new(&t);
    let xs: Vec<_> = (0..3).map(|k| t.embed_vector(k, &b.x_vector())).collect();
    let ys: Vec<_> = (0..3).map(|k| t.embed_vector(k, &b.y_vector())).collect();
    let mut fams = Vec::new();
    for a in 0..3 {
        let (p, q) = ((a + 1) % 3, (a + 2) % 3);
        let prod = ops.mul(&xs[p], &xs[q]).unwrap();
        let ya = ops.sub(&ys[a], &prod).unwrap();
        check_b_relations(&t, &entries(&xs[a]), &entries(&ya))
            .map_err(|e| e.context(&format!("family {}", a + 1)))?;
        fams.push(xs[a].comps().iter().chain(ya.comps()).cloned().collect::<Vec<_>>());
    }
    for a in 0..3 {
        for c in a + 1..3 {
            check_commute(&t, &fams[a], &fams[c]).map_err(|e| e.context(&format!("families {} and {}", a + 1, c + 1)))?;
        }
    }
    Ok(())
}

/// Universal branch: inside B_{P,P}(R), the entries `x_m` with `k ∤ m`
/// commute with `F_k y`, and `(V_{k^-1} x, F_k y)` satisfy the B relations
/// over P/k.
pub fn frobenius_subalgebra_check<R: Ring>(b: &BAlgebra<R>, k: u32) -> Result<(), RelationFailure> {
    let ops = WittOps::new(b);
    let x = b.x_vector();
    let fy = ops.frobenius(&b.y_vector(), k);
    let outside: Vec<_> = x.set().indices().iter().filter(|&&m| m % k != 0).map(|&m| b.x(m)).collect();
    check_commute(b, &outside, fy.comps()).map_err(|e| e.context("x_m with k not dividing m against F_k y"))?;
    let vx = crate::witt::v_inverse(&x, k);
    check_b_relations(b, &entries(&vx), &entries(&fy)).map_err(|e| e.context("(V_{k^-1} x, F_k y)"))
}

/// Characteristic p branch on p-typical B_{m,n}: the families (x', y') and
/// (F^l x'', F^k y'') satisfy the relations of B_{k,l} ⊗ B_{m-k,n-l}.
pub fn frobenius_factorization_check<R: Ring>(b: &BAlgebra<R>, k: usize, l: usize) -> Result<(), RelationFailure> {
    let p = b.ring().characteristic();
    assert!(p > 0, "characteristic p only");
    let (m, n) = (b.xset().len(), b.yset().len());
    assert!(k <= m && l <= n);
    let xi = |i: usize| b.xset().indices()[i];
    let yi = |j: usize| b.yset().indices()[j];
    let pk = crate::witt::ipow(p, k as u32);
    let pl = crate::witt::ipow(p, l as u32);
    let x1: Vec<_> = (0..k).map(|i| (xi(i), b.x(xi(i)))).collect();
    let y1: Vec<_> = (0..l).map(|j| (yi(j), b.y(yi(j)))).collect();
    let x2: Vec<_> = (k..m).map(|i| (xi(i - k), b.pow(&b.x(xi(i)), pl))).collect();
    let y2: Vec<_> = (l..n).map(|j| (yi(j - l), b.pow(&b.y(yi(j)), pk))).collect();
    check_b_relations(b, &x1, &y1).map_err(|e| e.context("(x', y')"))?;
    check_b_relations(b, &x2, &y2).map_err(|e| e.context("(F^l x'', F^k y'')"))?;
    let f1: Vec<_> = x1.iter().chain(&y1).map(|e| e.1.clone()).collect();
    let f2: Vec<_> = x2.iter().chain(&y2).map(|e| e.1.clone()).collect();
    check_commute(b, &f1, &f2).map_err(|e| e.context("across the factors"))
}

/// Truncated bivariate series in `s`, `t` with coefficients in the Weyl
/// algebra `Q<X,Y>/([Y,X] = a)`, normal-ordered as `X^i Y^j`.
struct WeylSeries {
    a: Rational,
    order: u32,
}

type Series = BTreeMap<(u32, u32), BTreeMap<(u32, u32), Rational>>;

impl WeylSeries {
    fn mono_mul(&self, (i, j): (u32, u32), (k, l): (u32, u32)) -> Vec<((u32, u32), Rational)> {
        // Y^j X^k = sum_r C(j,r) k!/(k-r)! a^r X^{k-r} Y^{j-r}
        (0..=j.min(k))
            .map(|r| {
                let w = Rational::from_integer(binom(j, r) * falling(k, r));
                let ar = num_traits::pow(self.a.clone(), r as usize);
                ((i + k - r, j - r + l), w * ar)
            })
            .collect()
    }

    fn mul(&self, u: &Series, v: &Series) -> Series {
        let mut out: Series = BTreeMap::new();
        for (&(s1, t1), cu) in u {
            for (&(s2, t2), cv) in v {
                if s1 + s2 + t1 + t2 > self.order {
                    continue;
                }
                let slot = out.entry((s1 + s2, t1 + t2)).or_default();
                for (&m1, c1) in cu {
                    for (&m2, c2) in cv {
                        for (m, w) in self.mono_mul(m1, m2) {
                            *slot.entry(m).or_insert_with(Rational::zero) += c1 * c2 * w;
                        }
                    }
                }
            }
        }
        for coeffs in out.values_mut() {
            coeffs.retain(|_, c| !c.is_zero());
        }
        out.retain(|_, c| !c.is_empty());
        out
    }

    /// exp of `scale * s^ds t^dt * X^gx Y^gy` for a single-monomial exponent.
    fn exp(&self, ds: u32, dt: u32, mono: (u32, u32), scale: Rational) -> Series {
        let mut out: Series = BTreeMap::new();
        let mut fact = Integer::one();
        let mut k = 0u32;
        while k * (ds + dt) <= self.order {
            if k > 0 {
                fact *= Integer::from(k);
            }
            let c = num_traits::pow(scale.clone(), k as usize) / Rational::from_integer(fact.clone());
            let mut inner = BTreeMap::new();
            inner.insert((mono.0 * k, mono.1 * k), c);
            out.insert((ds * k, dt * k), inner);
            k += 1;
            if ds + dt == 0 {
                break;
            }
        }
        out
    }
}

/// `exp(tY) exp(sX) = exp(sX) exp(tY) exp(a s t)` up to total degree `order`.
pub fn exp_commutation_series_check(order: u32, a: &Rational) -> bool {
    let w = WeylSeries { a: a.clone(), order };
    let one = Rational::one();
    let ex = w.exp(1, 0, (1, 0), one.clone());
    let ey = w.exp(0, 1, (0, 1), one);
    let eat = w.exp(1, 1, (0, 0), a.clone());
    let lhs = w.mul(&ey, &ex);
    let rhs = w.mul(&w.mul(&ex, &ey), &eat);
    lhs == rhs
}
