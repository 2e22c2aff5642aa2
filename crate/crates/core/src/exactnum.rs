//! Exact coefficient rings: integers, rationals, prime fields and rational
//! function fields over a prime field.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt as Integer;
pub use num_rational::BigRational as Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumError {
    NotPrime(u64),
    DuplicateVariable(String),
    UnknownVariable(String),
}

impl fmt::Display for NumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumError::NotPrime(p) => write!(f, "{p} is not a prime"),
            NumError::DuplicateVariable(v) => write!(f, "duplicate variable name {v}"),
            NumError::UnknownVariable(v) => write!(f, "unknown variable {v}"),
        }
    }
}

/// A commutative coefficient ring. The context value carries everything an
/// element needs (modulus, variable names), so elements stay small.
pub trait Ring: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_integer(&self, n: &Integer) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, if it exists.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn is_field(&self) -> bool;
    /// Human readable rendering.
    fn render(&self, a: &Self::Elem) -> String;

    /// Named transcendental generators of the ring, if it has any.
    fn symbol_names(&self) -> Vec<String> {
        Vec::new()
    }

    fn symbol(&self, _name: &str) -> Option<Self::Elem> {
        None
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_integer(&Integer::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
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
}

/// The integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = Integer;
    fn zero(&self) -> Integer {
        Integer::zero()
    }
    fn one(&self) -> Integer {
        Integer::one()
    }
    fn from_integer(&self, n: &Integer) -> Integer {
        n.clone()
    }
    fn add(&self, a: &Integer, b: &Integer) -> Integer {
        a + b
    }
    fn neg(&self, a: &Integer) -> Integer {
        -a
    }
    fn sub(&self, a: &Integer, b: &Integer) -> Integer {
        a - b
    }
    fn mul(&self, a: &Integer, b: &Integer) -> Integer {
        a * b
    }
    fn is_zero(&self, a: &Integer) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Integer) -> Option<Integer> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_field(&self) -> bool {
        false
    }
    fn render(&self, a: &Integer) -> String {
        a.to_string()
    }
}

/// The rationals, always in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalField;

impl Ring for RationalField {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_integer(&self, n: &Integer) -> Rational {
        Rational::from_integer(n.clone())
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_field(&self) -> bool {
        true
    }
    fn render(&self, a: &Rational) -> String {
        a.to_string()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p. Residues are stored as `u64` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

/// Largest modulus accepted; keeps products of residues inside `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

pub fn make_prime_field(p: u64) -> Result<PrimeField, NumError> {
    if p >= MAX_PRIME || !is_prime(p) {
        return Err(NumError::NotPrime(p));
    }
    Ok(PrimeField { p })
}

impl PrimeField {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Ring for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_integer(&self, n: &Integer) -> u64 {
        let r = n.mod_floor(&Integer::from(self.p));
        r.to_u64().expect("residue fits")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn is_field(&self) -> bool {
        true
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Sparse multivariate polynomial over F_p with a fixed number of
/// variables. Terms are kept sorted by descending lexicographic exponent
/// (variable 0 most significant); the first term is the leading term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FpPoly {
    terms: Vec<(Vec<u32>, u64)>,
}

impl FpPoly {
    pub fn zero() -> Self {
        FpPoly { terms: Vec::new() }
    }

    pub fn constant(c: u64, nvars: usize) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            FpPoly { terms: vec![(vec![0; nvars], c)] }
        }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        FpPoly { terms: vec![(e, 1)] }
    }

    pub fn terms(&self) -> &[(Vec<u32>, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.iter().all(|&x| x == 0)
    }

    fn from_map(map: BTreeMap<Vec<u32>, u64>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.reverse();
        FpPoly { terms }
    }

    fn add(&self, other: &Self, f: &PrimeField) -> Self {
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            let slot = map.entry(e.clone()).or_insert(0);
            *slot = f.add(slot, c);
        }
        Self::from_map(map)
    }

    fn scale(&self, c: u64, f: &PrimeField) -> Self {
        if c == 0 {
            return Self::zero();
        }
        FpPoly { terms: self.terms.iter().map(|(e, d)| (e.clone(), f.mul(d, &c))).collect() }
    }

    fn neg(&self, f: &PrimeField) -> Self {
        self.scale(f.neg(&1), f)
    }

    fn sub(&self, other: &Self, f: &PrimeField) -> Self {
        self.add(&other.neg(f), f)
    }

    fn mul(&self, other: &Self, f: &PrimeField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = map.entry(e).or_insert(0);
                *slot = f.add(slot, &f.mul(c1, c2));
            }
        }
        Self::from_map(map)
    }

    fn mul_term(&self, e: &[u32], c: u64, f: &PrimeField) -> Self {
        FpPoly {
            terms: self
                .terms
                .iter()
                .map(|(e1, c1)| (e1.iter().zip(e).map(|(a, b)| a + b).collect(), f.mul(c1, &c)))
                .collect(),
        }
    }

    fn leading_coeff(&self) -> u64 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    fn monic(&self, f: &PrimeField) -> Self {
        match self.terms.first() {
            None => Self::zero(),
            Some((_, c)) => self.scale(f.inv(c).unwrap(), f),
        }
    }

    /// Exact division; `None` if `other` does not divide `self`.
    fn div_exact(&self, other: &Self, f: &PrimeField) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (lm, lc) = &other.terms[0];
        let lc_inv = f.inv(lc).unwrap();
        let mut rem = self.clone();
        let mut quot: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            if rm.iter().zip(lm).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = rm.iter().zip(lm).map(|(a, b)| a - b).collect();
            let c = f.mul(&rc, &lc_inv);
            rem = rem.sub(&other.mul_term(&e, c, f), f);
            quot.insert(e, c);
        }
        Some(Self::from_map(quot))
    }

    fn deg_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    fn top_var(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|(e, _)| e.iter().rposition(|&x| x > 0))
            .max()
    }

    /// Coefficients with respect to variable `v`, keyed by degree.
    fn coeffs_in(&self, v: usize) -> BTreeMap<u32, FpPoly> {
        let mut maps: BTreeMap<u32, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            maps.entry(e[v]).or_default().insert(e2, *c);
        }
        maps.into_iter().map(|(d, m)| (d, Self::from_map(m))).collect()
    }

    fn content_in(&self, v: usize, f: &PrimeField, nvars: usize) -> FpPoly {
        let mut g = FpPoly::zero();
        for (_, c) in self.coeffs_in(v) {
            g = poly_gcd(&g, &c, f, nvars);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn lc_in(&self, v: usize) -> FpPoly {
        let d = self.deg_in(v);
        self.coeffs_in(v).remove(&d).unwrap_or_default()
    }

    fn var_power(v: usize, d: u32, nvars: usize) -> Vec<u32> {
        let mut e = vec![0; nvars];
        e[v] = d;
        e
    }

    fn prem(&self, g: &Self, v: usize, f: &PrimeField, nvars: usize) -> Self {
        let dg = g.deg_in(v);
        let lcg = g.lc_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.deg_in(v) >= dg {
            let dr = r.deg_in(v);
            let lcr = r.lc_in(v);
            let shift = Self::var_power(v, dr - dg, nvars);
            let t = g.mul(&lcr, f).mul_term(&shift, 1, f);
            r = lcg.mul(&r, f).sub(&t, f);
        }
        r
    }
}

/// Monic gcd of two polynomials (primitive remainder sequences, recursive
/// in the number of variables).
pub fn poly_gcd(a: &FpPoly, b: &FpPoly, f: &PrimeField, nvars: usize) -> FpPoly {
    if a.is_zero() {
        return b.monic(f);
    }
    if b.is_zero() {
        return a.monic(f);
    }
    if a.is_constant() || b.is_constant() {
        return FpPoly::constant(1, nvars);
    }
    let v = a.top_var().max(b.top_var()).unwrap();
    let (da, db) = (a.deg_in(v), b.deg_in(v));
    if da == 0 {
        return poly_gcd(a, &b.content_in(v, f, nvars), f, nvars);
    }
    if db == 0 {
        return poly_gcd(&a.content_in(v, f, nvars), b, f, nvars);
    }
    let ca = a.content_in(v, f, nvars);
    let cb = b.content_in(v, f, nvars);
    let c = poly_gcd(&ca, &cb, f, nvars);
    let pa = a.div_exact(&ca, f).unwrap();
    let pb = b.div_exact(&cb, f).unwrap();
    let (mut p, mut q) = if da >= db { (pa, pb) } else { (pb, pa) };
    let g = loop {
        let r = p.prem(&q, v, f, nvars);
        if r.is_zero() {
            break q;
        }
        if r.deg_in(v) == 0 {
            break FpPoly::constant(1, nvars);
        }
        let cr = r.content_in(v, f, nvars);
        p = q;
        q = r.div_exact(&cr, f).unwrap();
    };
    let cg = g.content_in(v, f, nvars);
    let g = g.div_exact(&cg, f).unwrap();
    c.mul(&g, f).monic(f)
}

/// A reduced rational function: gcd(num, den) = 1 and den monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: FpPoly,
    pub den: FpPoly,
}

/// The rational function field F_p(v_1, ..., v_r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracField {
    base: PrimeField,
    vars: Vec<String>,
}

pub fn make_fraction_field(base: PrimeField, vars: &[&str]) -> Result<FracField, NumError> {
    let mut names: Vec<String> = Vec::new();
    for v in vars {
        if names.iter().any(|n| n == v) {
            return Err(NumError::DuplicateVariable(v.to_string()));
        }
        names.push(v.to_string());
    }
    Ok(FracField { base, vars: names })
}

impl FracField {
    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, name: &str) -> Result<RatFunc, NumError> {
        let i = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| NumError::UnknownVariable(name.to_string()))?;
        Ok(self.gen(i))
    }

    pub fn gen(&self, i: usize) -> RatFunc {
        RatFunc { num: FpPoly::var(i, self.nvars()), den: self.one_poly() }
    }

    fn one_poly(&self) -> FpPoly {
        FpPoly::constant(1, self.nvars())
    }

    pub fn from_polys(&self, num: FpPoly, den: FpPoly) -> RatFunc {
        self.normalize(num, den)
    }

    fn normalize(&self, num: FpPoly, den: FpPoly) -> RatFunc {
        let f = &self.base;
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return self.zero();
        }
        if den.is_constant() {
            let c = f.inv(&den.leading_coeff()).unwrap();
            return RatFunc { num: num.scale(c, f), den: self.one_poly() };
        }
        let g = poly_gcd(&num, &den, f, self.nvars());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g, f).unwrap(), den.div_exact(&g, f).unwrap())
        };
        let c = f.inv(&den.leading_coeff()).unwrap();
        RatFunc { num: num.scale(c, f), den: den.scale(c, f) }
    }

    fn render_poly(&self, p: &FpPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in p.terms() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], d)),
                }
            }
            let mono = factors.join("*");
            parts.push(match (mono.is_empty(), *c) {
                (true, c) => c.to_string(),
                (false, 1) => mono,
                (false, c) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl Ring for FracField {
    type Elem = RatFunc;
    fn zero(&self) -> RatFunc {
        RatFunc { num: FpPoly::zero(), den: self.one_poly() }
    }
    fn one(&self) -> RatFunc {
        RatFunc { num: self.one_poly(), den: self.one_poly() }
    }
    fn from_integer(&self, n: &Integer) -> RatFunc {
        let c = self.base.from_integer(n);
        RatFunc { num: FpPoly::constant(c, self.nvars()), den: self.one_poly() }
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.base;
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            let num = a.num.add(&b.num, f);
            if a.den.is_one() {
                return RatFunc { num, den: a.den.clone() };
            }
            return self.normalize(num, a.den.clone());
        }
        let num = a.num.mul(&b.den, f).add(&b.num.mul(&a.den, f), f);
        self.normalize(num, a.den.mul(&b.den, f))
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: a.num.neg(&self.base), den: a.den.clone() }
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.base;
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        let num = a.num.mul(&b.num, f);
        if a.den.is_one() && b.den.is_one() {
            return RatFunc { num, den: a.den.clone() };
        }
        self.normalize(num, a.den.mul(&b.den, f))
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_zero() {
            None
        } else {
            Some(self.normalize(a.den.clone(), a.num.clone()))
        }
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn is_field(&self) -> bool {
        true
    }
    fn symbol_names(&self) -> Vec<String> {
        self.vars.clone()
    }
    fn symbol(&self, name: &str) -> Option<RatFunc> {
        self.var(name).ok()
    }
    fn render(&self, a: &RatFunc) -> String {
        let n = self.render_poly(&a.num);
        if a.den.is_one() {
            n
        } else {
            format!("({})/({})", n, self.render_poly(&a.den))
        }
    }
}
