//! Property tests for the ring, polynomial, Witt, normal-form and
//! expression layers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use bweyl::algebra::{Algebra, Scalars};
use bweyl::balgebra::BAlgebra;
use bweyl::exactnum::{
    make_fraction_field, make_prime_field, FracField, Integer, IntegerRing, PrimeField, Rational, RationalField, Ring,
};
use bweyl::exprlang::{evaluate, parse, print_b, print_symbol, Block, Expr};
use bweyl::polyring::{eval_ordered, lex_compare, ExpVec, Poly};
use bweyl::symbolalg::{make_symbol_algebra, SymbolAlgebra};
use bweyl::witt::{divisors, IndexSet, WittOps, WittVector};
use proptest::prelude::*;

fn expvec(exps: &[u32]) -> ExpVec {
    ExpVec::from_pairs(exps.iter().enumerate().map(|(i, &e)| (i as u32 + 1, e)))
}

fn arb_expvec(len: usize, max: u32) -> impl Strategy<Value = ExpVec> {
    prop::collection::vec(0..=max, len).prop_map(|v| expvec(&v))
}

fn arb_int_poly(len: usize, max_exp: u32, terms: usize) -> impl Strategy<Value = Poly<Integer>> {
    prop::collection::vec((arb_expvec(len, max_exp), arb_expvec(len, max_exp), -3i64..=3), 0..=terms).prop_map(|ts| {
        let mut p = Poly::zero();
        for (x, y, c) in ts {
            p.add_term(&IntegerRing, (x, y), Integer::from(c));
        }
        p
    })
}

fn f3ab() -> &'static FracField {
    static K: OnceLock<FracField> = OnceLock::new();
    K.get_or_init(|| make_fraction_field(make_prime_field(3).unwrap(), &["a", "b"]).unwrap())
}

/// Small rational functions in a, b over F_3, including inverses.
fn arb_ratfunc() -> impl Strategy<Value = <FracField as Ring>::Elem> {
    (prop::collection::vec((0u32..=2, 0u32..=2, 0u64..3), 1..=3), any::<bool>()).prop_map(|(ts, invert)| {
        let k = f3ab();
        let (a, b) = (k.var("a").unwrap(), k.var("b").unwrap());
        let mut acc = k.zero();
        for (i, j, c) in ts {
            let t = k.mul(&k.mul(&k.pow(&a, i as u64), &k.pow(&b, j as u64)), &k.from_i64(c as i64));
            acc = k.add(&acc, &t);
        }
        match k.inv(&acc) {
            Some(inv) if invert => inv,
            _ => acc,
        }
    })
}

fn ring_axioms<R: Ring>(r: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<(), TestCaseError> {
    prop_assert_eq!(r.add(a, b), r.add(b, a));
    prop_assert_eq!(r.mul(a, b), r.mul(b, a));
    prop_assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)));
    prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
    prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
    prop_assert!(r.is_zero(&r.add(a, &r.neg(a))));
    prop_assert_eq!(r.mul(a, &r.one()), a.clone());
    prop_assert_eq!(r.add(a, &r.zero()), a.clone());
    if r.is_field() && !r.is_zero(a) {
        prop_assert!(r.is_one(&r.mul(a, &r.inv(a).unwrap())));
    }
    Ok(())
}

proptest! {
    #[test]
    fn prime_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7, 2_147_483_647]), a: u64, b: u64, c: u64) {
        let f = make_prime_field(p).unwrap();
        ring_axioms(&f, &(a % p), &(b % p), &(c % p))?;
        prop_assert_eq!(f.from_i64(-(a as i64 % 1000)), f.neg(&f.from_i64(a as i64 % 1000)));
    }

    #[test]
    fn rational_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let q = |n: i64, m: i64| Rational::new(n.into(), m.into());
        ring_axioms(&RationalField, &q(a, b), &q(c, d), &q(a + c, b * d))?;
    }

    #[test]
    fn fraction_field_axioms(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
        ring_axioms(f3ab(), &a, &b, &c)?;
    }

    #[test]
    fn frobenius_is_additive(u in arb_ratfunc(), v in arb_ratfunc()) {
        let k = f3ab();
        prop_assert_eq!(k.pow(&k.add(&u, &v), 3), k.add(&k.pow(&u, 3), &k.pow(&v, 3)));
    }

    #[test]
    fn lex_matches_dense_oracle(u in prop::collection::vec(0u32..3, 4), v in prop::collection::vec(0u32..3, 4), w in prop::collection::vec(0u32..3, 4)) {
        let dense = |s: &[u32], t: &[u32]| s.iter().zip(t).find(|(a, b)| a != b).map_or(Ordering::Equal, |(a, b)| a.cmp(b));
        let (a, b, c) = (expvec(&u), expvec(&v), expvec(&w));
        prop_assert_eq!(lex_compare(&a, &b), dense(&u, &v));
        prop_assert_eq!(lex_compare(&a, &b), lex_compare(&b, &a).reverse());
        prop_assert_eq!(lex_compare(&a, &b) == Ordering::Equal, a == b);
        if lex_compare(&a, &b) != Ordering::Greater && lex_compare(&b, &c) != Ordering::Greater {
            prop_assert_ne!(lex_compare(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn x_degree_is_additive(p in arb_int_poly(3, 2, 4), q in arb_int_poly(3, 2, 4)) {
        let pq = p.mul(&IntegerRing, &q);
        match (p.deg_x(), q.deg_x()) {
            (Some(a), Some(b)) => prop_assert_eq!(pq.deg_x(), Some(a.add(&b))),
            _ => prop_assert!(pq.is_zero()),
        }
    }
}

fn universal_z() -> &'static BAlgebra<IntegerRing> {
    static B: OnceLock<BAlgebra<IntegerRing>> = OnceLock::new();
    B.get_or_init(|| BAlgebra::new(IntegerRing, IndexSet::first(4), IndexSet::first(4)))
}

fn symbol_f2() -> &'static SymbolAlgebra<PrimeField> {
    static A: OnceLock<SymbolAlgebra<PrimeField>> = OnceLock::new();
    A.get_or_init(|| make_symbol_algebra(make_prime_field(2).unwrap(), 2, 2, vec![1, 0], vec![1, 1]).unwrap())
}

fn symbol_generic() -> &'static SymbolAlgebra<FracField> {
    static A: OnceLock<SymbolAlgebra<FracField>> = OnceLock::new();
    A.get_or_init(|| {
        let k = make_fraction_field(make_prime_field(3).unwrap(), &["a0", "b0"]).unwrap();
        let (a, b) = (k.var("a0").unwrap(), k.var("b0").unwrap());
        make_symbol_algebra(k, 1, 1, vec![a], vec![b]).unwrap()
    })
}

/// Elements of the universal algebra as sums of ordered monomials.
fn arb_b_elem() -> impl Strategy<Value = Poly<Integer>> {
    arb_int_poly(4, 1, 3).prop_map(|p| universal_z().reduce_poly(p))
}

fn arb_symbol_f2() -> impl Strategy<Value = Poly<u64>> {
    let alg = symbol_f2();
    prop::collection::vec(0..alg.dim(), 1..=4).prop_map(move |ks| {
        ks.into_iter().fold(Poly::zero(), |acc, k| alg.add(&acc, &alg.basis_element(k)))
    })
}

fn arb_symbol_generic() -> impl Strategy<Value = Poly<<FracField as Ring>::Elem>> {
    let alg = symbol_generic();
    prop::collection::vec((0..alg.dim(), 0usize..3), 1..=3).prop_map(move |ts| {
        let k = alg.field();
        let coefs = [k.one(), k.var("a0").unwrap(), k.add(&k.var("b0").unwrap(), &k.one())];
        ts.into_iter()
            .fold(Poly::zero(), |acc, (i, c)| alg.add(&acc, &alg.scale(&coefs[c], &alg.basis_element(i))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn universal_product_is_associative(u in arb_b_elem(), v in arb_b_elem(), w in arb_b_elem()) {
        let b = universal_z();
        prop_assert_eq!(b.mul(&b.mul(&u, &v), &w), b.mul(&u, &b.mul(&v, &w)));
    }

    #[test]
    fn universal_jacobi(u in arb_b_elem(), v in arb_b_elem(), w in arb_b_elem()) {
        let b = universal_z();
        let j = b.sum(&[
            b.commutator(&u, &b.commutator(&v, &w)),
            b.commutator(&v, &b.commutator(&w, &u)),
            b.commutator(&w, &b.commutator(&u, &v)),
        ]);
        prop_assert!(j.is_zero());
    }

    #[test]
    fn symbol_product_is_associative(u in arb_symbol_f2(), v in arb_symbol_f2(), w in arb_symbol_f2()) {
        let a = symbol_f2();
        let left = a.mul(&a.mul(&u, &v), &w);
        prop_assert!(a.is_reduced(&left));
        prop_assert_eq!(left, a.mul(&u, &a.mul(&v, &w)));
    }

    #[test]
    fn generic_symbol_product_is_associative(u in arb_symbol_generic(), v in arb_symbol_generic(), w in arb_symbol_generic()) {
        let a = symbol_generic();
        prop_assert_eq!(a.mul(&a.mul(&u, &v), &w), a.mul(&u, &a.mul(&v, &w)));
    }

    #[test]
    fn eval_is_linear_and_splits_x_from_y(p in arb_int_poly(2, 2, 3), q in arb_int_poly(2, 2, 3), px in arb_int_poly(2, 2, 3), qy in arb_int_poly(2, 2, 3)) {
        let b = universal_z();
        let xs: BTreeMap<u32, _> = (1..=2).map(|d| (d, b.x(d))).collect();
        let ys: BTreeMap<u32, _> = (1..=2).map(|d| (d, b.y(d))).collect();
        let ev = |p: &Poly<Integer>| eval_ordered(b, p, |c| b.from_integer(c), &xs, &ys).unwrap();
        let z = IntegerRing;
        prop_assert_eq!(ev(&p.add(&z, &q)), b.add(&ev(&p), &ev(&q)));
        let px = px.map_monos(&z, |(x, _)| (x.clone(), ExpVec::new()));
        let qy = qy.map_monos(&z, |(_, y)| (ExpVec::new(), y.clone()));
        prop_assert_eq!(ev(&px.mul(&z, &qy)), b.mul(&ev(&px), &ev(&qy)));
    }
}

fn d6() -> IndexSet {
    IndexSet::divisors_of(6)
}

fn arb_witt_z() -> impl Strategy<Value = WittVector<Integer>> {
    prop::collection::vec(-3i64..=3, 4).prop_map(|v| WittVector::new(d6(), v.into_iter().map(Integer::from).collect()))
}

fn arb_witt_fp(p: u64) -> impl Strategy<Value = WittVector<u64>> {
    prop::collection::vec(0..p, 3).prop_map(move |v| WittVector::new(IndexSet::ptypical(p, 3), v))
}

fn witt_axioms<R: Ring>(
    r: &R,
    ops: &WittOps<'_, Scalars<R>>,
    x: &WittVector<R::Elem>,
    y: &WittVector<R::Elem>,
    z: &WittVector<R::Elem>,
) -> Result<(), TestCaseError> {
    let set = x.set().clone();
    let add = |a: &WittVector<R::Elem>, b: &WittVector<R::Elem>| ops.add(a, b).unwrap();
    let mul = |a: &WittVector<R::Elem>, b: &WittVector<R::Elem>| ops.mul(a, b).unwrap();
    prop_assert_eq!(add(x, y), add(y, x));
    prop_assert_eq!(add(&add(x, y), z), add(x, &add(y, z)));
    prop_assert_eq!(mul(x, y), mul(y, x));
    prop_assert_eq!(mul(&mul(x, y), z), mul(x, &mul(y, z)));
    prop_assert_eq!(mul(x, &add(y, z)), add(&mul(x, y), &mul(x, z)));
    prop_assert_eq!(add(x, &ops.neg(x)), ops.zero(&set));
    prop_assert_eq!(mul(x, &ops.one(&set)), x.clone());
    prop_assert_eq!(add(x, &ops.zero(&set)), x.clone());
    for &n in set.indices() {
        let g = |v: &WittVector<R::Elem>| ops.ghost(v, n).unwrap();
        prop_assert_eq!(g(&add(x, y)), r.add(&g(x), &g(y)));
        prop_assert_eq!(g(&mul(x, y)), r.mul(&g(x), &g(y)));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn witt_axioms_universal_z(x in arb_witt_z(), y in arb_witt_z(), z in arb_witt_z()) {
        let sc = Scalars(IntegerRing);
        witt_axioms(&sc.0, &WittOps::new(&sc), &x, &y, &z)?;
    }

    #[test]
    fn witt_axioms_f2(x in arb_witt_fp(2), y in arb_witt_fp(2), z in arb_witt_fp(2)) {
        let sc = Scalars(make_prime_field(2).unwrap());
        witt_axioms(&sc.0, &WittOps::new(&sc), &x, &y, &z)?;
    }

    #[test]
    fn witt_axioms_f3(x in arb_witt_fp(3), y in arb_witt_fp(3), z in arb_witt_fp(3)) {
        let sc = Scalars(make_prime_field(3).unwrap());
        witt_axioms(&sc.0, &WittOps::new(&sc), &x, &y, &z)?;
    }

    #[test]
    fn frobenius_after_verschiebung_is_multiplication(x in arb_witt_z(), k in prop::sample::select(vec![2u32, 3, 5])) {
        let sc = Scalars(IntegerRing);
        let ops = WittOps::new(&sc);
        let fv = ops.frobenius(&ops.verschiebung(&x, k), k);
        prop_assert_eq!(fv, ops.times_integer(&x, k as u64));
    }

    #[test]
    fn frobenius_after_verschiebung_ptypical(x2 in arb_witt_fp(2), x3 in arb_witt_fp(3)) {
        for (p, x) in [(2u64, x2.clone()), (3, x3.clone())] {
            let sc = Scalars(make_prime_field(p).unwrap());
            let ops = WittOps::new(&sc);
            let v = ops.verschiebung_into(&x, p as u32, x.set());
            prop_assert_eq!(ops.frobenius(&v, p as u32), ops.times_integer(&x, p));
        }
    }

    #[test]
    fn truncation_commutes_with_operations(
        gens in prop::collection::btree_set(1u32..=12, 1..=3),
        sub in prop::collection::btree_set(1u32..=12, 0..=2),
        k in 1u32..=4,
        seed in prop::collection::vec(-2i64..=2, 36),
    ) {
        let close = |s: &BTreeSet<u32>| s.iter().flat_map(|&n| divisors(n)).collect::<BTreeSet<u32>>();
        let p = IndexSet::truncation(close(&gens)).unwrap();
        prop_assert!(IndexSet::truncation(p.quotient(k).indices().iter().copied()).is_ok());
        let q_set: BTreeSet<u32> = close(&sub).into_iter().filter(|n| p.contains(*n)).collect();
        let q = IndexSet::truncation(q_set).unwrap();
        let sc = Scalars(IntegerRing);
        let ops = WittOps::new(&sc);
        let mk = |off: usize| WittVector::new(p.clone(), p.indices().iter().enumerate().map(|(i, _)| Integer::from(seed[off + i])).collect());
        let (x, y) = (mk(0), mk(18));
        let t = |v: &WittVector<Integer>| v.truncate(&q).unwrap();
        prop_assert_eq!(t(&ops.add(&x, &y).unwrap()), ops.add(&t(&x), &t(&y)).unwrap());
        prop_assert_eq!(t(&ops.mul(&x, &y).unwrap()), ops.mul(&t(&x), &t(&y)).unwrap());
    }
}

/// Random expressions; with `wide` unset every generator exists in a
/// symbol algebra with m = n = 1.
fn arb_expr(wide: bool) -> impl Strategy<Value = Expr> {
    let top = if wide { 12 } else { 0 };
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| Expr::Int(n.into())),
        prop::sample::select(vec!["a0", "b0"]).prop_map(|s| Expr::Scalar(s.to_string())),
        (any::<bool>(), 0u32..=top, any::<bool>()).prop_map(|(y, index, universal)| Expr::Gen {
            block: if y { Block::Y } else { Block::X },
            index: index + universal as u32,
            universal,
        }),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Commutator(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printer_inverts_parser(e in arb_expr(true)) {
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn evaluation_is_a_homomorphism(e in arb_expr(false), f in arb_expr(false)) {
        let a = symbol_generic();
        let (u, v) = (evaluate(a, &e).unwrap(), evaluate(a, &f).unwrap());
        let b = |x: &Expr| Box::new(x.clone());
        prop_assert_eq!(evaluate(a, &Expr::Add(b(&e), b(&f))).unwrap(), a.add(&u, &v));
        prop_assert_eq!(evaluate(a, &Expr::Sub(b(&e), b(&f))).unwrap(), a.sub(&u, &v));
        prop_assert_eq!(evaluate(a, &Expr::Mul(b(&e), b(&f))).unwrap(), a.mul(&u, &v));
        prop_assert_eq!(evaluate(a, &Expr::Commutator(b(&e), b(&f))).unwrap(), a.commutator(&u, &v));
        prop_assert_eq!(evaluate(a, &Expr::Pow(b(&e), 3)).unwrap(), a.pow(&u, 3));
    }

    #[test]
    fn printed_elements_parse_back(u in arb_b_elem(), s in arb_symbol_generic()) {
        let b = universal_z();
        prop_assert_eq!(evaluate(b, &parse(&print_b(b, &u)).unwrap()).unwrap(), u);
        let a = symbol_generic();
        prop_assert_eq!(evaluate(a, &parse(&print_symbol(a, &s)).unwrap()).unwrap(), s);
    }
}
