//! Verification suites for `bweyl verify`.

use std::str::FromStr;

use bweyl::algebra::Algebra;
use bweyl::exactnum::{make_fraction_field, make_prime_field, FracField, Ring};
use bweyl::exprlang::print_symbol;
use bweyl::polyring::Poly;
use bweyl::symbolalg::{
    azumaya_desk_check, centralizer, centralizer_formula_check, classical_symbol_iso_check,
    commutator_power_direct, commutator_power_formula, fv_adjoint_structure_check,
    monotone_profiles, random_element, replay_trace, simplicity_reduce, thm_4_6_i_check, thm_4_6_ii_check,
    thm_4_6_iii_check, thm_4_6_iv_check, FvDirection, SymbolAlgebra,
};
use bweyl::witt::ipow;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{build_symbol_context, usage, Outcome, SymbolParams, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Basis,
    Center,
    Prop32,
    Centralizer,
    Simplicity,
    Thm46,
    Thm52,
    Azumaya,
    Classical,
}

pub const SUITE_NAMES: [&str; 9] =
    ["basis", "center", "prop32", "centralizer", "simplicity", "thm46", "thm52", "azumaya", "classical"];

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "basis" => Suite::Basis,
            "center" => Suite::Center,
            "prop32" => Suite::Prop32,
            "centralizer" => Suite::Centralizer,
            "simplicity" => Suite::Simplicity,
            "thm46" => Suite::Thm46,
            "thm52" => Suite::Thm52,
            "azumaya" => Suite::Azumaya,
            "classical" => Suite::Classical,
            _ => return Err(format!("unknown suite {s:?}; expected one of {}", SUITE_NAMES.join(", "))),
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        SUITE_NAMES[self as usize]
    }
}

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub suite: Suite,
    pub params: SymbolParams,
    pub cases: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

fn case(id: usize, name: impl Into<String>, pass: bool, details: Value) -> CaseResult {
    CaseResult { id, name: name.into(), pass, details }
}

/// Independent stream per case, so results do not depend on scheduling.
fn case_rng(seed: u64, id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

fn generic_field(p: u64, groups: &[(&str, usize)]) -> FracField {
    let names: Vec<String> = groups.iter().flat_map(|&(pre, len)| (0..len).map(move |i| format!("{pre}{i}"))).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    make_fraction_field(make_prime_field(p).unwrap(), &refs).unwrap()
}

fn gens(k: &FracField, prefix: &str, len: usize) -> Vec<<FracField as Ring>::Elem> {
    (0..len).map(|i| k.var(&format!("{prefix}{i}")).unwrap()).collect()
}

/// Coefficients for random elements: 1, and where present a_0, b_0, 1 + a_0.
fn coefficient_pool(k: &FracField) -> Vec<<FracField as Ring>::Elem> {
    let mut pool = vec![k.one()];
    for name in ["a0", "b0"] {
        if let Some(v) = k.symbol(name) {
            pool.push(v);
        }
    }
    if let Some(a) = k.symbol("a0") {
        pool.push(k.add(&k.one(), &a));
    }
    pool
}

fn status(r: &Result<(), impl ToString>) -> Value {
    match r {
        Ok(()) => json!("ok"),
        Err(e) => json!(e.to_string()),
    }
}

fn basis_cases(alg: &SymbolAlgebra<FracField>, cases: usize, seed: u64) -> Vec<CaseResult> {
    let p = alg.p();
    let expected = ipow(p, (2 * alg.m() * alg.n()) as u32) as usize;
    let pool = coefficient_pool(alg.field());
    let mut out = vec![case(
        0,
        "dimension",
        alg.dim() == expected && alg.basis().iter().all(|mo| alg.is_reduced(&Poly::monomial(alg.field(), mo.0.clone(), mo.1.clone(), alg.field().one()))),
        json!({"dim": alg.dim(), "expected": expected}),
    )];
    out.par_extend((1..=cases).into_par_iter().map(|id| {
        let mut rng = case_rng(seed, id);
        let [u, v, w] = [0, 1, 2].map(|_| random_element(alg, &mut rng, 4, &pool));
        let left = alg.mul(&alg.mul(&u, &v), &w);
        let right = alg.mul(&u, &alg.mul(&v, &w));
        let pass = left == right && alg.is_reduced(&left);
        case(id, format!("associativity/{id}"), pass, json!({"terms": [u.len(), v.len(), w.len()], "product_terms": left.len()}))
    }));
    out
}

fn center_cases(alg: &SymbolAlgebra<FracField>) -> Vec<CaseResult> {
    let gens: Vec<_> = alg.xs().into_iter().chain(alg.ys()).collect();
    let center = centralizer(alg, &gens);
    let scalar = center.len() == 1 && center[0].is_constant();
    vec![case(0, "center", scalar, json!({"center_dim": center.len(), "algebra_dim": alg.dim()}))]
}

fn prop32_cases(alg: &SymbolAlgebra<FracField>) -> Vec<CaseResult> {
    let kmax = 2;
    let mut quads = Vec::new();
    for i in 0..alg.m() {
        for j in 0..alg.n() {
            for k in 0..=kmax {
                for l in 0..=kmax {
                    quads.push((i, j, k, l));
                }
            }
        }
    }
    quads
        .par_iter()
        .enumerate()
        .map(|(id, &(i, j, k, l))| {
            let direct = commutator_power_direct(alg, i, j, k, l);
            let formula = commutator_power_formula(alg, i, j, k, l);
            let agrees = formula.as_ref().is_ok_and(|f| *f == direct);
            let vanishes = direct.is_zero();
            let criterion = vanishes == (i < k || j < l);
            case(
                id,
                format!("i={i},j={j},k={k},l={l}"),
                agrees && criterion,
                json!({"formula_matches": agrees, "vanishes": vanishes, "vanishing_criterion": criterion}),
            )
        })
        .collect()
}

fn centralizer_cases(alg: &SymbolAlgebra<FracField>) -> Vec<CaseResult> {
    let (m, n) = (alg.m(), alg.n());
    let ls: Vec<Vec<u32>> = (0..=m).flat_map(|len| monotone_profiles(len, n as u32)).collect();
    let ks: Vec<Vec<u32>> = (0..=n).flat_map(|len| monotone_profiles(len, m as u32)).collect();
    let pairs: Vec<(&Vec<u32>, &Vec<u32>)> = ls.iter().flat_map(|l| ks.iter().map(move |k| (l, k))).collect();
    pairs
        .par_iter()
        .enumerate()
        .map(|(id, (l, k))| {
            let r = centralizer_formula_check(alg, l, k);
            let pass = r == Ok(true);
            let details = match r {
                Ok(b) => json!({"l": l, "k": k, "matches_prediction": b}),
                Err(e) => json!({"l": l, "k": k, "error": e.to_string()}),
            };
            case(id, format!("l={l:?},k={k:?}"), pass, details)
        })
        .collect()
}

fn simplicity_cases(alg: &SymbolAlgebra<FracField>, cases: usize, seed: u64) -> Vec<CaseResult> {
    let pool = coefficient_pool(alg.field());
    let k = alg.field();
    (0..cases)
        .into_par_iter()
        .map(|id| {
            let mut rng = case_rng(seed, id);
            let alpha = loop {
                let u = random_element(alg, &mut rng, 6, &pool);
                if !u.is_zero() {
                    break u;
                }
            };
            let element = print_symbol(alg, &alpha);
            match simplicity_reduce(alg, &alpha) {
                Ok(trace) => {
                    let replay = replay_trace(alg, &alpha, &trace);
                    let steps: Vec<Value> = trace
                        .steps
                        .iter()
                        .map(|s| json!({"phase": s.phase, "triple": s.triple, "operator": s.operator}))
                        .collect();
                    case(
                        id,
                        format!("element/{id}"),
                        replay && !k.is_zero(&trace.scalar),
                        json!({"element": element, "trace": {"steps": steps, "scalar": k.render(&trace.scalar)}, "replayed": replay}),
                    )
                }
                Err(e) => case(id, format!("element/{id}"), false, json!({"element": element, "error": e.to_string()})),
            }
        })
        .collect()
}

fn thm46_cases(p: u64, m: usize, n: usize) -> Vec<CaseResult> {
    let parts: Vec<&str> = vec!["i", "ii", "iii", "iv"];
    parts
        .par_iter()
        .enumerate()
        .map(|(id, &part)| {
            let r = match part {
                "i" | "ii" => {
                    let k = generic_field(p, &[("a", m), ("b", n), ("c", m), ("d", n)]);
                    let (a, b, c, d) = (gens(&k, "a", m), gens(&k, "b", n), gens(&k, "c", m), gens(&k, "d", n));
                    if part == "i" {
                        thm_4_6_i_check(&k, m, n, &a, &b, &c, &d)
                    } else {
                        thm_4_6_ii_check(&k, m, n, &a, &b, &c, &d)
                    }
                }
                "iii" => {
                    let k = generic_field(p, &[("a", m), ("b", n)]);
                    thm_4_6_iii_check(&k, m, n, &gens(&k, "a", m), &gens(&k, "b", n))
                }
                _ => {
                    let k = generic_field(p, &[("a", n), ("b", n), ("c", n)]);
                    thm_4_6_iv_check(&k, n, &gens(&k, "a", n), &gens(&k, "b", n), &gens(&k, "c", n))
                }
            };
            case(id, part, r.is_ok(), json!({"result": status(&r)}))
        })
        .collect()
}

fn thm52_cases(p: u64, m: usize, n: usize) -> Vec<CaseResult> {
    [FvDirection::FaSide, FvDirection::VbSide]
        .par_iter()
        .enumerate()
        .map(|(id, &dir)| {
            let blen = if dir == FvDirection::FaSide { n } else { n - 1 };
            let k = generic_field(p, &[("a", m), ("b", blen)]);
            let name = if dir == FvDirection::FaSide { "fa_side" } else { "vb_side" };
            match fv_adjoint_structure_check(&k, m, n, &gens(&k, "a", m), &gens(&k, "b", blen), dir) {
                Ok(r) => case(
                    id,
                    name,
                    r.passed(),
                    json!({
                        "relations": status(&r.relations),
                        "mutually_centralize": r.centralize,
                        "dim_a": r.dim_a,
                        "dim_b": r.dim_b,
                        "dim_total": r.dim_c,
                        "expected_dim_a": r.expected_dim_a,
                        "expected_dim_b": r.expected_dim_b,
                        "nilpotency": r.nilpotency,
                    }),
                ),
                Err(e) => case(id, name, false, json!({"error": e.to_string()})),
            }
        })
        .collect()
}

fn run(args: &VerifyArgs) -> Result<Vec<CaseResult>, UsageError> {
    let SymbolParams { p, m, n, .. } = args.params;
    args.params.validate()?;
    let needs_alg = matches!(args.suite, Suite::Basis | Suite::Center | Suite::Prop32 | Suite::Centralizer | Suite::Simplicity);
    let mut cases = if needs_alg {
        let alg = build_symbol_context(&args.params, &[])?.alg;
        match args.suite {
            Suite::Basis => basis_cases(&alg, args.cases, args.seed),
            Suite::Center => center_cases(&alg),
            Suite::Prop32 => prop32_cases(&alg),
            Suite::Centralizer => centralizer_cases(&alg),
            _ => simplicity_cases(&alg, args.cases, args.seed),
        }
    } else {
        if args.params.a.is_some() || args.params.b.is_some() {
            return usage(format!("suite {} uses generic parameters; --a and --b do not apply", args.suite.name()));
        }
        match args.suite {
            Suite::Thm46 => thm46_cases(p, m, n),
            Suite::Thm52 => thm52_cases(p, m, n),
            Suite::Azumaya => {
                let r = azumaya_desk_check(p, m, n);
                vec![case(0, "azumaya", r.is_ok(), json!({"result": status(&r)}))]
            }
            _ => {
                let k = generic_field(p, &[("a", 1), ("b", 1)]);
                let r = classical_symbol_iso_check(&k, &k.var("a0").unwrap(), &k.var("b0").unwrap());
                vec![case(0, "classical", r.is_ok(), json!({"result": status(&r)}))]
            }
        }
    };
    cases.sort_by_key(|c| c.id);
    Ok(cases)
}

/// Run a suite; exit code 0 iff every case passes.
pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, UsageError> {
    let cases = run(args)?;
    let passed = cases.iter().filter(|c| c.pass).count();
    let failed = cases.len() - passed;
    let SymbolParams { p, m, n, .. } = args.params;
    let json = json!({
        "suite": args.suite.name(),
        "config": {"p": p, "m": m, "n": n, "a": args.params.a, "b": args.params.b, "cases": args.cases, "seed": args.seed},
        "cases": cases.iter().map(|c| json!({"id": c.id, "name": c.name, "pass": c.pass, "details": c.details})).collect::<Vec<_>>(),
        "passed": passed,
        "failed": failed,
        "pass": failed == 0,
    });
    let mut text = format!("suite {} (p={p}, m={m}, n={n})\n", args.suite.name());
    for c in &cases {
        text.push_str(&format!("  [{}] {} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name));
    }
    text.push_str(&format!("{passed} passed, {failed} failed"));
    Ok(Outcome { json, text, code: if failed == 0 { 0 } else { 1 } })
}
