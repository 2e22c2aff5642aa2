//! Command implementations behind the `bweyl` binary. Every command yields
//! a JSON value, a plain-text rendering and an exit code.

pub mod polyjson;
pub mod suites;

use std::collections::BTreeSet;
use std::fmt;

use bweyl::algebra::Scalars;
use bweyl::balgebra::{c_table, compute_c_weyl_oracle, BAlgebra};
use bweyl::exactnum::{make_fraction_field, make_prime_field, FracField, IntegerRing, Rational, RationalField, Ring};
use bweyl::exprlang::{evaluate, parse, print_b, print_element, print_symbol, Expr};
use bweyl::symbolalg::{make_symbol_algebra, split_zero_symbol, SymbolAlgebra};
use bweyl::witt::{divisors, ipow, proper_divisors, witt_table, IndexSet};
use rayon::prelude::*;
use serde_json::{json, Value};

use polyjson::encode;

/// Largest quotient dimension accepted on the command line.
pub const MAX_DIM: u64 = 1 << 16;
/// Largest index accepted for c_{m,n} and Witt polynomials.
pub const MAX_INDEX: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

pub struct Outcome {
    pub json: Value,
    pub text: String,
    /// 0 pass, 1 verification failure.
    pub code: i32,
}

/// Symbol algebra parameters as given on the command line.
#[derive(Debug, Clone)]
pub struct SymbolParams {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    /// Comma-separated component expressions; generic names when absent.
    pub a: Option<String>,
    pub b: Option<String>,
}

impl SymbolParams {
    pub fn validate(&self) -> Result<(), UsageError> {
        if make_prime_field(self.p).is_err() {
            return usage(format!("p = {} is not a supported prime", self.p));
        }
        if self.m == 0 || self.n == 0 {
            return usage("m and n must be at least 1");
        }
        let e = 2 * self.m * self.n;
        if e >= 64 || self.p.checked_pow(e as u32).is_none_or(|d| d > MAX_DIM) {
            return usage(format!("dimension p^(2mn) exceeds {MAX_DIM}"));
        }
        Ok(())
    }
}

pub fn generic_names(prefix: &str, len: usize) -> String {
    (0..len).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(",")
}

fn parse_components(text: &str, len: usize, what: &str) -> Result<Vec<Expr>, UsageError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != len {
        return usage(format!("--{what} needs {len} components, got {}", parts.len()));
    }
    parts.iter().map(|s| parse(s).map_err(|e| UsageError(format!("--{what}: {e}")))).collect()
}

/// A symbol algebra over F_p(names), where the names are the scalar
/// symbols used by the parameters and any `extra` expressions.
pub struct SymbolContext {
    pub alg: SymbolAlgebra<FracField>,
    pub a_text: Vec<String>,
    pub b_text: Vec<String>,
}

pub fn build_symbol_context(params: &SymbolParams, extra: &[&Expr]) -> Result<SymbolContext, UsageError> {
    params.validate()?;
    let a_src = params.a.clone().unwrap_or_else(|| generic_names("a", params.m));
    let b_src = params.b.clone().unwrap_or_else(|| generic_names("b", params.n));
    let a = parse_components(&a_src, params.m, "a")?;
    let b = parse_components(&b_src, params.n, "b")?;
    let mut names = BTreeSet::new();
    for e in a.iter().chain(&b).chain(extra.iter().copied()) {
        names.extend(e.scalar_names());
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let k = make_fraction_field(make_prime_field(params.p).unwrap(), &refs).map_err(|e| UsageError(e.to_string()))?;
    let sc = Scalars(k.clone());
    let eval = |v: &[Expr]| -> Result<Vec<_>, UsageError> {
        v.iter().map(|e| evaluate(&sc, e).map_err(|err| UsageError(err.to_string()))).collect()
    };
    let (av, bv) = (eval(&a)?, eval(&b)?);
    let a_text = av.iter().map(|c| k.render(c)).collect();
    let b_text = bv.iter().map(|c| k.render(c)).collect();
    let alg = make_symbol_algebra(k, params.m, params.n, av, bv).map_err(|e| UsageError(e.to_string()))?;
    Ok(SymbolContext { alg, a_text, b_text })
}

fn field_name(k: &FracField) -> String {
    let p = k.characteristic();
    if k.vars().is_empty() {
        format!("F_{p}")
    } else {
        format!("F_{p}({})", k.vars().join(","))
    }
}

/// With `typical = Some(p)`, `labels` are positions and the text uses positional names.
fn cmn_entry(m: u32, n: u32, labels: (u32, u32), typical: Option<u64>) -> (Value, bool, String) {
    let c = c_table().get(m, n);
    let oracle = compute_c_weyl_oracle(m, n);
    let cross = oracle == c.map_coeffs(&RationalField, |z| Rational::from_integer(z.clone()));
    let integral = oracle.terms().all(|(_, q)| q.is_integer());
    let (xv, yv) = (proper_divisors(m), proper_divisors(n));
    let (xset, yset) = match typical {
        Some(p) => (IndexSet::ptypical(p, labels.0 as usize), IndexSet::ptypical(p, labels.1 as usize)),
        None => (IndexSet::universal(xv.clone()), IndexSet::universal(yv.clone())),
    };
    let text = format!(
        "c_{{{},{}}} = {}  [cross-check {}, integral {}]",
        labels.0,
        labels.1,
        print_element(&IntegerRing, &xset, &yset, &c),
        cross,
        integral
    );
    let v = json!({
        "m": labels.0,
        "n": labels.1,
        "indices": [m, n],
        "polynomial": encode(&IntegerRing, &xv, &yv, &c),
        "cross_check": cross,
        "integral": integral,
    });
    (v, cross && integral, text)
}

#[derive(Debug, Clone)]
pub struct CmnArgs {
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub ptypical: bool,
    pub p: u64,
    pub table: bool,
    pub max: Option<u32>,
}

/// c_{m,n} with the dual-route cross-check. With `ptypical`, `m` and `n`
/// are positions and the entry is c_{p^m,p^n}.
pub fn cmd_cmn(args: &CmnArgs) -> Result<Outcome, UsageError> {
    if args.ptypical && make_prime_field(args.p).is_err() {
        return usage(format!("p = {} is not a supported prime", args.p));
    }
    let index = |k: u32| -> Result<u32, UsageError> {
        let v = if args.ptypical {
            args.p.checked_pow(k).filter(|&v| v <= MAX_INDEX as u64).map(|v| v as u32)
        } else {
            Some(k).filter(|&v| v >= 1 && v <= MAX_INDEX)
        };
        v.ok_or_else(|| UsageError(format!("index {k} outside the supported range (1..={MAX_INDEX})")))
    };
    let pairs: Vec<(u32, u32)> = if args.table {
        let Some(max) = args.max else { return usage("--table needs --max") };
        let lo = if args.ptypical { 0 } else { 1 };
        let hi = if args.ptypical { max.saturating_sub(1) } else { max };
        if max == 0 {
            return usage("--max must be at least 1");
        }
        (lo..=hi).flat_map(|m| (lo..=hi).map(move |n| (m, n))).collect()
    } else {
        match (args.m, args.n) {
            (Some(m), Some(n)) => vec![(m, n)],
            _ => return usage("cmn needs --m and --n, or --table --max"),
        }
    };
    let resolved: Vec<(u32, u32, (u32, u32))> =
        pairs.iter().map(|&(m, n)| Ok((index(m)?, index(n)?, (m, n)))).collect::<Result<_, UsageError>>()?;
    let entries: Vec<(Value, bool, String)> =
        resolved.par_iter().map(|&(m, n, labels)| cmn_entry(m, n, labels, args.ptypical.then_some(args.p))).collect();
    let ok = entries.iter().all(|e| e.1);
    let text = entries.iter().map(|e| e.2.as_str()).collect::<Vec<_>>().join("\n");
    let mut json = if args.table {
        json!({"entries": entries.iter().map(|e| e.0.clone()).collect::<Vec<_>>(), "all_checks": ok})
    } else {
        entries[0].0.clone()
    };
    if args.ptypical {
        json["p"] = json!(args.p);
    }
    Ok(Outcome { json, text, code: if ok { 0 } else { 1 } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittOp {
    Sum,
    Prod,
}

/// The Witt addition or multiplication polynomial at index `n` (or `p^n`).
pub fn cmd_wittpoly(op: WittOp, n: u32, typical: Option<u64>) -> Result<Outcome, UsageError> {
    let idx = match typical {
        Some(p) => {
            if make_prime_field(p).is_err() {
                return usage(format!("p = {p} is not a supported prime"));
            }
            p.checked_pow(n).filter(|&v| v <= MAX_INDEX as u64).map(|v| v as u32)
        }
        None => Some(n).filter(|&v| v >= 1 && v <= MAX_INDEX),
    }
    .ok_or_else(|| UsageError(format!("index outside the supported range (1..={MAX_INDEX})")))?;
    let poly = match op {
        WittOp::Sum => witt_table().sum(idx),
        WittOp::Prod => witt_table().prod(idx),
    };
    let vars = divisors(idx);
    let name = if op == WittOp::Sum { "sum" } else { "prod" };
    let set = match typical {
        Some(p) => IndexSet::ptypical(p, n as usize + 1),
        None => IndexSet::universal(vars.clone()),
    };
    let mut json = json!({"op": name, "n": n, "index": idx, "polynomial": encode(&IntegerRing, &vars, &vars, &poly)});
    if let Some(p) = typical {
        json["p"] = json!(p);
    }
    let label = if typical.is_some() { n } else { idx };
    let text =
        format!("{}_{} = {}", if op == WittOp::Sum { "s" } else { "p" }, label, print_element(&IntegerRing, &set, &set, &poly));
    Ok(Outcome { json, text, code: 0 })
}

/// Normal form of an expression in the universal algebra over Q (generators
/// up to the largest index used) or in a symbol algebra.
pub fn cmd_nf(expr_text: &str, universal: bool, params: &SymbolParams) -> Result<Outcome, UsageError> {
    let expr = parse(expr_text).map_err(|e| UsageError(e.to_string()))?;
    if universal {
        let max = expr.max_index().unwrap_or(1).max(1);
        if max > MAX_INDEX {
            return usage(format!("generator index {max} exceeds {MAX_INDEX}"));
        }
        let set = IndexSet::first(max);
        let b = BAlgebra::new(RationalField, set.clone(), set.clone());
        let u = evaluate(&b, &expr).map_err(|e| UsageError(e.to_string()))?;
        let text = print_b(&b, &u);
        let json = json!({
            "context": {"kind": "universal", "ring": "Q", "xvars": set.indices(), "yvars": set.indices()},
            "input": expr_text,
            "normal_form": encode(&RationalField, set.indices(), set.indices(), &u),
            "text": text,
        });
        return Ok(Outcome { json, text, code: 0 });
    }
    let ctx = build_symbol_context(params, &[&expr])?;
    let alg = &ctx.alg;
    let u = evaluate(alg, &expr).map_err(|e| UsageError(e.to_string()))?;
    let text = print_symbol(alg, &u);
    let (xv, yv) = (alg.engine().xset().indices().to_vec(), alg.engine().yset().indices().to_vec());
    let json = json!({
        "context": {
            "kind": "symbol",
            "p": params.p,
            "m": params.m,
            "n": params.n,
            "field": field_name(alg.field()),
            "a": ctx.a_text,
            "b": ctx.b_text,
            "xvars": xv,
            "yvars": yv,
        },
        "input": expr_text,
        "normal_form": encode(alg.field(), &xv, &yv, &u),
        "text": text,
    });
    Ok(Outcome { json, text, code: 0 })
}

/// Matrices of the splitting of A_{((0,0))}(F_p), row-major residue strings.
pub fn cmd_split(p: u64, m: usize, n: usize) -> Result<Outcome, UsageError> {
    SymbolParams { p, m, n, a: None, b: None }.validate()?;
    let expected = ipow(p, (2 * m * n) as u32) as usize;
    let (json, text, code) = match split_zero_symbol(p, m, n) {
        Ok(s) => {
            let rows = |mats: &[bweyl::algebra::Matrix<u64>]| -> Vec<Vec<Vec<String>>> {
                mats.iter().map(|a| a.rows().iter().map(|r| r.iter().map(u64::to_string).collect()).collect()).collect()
            };
            let x = rows(&s.rep.x_images);
            let y = rows(&s.rep.y_images);
            let mut text = format!("A_((0,0)) over F_{p}, m={m}, n={n}: {0}x{0} matrices, span {1} of {expected}\n", s.rep.dim, s.span_dim);
            for (name, mats) in [("x", &x), ("y", &y)] {
                for (i, mat) in mats.iter().enumerate() {
                    text.push_str(&format!("{name}_{i} =\n"));
                    for r in mat {
                        text.push_str(&format!("  [{}]\n", r.join(" ")));
                    }
                }
            }
            let pass = s.span_dim == expected;
            let json = json!({
                "p": p, "m": m, "n": n, "dim": s.rep.dim,
                "x": x, "y": y,
                "span_dim": s.span_dim, "expected_span_dim": expected,
                "pass": pass,
            });
            (json, text.trim_end().to_string(), if pass { 0 } else { 1 })
        }
        Err(e) => (
            json!({"p": p, "m": m, "n": n, "pass": false, "error": e.to_string()}),
            format!("splitting failed: {e}"),
            1,
        ),
    };
    Ok(Outcome { json, text, code })
}

/// Render a value for the chosen output format.
pub fn render(out: &Outcome, json: bool) -> String {
    if json {
        serde_json::to_string(&out.json).expect("JSON values serialize")
    } else {
        out.text.clone()
    }
}

pub use suites::{cmd_verify, Suite, VerifyArgs};

