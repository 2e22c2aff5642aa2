//! Polynomial JSON:
//! `{"xvars":[..],"yvars":[..],"terms":[{"xexp":{..},"yexp":{..},"coef":".."}]}`
//! with terms in increasing lex order and variables keyed by embedded index.

use bweyl::algebra::Scalars;
use bweyl::exactnum::{FracField, Integer, IntegerRing, PrimeField, Rational, RationalField, Ring};
use bweyl::exprlang::parse_and_evaluate;
use bweyl::polyring::{ExpVec, Poly};
use serde_json::{json, Map, Value};

/// Decimal string forms of ring elements.
pub trait CoefCodec: Ring {
    fn encode(&self, c: &Self::Elem) -> String {
        self.render(c)
    }
    fn decode(&self, s: &str) -> Result<Self::Elem, String>;
}

impl CoefCodec for IntegerRing {
    fn decode(&self, s: &str) -> Result<Integer, String> {
        s.parse().map_err(|_| format!("bad integer {s:?}"))
    }
}

impl CoefCodec for RationalField {
    fn decode(&self, s: &str) -> Result<Rational, String> {
        s.parse().map_err(|_| format!("bad rational {s:?}"))
    }
}

impl CoefCodec for PrimeField {
    fn decode(&self, s: &str) -> Result<u64, String> {
        match s.parse::<u64>() {
            Ok(v) if v < self.modulus() => Ok(v),
            _ => Err(format!("bad residue {s:?} mod {}", self.modulus())),
        }
    }
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s)
}

impl CoefCodec for FracField {
    fn decode(&self, s: &str) -> Result<Self::Elem, String> {
        let sc = Scalars(self.clone());
        let eval = |t: &str| parse_and_evaluate(&sc, strip_parens(t)).map_err(|e| format!("bad coefficient {s:?}: {e}"));
        let parts = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).and_then(|t| t.split_once(")/("));
        match parts {
            Some((num, den)) => {
                let d = eval(den)?;
                let inv = self.inv(&d).ok_or_else(|| format!("zero denominator in {s:?}"))?;
                Ok(self.mul(&eval(num)?, &inv))
            }
            None => eval(s),
        }
    }
}

fn exps_json(e: &ExpVec) -> Value {
    let mut m = Map::new();
    for (i, d) in e.iter() {
        m.insert(i.to_string(), json!(d));
    }
    Value::Object(m)
}

pub fn encode<R: CoefCodec>(ring: &R, xvars: &[u32], yvars: &[u32], p: &Poly<R::Elem>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|((xe, ye), c)| json!({"xexp": exps_json(xe), "yexp": exps_json(ye), "coef": ring.encode(c)}))
        .collect();
    json!({"xvars": xvars, "yvars": yvars, "terms": terms})
}

fn vars(v: &Value, key: &str) -> Result<Vec<u32>, String> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing array {key:?}"))?
        .iter()
        .map(|e| e.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| format!("bad entry in {key:?}")))
        .collect()
}

fn exps(v: &Value, allowed: &[u32]) -> Result<ExpVec, String> {
    let obj = v.as_object().ok_or("exponent map must be an object")?;
    let mut out = ExpVec::new();
    for (k, e) in obj {
        let i: u32 = k.parse().map_err(|_| format!("bad variable index {k:?}"))?;
        if !allowed.contains(&i) {
            return Err(format!("variable {i} not declared"));
        }
        let e = e.as_u64().and_then(|n| u32::try_from(n).ok()).filter(|&n| n > 0).ok_or("exponents must be positive")?;
        out.set(i, e);
    }
    Ok(out)
}

/// Inverse of [`encode`]; rejects anything `encode` would not produce.
pub fn decode<R: CoefCodec>(ring: &R, v: &Value) -> Result<(Vec<u32>, Vec<u32>, Poly<R::Elem>), String> {
    let xvars = vars(v, "xvars")?;
    let yvars = vars(v, "yvars")?;
    let terms = v.get("terms").and_then(Value::as_array).ok_or("missing array \"terms\"")?;
    let mut p = Poly::zero();
    let mut last = None;
    for t in terms {
        let xe = exps(t.get("xexp").ok_or("missing xexp")?, &xvars)?;
        let ye = exps(t.get("yexp").ok_or("missing yexp")?, &yvars)?;
        let c = ring.decode(t.get("coef").and_then(Value::as_str).ok_or("missing coef string")?)?;
        if ring.is_zero(&c) {
            return Err("zero coefficient".into());
        }
        let mono = (xe, ye);
        if last.as_ref().is_some_and(|l| *l >= mono) {
            return Err("terms out of lex order".into());
        }
        last = Some(mono.clone());
        p.add_term(ring, mono, c);
    }
    Ok((xvars, yvars, p))
}
