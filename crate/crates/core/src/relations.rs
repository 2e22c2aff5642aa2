//! Relation checks run against any [`Algebra`]: an algebra map out of a
//! B algebra exists exactly when the images satisfy these relations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::algebra::Algebra;
use crate::balgebra::c_table;
use crate::polyring::eval_ordered;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub message: String,
}

impl RelationFailure {
    pub fn new(msg: &str) -> Self {
        RelationFailure { message: String::from(msg) }
    }

    pub fn context(self, ctx: &str) -> Self {
        RelationFailure { message: format!("{ctx}: {}", self.message) }
    }
}

impl fmt::Display for RelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Every element of `us` commutes with every element of `vs`.
pub fn check_commute<A: Algebra>(alg: &A, us: &[A::Elem], vs: &[A::Elem]) -> Result<(), RelationFailure> {
    for (i, u) in us.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            if !alg.is_zero(&alg.commutator(u, v)) {
                return Err(RelationFailure { message: format!("entries {i} and {j} do not commute") });
            }
        }
    }
    Ok(())
}

/// The entries of `us` commute pairwise.
pub fn check_commutative<A: Algebra>(alg: &A, us: &[A::Elem]) -> Result<(), RelationFailure> {
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            if !alg.is_zero(&alg.commutator(&us[i], &us[j])) {
                return Err(RelationFailure { message: format!("entries {i} and {j} do not commute") });
            }
        }
    }
    Ok(())
}

/// The defining relations of B_{P,Q}: `xs` (keyed by P) and `ys` (keyed by
/// Q) commute within each family, and `[y_n, x_m] = c_{m,n}(x, y)`.
pub fn check_b_relations<A: Algebra>(
    alg: &A,
    xs: &[(u32, A::Elem)],
    ys: &[(u32, A::Elem)],
) -> Result<(), RelationFailure> {
    let xe: alloc::vec::Vec<_> = xs.iter().map(|e| e.1.clone()).collect();
    let ye: alloc::vec::Vec<_> = ys.iter().map(|e| e.1.clone()).collect();
    check_commutative(alg, &xe).map_err(|e| e.context("x family"))?;
    check_commutative(alg, &ye).map_err(|e| e.context("y family"))?;
    let xm: BTreeMap<u32, A::Elem> = xs.iter().cloned().collect();
    let ym: BTreeMap<u32, A::Elem> = ys.iter().cloned().collect();
    for (m, x) in xs {
        for (n, y) in ys {
            let c = c_table().get(*m, *n);
            let rhs = eval_ordered(alg, &c, |z| alg.from_integer(z), &xm, &ym).map_err(|e| {
                RelationFailure { message: format!("c_{{{m},{n}}} needs {e}; the index sets are not truncation sets") }
            })?;
            if alg.commutator(y, x) != rhs {
                return Err(RelationFailure { message: format!("[y_{n}, x_{m}] differs from c_{{{m},{n}}}") });
            }
        }
    }
    Ok(())
}

/// `u^exp = value` for each pair.
pub fn check_powers<A: Algebra>(alg: &A, items: &[(A::Elem, A::Elem)], exp: u64) -> Result<(), RelationFailure> {
    for (i, (u, v)) in items.iter().enumerate() {
        if alg.pow(u, exp) != *v {
            return Err(RelationFailure { message: format!("power relation {i} fails") });
        }
    }
    Ok(())
}
