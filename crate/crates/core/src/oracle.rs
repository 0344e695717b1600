//! Brute-force ground truth: enumerate every assignment to the atoms and
//! evaluate the formula tree directly. Shares only parsing and the theory
//! feasibility check with the rest of the crate.

use thiserror::Error;

use crate::frontend::Formula;
use crate::literal::{Literal, Var};
use crate::lra::check_feasible;

/// Largest atom count the oracle accepts.
pub const MAX_ATOMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} atoms exceed the brute-force limit of {MAX_ATOMS}")]
    TooLarge(usize),
}

/// Calls `f` on every Boolean model of the formula in lexicographic order
/// (atom 1 most significant, false before true), passing the model as
/// literals over atoms `1..=n` and whether it is theory-consistent.
fn for_each_model(f: &Formula, mut visit: impl FnMut(Vec<Literal>, bool)) -> Result<(), OracleError> {
    let n = f.atoms.len();
    if n > MAX_ATOMS {
        return Err(OracleError::TooLarge(n));
    }
    for m in 0u32..1 << n {
        let value = |v: Var| m >> (n - v as usize) & 1 == 1;
        if !f.expr.eval(&value) {
            continue;
        }
        let lits: Vec<Literal> = (1..=n as Var).map(|v| Literal::new(v, value(v))).collect();
        let linear: Vec<Literal> = lits.iter().copied().filter(|l| f.atoms.is_linear(l.var())).collect();
        let feasible = check_feasible(&f.atoms, &linear).expect("linear literals").is_sat();
        visit(lits, feasible);
    }
    Ok(())
}

/// `(agnostic, aware)` model counts over the atoms of `f`.
pub fn brute_counts(f: &Formula) -> Result<(u64, u64), OracleError> {
    let (mut agnostic, mut aware) = (0, 0);
    for_each_model(f, |_, feasible| {
        agnostic += 1;
        aware += u64::from(feasible);
    })?;
    Ok((agnostic, aware))
}

/// Theory-consistent models of `f` in lexicographic order.
pub fn brute_enumerate(f: &Formula) -> Result<Vec<Vec<Literal>>, OracleError> {
    let mut out = Vec::new();
    for_each_model(f, |lits, feasible| {
        if feasible {
            out.push(lits);
        }
    })?;
    Ok(out)
}
