//! Exact theory solver for conjunctions of linear real arithmetic literals.
//!
//! Feasibility is decided by Fourier–Motzkin elimination over rationals.
//! Satisfiable systems come with a witness point; unsatisfiable ones with a
//! certificate that can be re-checked without trusting the solver.
//!
//! Disequalities `t != 0` are handled after the fact: a system is feasible iff
//! its relaxed polyhedron `P` is nonempty and, for each disequality, `P` is not
//! contained in the hyperplane `t = 0`. Containment holds iff both `P and t < 0`
//! and `P and t > 0` are infeasible. A convex set avoiding containment in each
//! of finitely many hyperplanes contains a point off all of them, which is
//! constructed explicitly.

mod audit;
mod certificate;
mod fm;
mod state;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use audit::{audit_counts, set_audit, AuditCounts};
pub use certificate::{witness_satisfies, Certificate, FarkasCertificate};
pub use state::{AssertOutcome, TheoryState};

use crate::frontend::{AtomKind, AtomTable, LinTerm, RealVar};
use crate::literal::Literal;
use fm::FmOutcome;

pub type Witness = BTreeMap<RealVar, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("literal {0} is not over a linear atom")]
    NonTheoryLiteral(Literal),
    #[error("assertion level {level} is below the current top level {top}")]
    LevelRegression { level: u32, top: u32 },
    #[error("the given literal set is feasible")]
    NotInfeasible,
}

/// A single constraint `term ⋈ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Le(LinTerm),
    Lt(LinTerm),
    Eq(LinTerm),
    Ne(LinTerm),
}

impl Constraint {
    /// Constraint denoted by a literal over a linear atom.
    pub fn of_literal(atoms: &AtomTable, lit: Literal) -> Result<Constraint, TheoryError> {
        match (atoms.get(lit.var()), lit.is_positive()) {
            (Some(AtomKind::Leq(t)), true) => Ok(Constraint::Le(t.clone())),
            (Some(AtomKind::Leq(t)), false) => Ok(Constraint::Lt(t.negated())),
            (Some(AtomKind::Eq(t)), true) => Ok(Constraint::Eq(t.clone())),
            (Some(AtomKind::Eq(t)), false) => Ok(Constraint::Ne(t.clone())),
            _ => Err(TheoryError::NonTheoryLiteral(lit)),
        }
    }

    pub fn term(&self) -> &LinTerm {
        match self {
            Constraint::Le(t) | Constraint::Lt(t) | Constraint::Eq(t) | Constraint::Ne(t) => t,
        }
    }

    pub fn holds(&self, point: &Witness) -> bool {
        let v = self.term().eval(point);
        match self {
            Constraint::Le(_) => !v.is_positive(),
            Constraint::Lt(_) => v.is_negative(),
            Constraint::Eq(_) => v.is_zero(),
            Constraint::Ne(_) => !v.is_zero(),
        }
    }
}

/// Inequality row `term <= 0` (or `< 0` when strict), tagged with the index of
/// the constraint it was expanded from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub term: LinTerm,
    pub strict: bool,
    pub origin: usize,
}

impl Row {
    /// Expands constraints into inequality rows in a fixed order: `Le`/`Lt`
    /// give one row, `Eq` gives `t <= 0` then `-t <= 0`, `Ne` gives none.
    pub fn expand(constraints: &[Constraint]) -> Vec<Row> {
        let mut rows = Vec::new();
        for (i, c) in constraints.iter().enumerate() {
            match c {
                Constraint::Le(t) => rows.push(Row { term: t.clone(), strict: false, origin: i }),
                Constraint::Lt(t) => rows.push(Row { term: t.clone(), strict: true, origin: i }),
                Constraint::Eq(t) => {
                    rows.push(Row { term: t.clone(), strict: false, origin: i });
                    rows.push(Row { term: t.negated(), strict: false, origin: i });
                }
                Constraint::Ne(_) => {}
            }
        }
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Sat(Witness),
    Unsat(Certificate),
}

impl FeasibilityResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, FeasibilityResult::Sat(_))
    }
}

/// Decides a conjunction of constraints exactly.
pub fn check_constraints(constraints: &[Constraint]) -> FeasibilityResult {
    let result = decide(constraints);
    audit::record(constraints, &result);
    result
}

/// Decides a conjunction of literals over linear atoms.
pub fn check_feasible(atoms: &AtomTable, lits: &[Literal]) -> Result<FeasibilityResult, TheoryError> {
    let constraints = lits.iter().map(|l| Constraint::of_literal(atoms, *l)).collect::<Result<Vec<_>, _>>()?;
    Ok(check_constraints(&constraints))
}

fn decide(constraints: &[Constraint]) -> FeasibilityResult {
    let rows = Row::expand(constraints);
    let base = match fm::eliminate(&rows) {
        FmOutcome::Infeasible(cert) => return FeasibilityResult::Unsat(Certificate::Farkas(cert)),
        FmOutcome::Feasible(w) => w,
    };

    let diseqs: Vec<(usize, &LinTerm)> = constraints
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            Constraint::Ne(t) => Some((i, t)),
            _ => None,
        })
        .collect();

    let mut point = base;
    for (k, &(idx, t)) in diseqs.iter().enumerate() {
        if !t.eval(&point).is_zero() {
            continue;
        }
        let escape = match off_hyperplane(&rows, t, idx) {
            Ok(p) => p,
            Err(cert) => return FeasibilityResult::Unsat(cert),
        };
        point = blend(&point, &escape, t, &diseqs[..k]);
    }
    for (_, t) in &diseqs {
        for v in t.vars() {
            point.entry(v).or_insert_with(BigRational::zero);
        }
    }
    FeasibilityResult::Sat(point)
}

/// A point of the relaxed polyhedron with `t != 0`, or a proof that none exists.
fn off_hyperplane(rows: &[Row], t: &LinTerm, idx: usize) -> Result<Witness, Certificate> {
    let mut below = rows.to_vec();
    below.push(Row { term: t.clone(), strict: true, origin: idx });
    let below_cert = match fm::eliminate(&below) {
        FmOutcome::Feasible(p) => return Ok(p),
        FmOutcome::Infeasible(c) => c,
    };
    let mut above = rows.to_vec();
    above.push(Row { term: t.negated(), strict: true, origin: idx });
    match fm::eliminate(&above) {
        FmOutcome::Feasible(p) => Ok(p),
        FmOutcome::Infeasible(above_cert) => {
            Err(Certificate::Disequality { constraint: idx, below: below_cert, above: above_cert })
        }
    }
}

/// Moves from `q` towards `p` (with `t(q) = 0`, `t(p) != 0`) far enough to
/// leave the hyperplane of `t` without landing on the hyperplane of any
/// already-satisfied disequality in `done`.
fn blend(q: &Witness, p: &Witness, t: &LinTerm, done: &[(usize, &LinTerm)]) -> Witness {
    let mut forbidden = Vec::new();
    for (_, s) in done {
        let (sq, sp) = (s.eval(q), s.eval(p));
        if sq != sp {
            // s((1-e) q + e p) = sq + e (sp - sq) vanishes at e = sq / (sq - sp).
            forbidden.push(&sq / (&sq - &sp));
        }
    }
    let mut k = 1i64;
    let eps = loop {
        let e = BigRational::new(1.into(), k.into());
        if !forbidden.contains(&e) {
            break e;
        }
        k += 1;
    };
    debug_assert!(!t.eval(p).is_zero());
    let keep = BigRational::one() - &eps;
    let mut out = Witness::new();
    for v in q.keys().chain(p.keys()) {
        let qv = q.get(v).cloned().unwrap_or_else(BigRational::zero);
        let pv = p.get(v).cloned().unwrap_or_else(BigRational::zero);
        out.insert(*v, &keep * qv + &eps * pv);
    }
    out
}

/// Deletion-based minimization: the result is infeasible and dropping any
/// single element makes it feasible.
pub fn minimize_core(atoms: &AtomTable, core: &[Literal]) -> Result<Vec<Literal>, TheoryError> {
    if check_feasible(atoms, core)?.is_sat() {
        return Err(TheoryError::NotInfeasible);
    }
    let mut kept: Vec<Literal> = core.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if check_feasible(atoms, &trial)?.is_sat() {
            i += 1;
        } else {
            kept = trial;
        }
    }
    Ok(kept)
}
