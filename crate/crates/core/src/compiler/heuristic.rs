use std::collections::{BTreeMap, HashSet};

use super::{CompileError, Heuristic};
use crate::abstraction::ClauseDb;
use crate::literal::{Literal, Var};

/// Picks a branching literal among `vars` given the unassigned literals of
/// the residual clauses.
pub(crate) fn choose<'a>(
    vars: &[Var],
    residual: impl IntoIterator<Item = &'a [Literal]>,
    heuristic: Heuristic,
) -> Option<Literal> {
    let lowest = *vars.iter().min()?;
    match heuristic {
        Heuristic::FixedOrder => Some(Literal::positive(lowest)),
        Heuristic::Dlcs => {
            let mut occ: BTreeMap<Var, (usize, usize)> = vars.iter().map(|&v| (v, (0, 0))).collect();
            for c in residual {
                for l in c {
                    if let Some(e) = occ.get_mut(&l.var()) {
                        if l.is_positive() {
                            e.0 += 1;
                        } else {
                            e.1 += 1;
                        }
                    }
                }
            }
            let mut best = (lowest, (0, 0));
            for (&v, &(p, n)) in &occ {
                if p + n > best.1 .0 + best.1 .1 {
                    best = (v, (p, n));
                }
            }
            let (v, (p, n)) = best;
            Some(Literal::new(v, p >= n))
        }
    }
}

/// Branching literal for `db` under `assignment`. The seed is accepted for
/// interface stability; both heuristics are deterministic.
pub fn decide(db: &ClauseDb, assignment: &[Literal], heuristic: Heuristic, _seed: u64) -> Result<Literal, CompileError> {
    let assigned: HashSet<Var> = assignment.iter().map(|l| l.var()).collect();
    let vars: Vec<Var> = (1..=db.num_vars).filter(|v| !assigned.contains(v)).collect();
    let residual: Vec<Vec<Literal>> = db
        .clauses
        .iter()
        .filter(|c| !c.iter().any(|l| assignment.contains(l)))
        .map(|c| c.iter().copied().filter(|l| !assigned.contains(&l.var())).collect())
        .collect();
    choose(&vars, residual.iter().map(Vec::as_slice), heuristic).ok_or(CompileError::NoUnassigned)
}
