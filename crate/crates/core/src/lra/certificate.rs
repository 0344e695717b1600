use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Constraint, Row, Witness};
use crate::frontend::LinTerm;

/// Nonnegative multipliers over rows whose combination is a constant
/// contradiction: `c <= 0` with `c > 0`, or `c < 0` with `c >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    /// `(row index, multiplier)` pairs, multipliers strictly positive.
    pub multipliers: Vec<(usize, BigRational)>,
}

impl FarkasCertificate {
    /// Checks the combination mechanically against `rows`.
    pub fn verify(&self, rows: &[Row]) -> bool {
        let mut sum = LinTerm::zero();
        let mut strict = false;
        for (i, m) in &self.multipliers {
            let Some(row) = rows.get(*i) else { return false };
            if !m.is_positive() {
                return false;
            }
            sum.add_scaled(&row.term, m);
            strict |= row.strict;
        }
        if !sum.is_constant() {
            return false;
        }
        let c = sum.constant_part();
        c.is_positive() || (strict && c.is_zero())
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.multipliers.iter().map(|(i, _)| *i)
    }
}

/// Proof that a constraint system is infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Contradiction among the inequality rows alone.
    Farkas(FarkasCertificate),
    /// The relaxed polyhedron lies inside the hyperplane of disequality
    /// `constraint`: both `P and t < 0` and `P and t > 0` are refuted. Each
    /// certificate ranges over the system rows plus one extra row appended at
    /// index `rows.len()` (`t < 0` for `below`, `-t < 0` for `above`).
    Disequality { constraint: usize, below: FarkasCertificate, above: FarkasCertificate },
}

impl Certificate {
    /// Verifies against the original constraint list.
    pub fn verify(&self, constraints: &[Constraint]) -> bool {
        let rows = Row::expand(constraints);
        match self {
            Certificate::Farkas(f) => f.verify(&rows),
            Certificate::Disequality { constraint, below, above } => {
                let Some(Constraint::Ne(t)) = constraints.get(*constraint) else {
                    return false;
                };
                let mut lo = rows.clone();
                lo.push(Row { term: t.clone(), strict: true, origin: *constraint });
                let mut hi = rows;
                hi.push(Row { term: t.negated(), strict: true, origin: *constraint });
                below.verify(&lo) && above.verify(&hi)
            }
        }
    }

    /// Indices of the original constraints the proof depends on.
    pub fn support(&self, constraints: &[Constraint]) -> BTreeSet<usize> {
        let rows = Row::expand(constraints);
        let origin = |i: usize| rows.get(i).map_or(usize::MAX, |r| r.origin);
        let mut out = BTreeSet::new();
        match self {
            Certificate::Farkas(f) => out.extend(f.rows().map(origin)),
            Certificate::Disequality { constraint, below, above } => {
                out.insert(*constraint);
                out.extend(below.rows().chain(above.rows()).filter(|&i| i < rows.len()).map(origin));
            }
        }
        out.remove(&usize::MAX);
        out
    }
}

/// Exact check that `point` satisfies every constraint.
pub fn witness_satisfies(constraints: &[Constraint], point: &Witness) -> bool {
    constraints.iter().all(|c| c.holds(point))
}
