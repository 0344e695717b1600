use std::cell::Cell;
use std::sync::Arc;

use super::{check_constraints, Constraint, FeasibilityResult, TheoryError, Witness};
use crate::frontend::AtomTable;
use crate::literal::{Literal, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssertOutcome {
    Ok,
    /// Infeasible subset of the trail plus the asserted literal (which it
    /// always contains). The state is left unchanged.
    Conflict(Vec<Literal>),
}

#[derive(Clone, Debug)]
struct Frame {
    lit: Literal,
    level: u32,
    constraint: Constraint,
    /// A point satisfying every constraint up to and including this frame.
    witness: Witness,
}

/// Assertion trail of theory literals with per-frame witnesses.
///
/// Each frame remembers a model of the trail prefix, so asserting a literal
/// the current model already satisfies costs no elimination, and popping
/// restores the previous model exactly.
#[derive(Clone, Debug)]
pub struct TheoryState {
    atoms: Arc<AtomTable>,
    frames: Vec<Frame>,
    empty: Witness,
    checks: Cell<u64>,
}

impl TheoryState {
    pub fn new(atoms: Arc<AtomTable>) -> Self {
        TheoryState { atoms, frames: Vec::new(), empty: Witness::new(), checks: Cell::new(0) }
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    /// Number of full feasibility checks run so far.
    pub fn checks(&self) -> u64 {
        self.checks.get()
    }

    pub fn top_level(&self) -> u32 {
        self.frames.last().map_or(0, |f| f.level)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn trail(&self) -> impl Iterator<Item = (Literal, u32)> + '_ {
        self.frames.iter().map(|f| (f.lit, f.level))
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.frames.iter().map(|f| f.lit)
    }

    pub fn witness(&self) -> &Witness {
        self.frames.last().map_or(&self.empty, |f| &f.witness)
    }

    fn run(&self, extra: Constraint) -> FeasibilityResult {
        self.checks.set(self.checks.get() + 1);
        let mut cs: Vec<Constraint> = self.frames.iter().map(|f| f.constraint.clone()).collect();
        cs.push(extra);
        check_constraints(&cs)
    }

    pub fn assert_literal(&mut self, lit: Literal, level: u32) -> Result<AssertOutcome, TheoryError> {
        let constraint = Constraint::of_literal(&self.atoms, lit)?;
        let top = self.top_level();
        if level < top {
            return Err(TheoryError::LevelRegression { level, top });
        }
        if constraint.holds(self.witness()) {
            let witness = self.witness().clone();
            self.frames.push(Frame { lit, level, constraint, witness });
            return Ok(AssertOutcome::Ok);
        }
        match self.run(constraint.clone()) {
            FeasibilityResult::Sat(witness) => {
                self.frames.push(Frame { lit, level, constraint, witness });
                Ok(AssertOutcome::Ok)
            }
            FeasibilityResult::Unsat(cert) => {
                let mut cs: Vec<Constraint> = self.frames.iter().map(|f| f.constraint.clone()).collect();
                cs.push(constraint);
                let mut core: Vec<Literal> = cert
                    .support(&cs)
                    .into_iter()
                    .filter(|&i| i < self.frames.len())
                    .map(|i| self.frames[i].lit)
                    .collect();
                core.push(lit);
                Ok(AssertOutcome::Conflict(core))
            }
        }
    }

    pub fn pop_to_level(&mut self, level: u32) {
        while self.frames.last().is_some_and(|f| f.level > level) {
            self.frames.pop();
        }
    }

    /// Whether the trail entails `lit`, i.e. `trail and !lit` is infeasible.
    pub fn entails(&self, lit: Literal) -> Result<bool, TheoryError> {
        let negated = Constraint::of_literal(&self.atoms, !lit).map_err(|_| TheoryError::NonTheoryLiteral(lit))?;
        if negated.holds(self.witness()) {
            return Ok(false);
        }
        Ok(!self.run(negated).is_sat())
    }

    /// Theory-entailed literals over `unassigned` atoms, running at most
    /// `budget` entailment checks. Propositional atoms are skipped.
    ///
    /// The current model satisfies exactly one polarity of each atom; the
    /// opposite polarity can never be entailed, so each atom needs one check.
    pub fn propagate_candidates(&self, unassigned: &[Var], budget: usize) -> Vec<Literal> {
        let mut out = Vec::new();
        let mut spent = 0;
        for &v in unassigned {
            if !self.atoms.is_linear(v) {
                continue;
            }
            if spent >= budget {
                break;
            }
            let pos = Literal::positive(v);
            let c = Constraint::of_literal(&self.atoms, pos).expect("linear atom");
            let candidate = if c.holds(self.witness()) { pos } else { !pos };
            spent += 1;
            if self.entails(candidate).expect("linear atom") {
                out.push(candidate);
            }
        }
        out
    }
}
