//! Knowledge compilation by exhaustive DPLL(T).
//!
//! The search branches on variables until every one is assigned, recording
//! each decision as a binary OR node and the literals it forces as AND
//! conjuncts. Subproblems that share no Boolean variable, no real variable
//! and no entangling trail literal are compiled separately under an AND
//! node. Results are cached per subproblem, keyed on the residual clauses
//! together with the part of the theory trail the subproblem can see.

mod cache;
mod components;
mod config;
mod heuristic;
mod propagate;
mod search;

use std::fmt;

use thiserror::Error;

pub use cache::{Cache, CacheKey};
pub use components::{split_components, Component};
pub use config::{CompileConfig, Heuristic, Mode};
pub use heuristic::decide;
pub use propagate::{unit_propagate, BoolConflict};
pub use search::compile;

use crate::literal::Literal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("no unassigned variable to branch on")]
    NoUnassigned,
}

/// Clause blocking an infeasible theory core: the disjunction of the negated
/// core literals. Atom ids are Boolean variables, so no renaming is needed.
pub fn learn_theory_clause(core: &[Literal]) -> Vec<Literal> {
    let mut clause: Vec<Literal> = core.iter().map(|&l| !l).collect();
    clause.sort_unstable();
    clause.dedup();
    clause
}

/// Search statistics of one compilation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub decisions: u64,
    pub bool_props: u64,
    pub theory_props: u64,
    pub theory_checks: u64,
    pub conflicts: u64,
    pub learned: u64,
    pub components: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    pub nodes: usize,
    pub edges: usize,
    pub wall_ms: f64,
}

impl Stats {
    /// Integer counters by key, in output order. `wall_ms` is separate.
    pub fn counters(&self) -> [(&'static str, u64); 11] {
        [
            ("decisions", self.decisions),
            ("bool_props", self.bool_props),
            ("theory_props", self.theory_props),
            ("theory_checks", self.theory_checks),
            ("conflicts", self.conflicts),
            ("learned", self.learned),
            ("components", self.components),
            ("cache_hits", self.cache_hits),
            ("cache_misses", self.cache_misses),
            ("nodes", self.nodes as u64),
            ("edges", self.edges as u64),
        ]
    }
}

impl fmt::Display for Stats {
    /// One `key value` line per statistic.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.counters() {
            writeln!(f, "{k} {v}")?;
        }
        writeln!(f, "wall_ms {:.3}", self.wall_ms)
    }
}

#[cfg(test)]
mod tests;
