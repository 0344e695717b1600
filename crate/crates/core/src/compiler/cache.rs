use std::collections::HashMap;

use crate::ddnnf::NodeId;
use crate::literal::{Literal, Var};

/// Identity of a subproblem: its free variables, its residual clauses under
/// the current assignment, and the trail literals sharing real variables with
/// it. Learned clauses are not part of the key; they are theory-entailed and
/// so never change the models of a subproblem.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    vars: Vec<Var>,
    clauses: Vec<Vec<Literal>>,
    trail: Vec<Literal>,
}

impl CacheKey {
    pub fn new(mut vars: Vec<Var>, clauses: impl IntoIterator<Item = Vec<Literal>>, mut trail: Vec<Literal>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        let mut clauses: Vec<Vec<Literal>> = clauses
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        clauses.sort_unstable();
        clauses.dedup();
        trail.sort_unstable();
        trail.dedup();
        CacheKey { vars, clauses, trail }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    map: HashMap<CacheKey, NodeId>,
}

impl Cache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, key: &CacheKey) -> Option<NodeId> {
        self.map.get(key).copied()
    }

    /// Keeps the first node stored under a key.
    pub fn store(&mut self, key: CacheKey, node: NodeId) {
        self.map.entry(key).or_insert(node);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
