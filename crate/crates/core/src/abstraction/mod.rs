//! Boolean abstraction and CNF conversion.
//!
//! Atom ids double as Boolean variable ids, so abstraction keeps the tree
//! and records which variables stand for which atoms. CNF conversion is a
//! full (biconditional) Tseitin encoding: every auxiliary variable is
//! functionally determined by the atom variables, which keeps model counts
//! over atoms unchanged without any projection.

mod cnf;

use std::fmt::Write as _;
use std::sync::Arc;

pub use cnf::{to_cnf, Nnf};

use crate::frontend::{AtomKind, AtomTable, Expr, Formula};
use crate::literal::{Literal, Var};

/// Bijection between non-auxiliary Boolean variables and atoms. Variable `v`
/// stands for atom `v`; variables above [`AtomMap::num_atoms`] are auxiliary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMap {
    table: Arc<AtomTable>,
}

impl AtomMap {
    pub fn new(table: Arc<AtomTable>) -> Self {
        AtomMap { table }
    }

    pub fn table(&self) -> &Arc<AtomTable> {
        &self.table
    }

    pub fn num_atoms(&self) -> u32 {
        self.table.len() as u32
    }

    pub fn atom(&self, var: Var) -> Option<&AtomKind> {
        self.table.get(var)
    }

    pub fn is_aux(&self, var: Var) -> bool {
        var > self.num_atoms()
    }

    pub fn is_linear(&self, var: Var) -> bool {
        self.table.is_linear(var)
    }
}

/// Propositional image of a formula: same tree, leaves are Boolean variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropFormula {
    pub expr: Expr,
    pub num_atoms: u32,
}

pub fn boolean_abstract(f: &Formula) -> (PropFormula, AtomMap) {
    let map = AtomMap::new(Arc::new(f.atoms.clone()));
    (PropFormula { expr: f.expr.clone(), num_atoms: map.num_atoms() }, map)
}

/// CNF over atom variables followed by Tseitin auxiliaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseDb {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Literal>>,
    /// Indexed by variable; entry 0 is unused.
    pub aux_mark: Vec<bool>,
}

impl ClauseDb {
    pub fn new(num_atoms: u32) -> Self {
        ClauseDb { num_vars: num_atoms, clauses: Vec::new(), aux_mark: vec![false; num_atoms as usize + 1] }
    }

    pub fn num_atoms(&self) -> u32 {
        self.aux_mark.iter().skip(1).filter(|a| !**a).count() as u32
    }

    pub fn fresh_aux(&mut self) -> Var {
        self.num_vars += 1;
        self.aux_mark.push(true);
        self.num_vars
    }

    pub fn is_aux(&self, v: Var) -> bool {
        self.aux_mark.get(v as usize).copied().unwrap_or(false)
    }

    /// Adds a clause after sorting and deduplicating its literals. Tautologies
    /// are dropped. Returns whether anything was added.
    pub fn add_clause(&mut self, mut lits: Vec<Literal>) -> bool {
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return false;
        }
        self.clauses.push(lits);
        true
    }

    /// DIMACS rendering with `c atom <var> <atom>` comment lines.
    pub fn to_dimacs(&self, map: &AtomMap) -> String {
        let mut out = String::new();
        for v in 1..=map.num_atoms() {
            writeln!(out, "c atom {v} {}", map.table().serialize(v)).unwrap();
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(out, "{} ", l.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}
