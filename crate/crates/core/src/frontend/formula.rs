use std::collections::BTreeSet;

use super::atom::AtomTable;
use crate::literal::{Literal, Var};

/// Boolean structure over atom literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    True,
    False,
    Lit(Literal),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn negation(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Expr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Expr, b: Expr) -> Expr {
        Expr::And(vec![Expr::implies(a.clone(), b.clone()), Expr::implies(b, a)])
    }

    /// Evaluates under a total assignment of the atom variables.
    pub fn eval(&self, value: &dyn Fn(Var) -> bool) -> bool {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Lit(l) => value(l.var()) == l.is_positive(),
            Expr::Not(e) => !e.eval(value),
            Expr::And(es) => es.iter().all(|e| e.eval(value)),
            Expr::Or(es) => es.iter().any(|e| e.eval(value)),
            Expr::Implies(a, b) => !a.eval(value) || b.eval(value),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::True | Expr::False => {}
            Expr::Lit(l) => {
                out.insert(l.var());
            }
            Expr::Not(e) => e.collect_vars(out),
            Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| e.collect_vars(out)),
            Expr::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// A parsed QF_LRA formula: the conjunction of all assertions plus its atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub expr: Expr,
    pub atoms: AtomTable,
}

impl Formula {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }
}

/// The ordered atom table of `f` (ids `1..=n`, first-occurrence order).
pub fn atoms_of(f: &Formula) -> &AtomTable {
    &f.atoms
}
