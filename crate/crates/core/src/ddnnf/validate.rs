use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;

use super::{check_totality, count, enumerate, DdnnfGraph, Node, NodeId, QueryError, VarSet};
use crate::literal::Literal;
use crate::lra::check_feasible;

/// Largest captured-assignment count the theory-level validator enumerates.
pub const DEFAULT_THEORY_BOUND: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationLevel {
    Structural,
    /// Structural checks plus theory feasibility of every captured assignment.
    Theory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Determinism { node: NodeId, reason: String },
    Decomposability { node: NodeId, var: u32 },
    Totality(String),
    TheoryUnsat(Vec<Literal>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Determinism { node, reason } => write!(f, "determinism: node {node}: {reason}"),
            Violation::Decomposability { node, var } => {
                write!(f, "decomposability: node {node}: variable {var} shared by AND children")
            }
            Violation::Totality(msg) => write!(f, "totality: {msg}"),
            Violation::TheoryUnsat(a) => {
                let lits: Vec<String> = a.iter().map(|l| l.to_string()).collect();
                write!(f, "theory: unsatisfiable assignment [{}]", lits.join(" "))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Assignments checked against the theory.
    pub theory_checked: usize,
    /// Set when the theory check was skipped because the count exceeded the
    /// bound; holds that count.
    pub theory_skipped: Option<BigUint>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn theory_unsat(&self) -> impl Iterator<Item = &Vec<Literal>> {
        self.violations.iter().filter_map(|v| match v {
            Violation::TheoryUnsat(a) => Some(a),
            _ => None,
        })
    }
}

fn top_literals(g: &DdnnfGraph, id: NodeId) -> Vec<Literal> {
    match g.node(id) {
        Node::Lit(l) => vec![*l],
        Node::And(cs) => cs
            .iter()
            .filter_map(|c| match g.node(*c) {
                Node::Lit(l) => Some(*l),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn check_determinism(g: &DdnnfGraph, id: NodeId, decision: u32, children: &[NodeId]) -> Option<String> {
    if decision == 0 {
        return Some("decision variable unknown".into());
    }
    let [a, b] = children else {
        return Some(format!("{} children instead of 2", children.len()));
    };
    let polarity = |c: NodeId| -> Option<bool> {
        top_literals(g, c).iter().find(|l| l.var() == decision).map(|l| l.is_positive())
    };
    match (polarity(*a), polarity(*b)) {
        (Some(p), Some(q)) if p != q => None,
        (Some(_), Some(_)) => Some(format!("both children assert the same polarity of {decision}")),
        _ => Some(format!("a child of node {id} lacks a top-level literal on {decision}")),
    }
}

/// Checks the structural d-DNNF properties, and at [`ValidationLevel::Theory`]
/// also that every captured assignment is theory-satisfiable (skipped when
/// the count exceeds `theory_bound`).
pub fn validate(g: &DdnnfGraph, level: ValidationLevel, theory_bound: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut vars: HashMap<NodeId, VarSet> = HashMap::new();
    for id in g.reachable() {
        let mut scope = VarSet::with_capacity(g.num_vars());
        match g.node(id) {
            Node::True | Node::False => {}
            Node::Lit(l) => scope.insert(l.var()),
            Node::And(cs) => {
                for c in cs {
                    let s = &vars[c];
                    if scope.intersects(s) {
                        let shared = s.iter().find(|v| scope.contains(*v)).unwrap();
                        report.violations.push(Violation::Decomposability { node: id, var: shared });
                    }
                    scope.union_with(s);
                }
            }
            Node::Or { decision, children } => {
                if let Some(reason) = check_determinism(g, id, *decision, children) {
                    report.violations.push(Violation::Determinism { node: id, reason });
                }
                for c in children {
                    scope.union_with(&vars[c]);
                }
            }
        }
        vars.insert(id, scope);
    }
    let total = match check_totality(g) {
        Ok(()) => true,
        Err(QueryError::NotTotal(msg)) => {
            report.violations.push(Violation::Totality(msg));
            false
        }
        Err(e) => {
            report.violations.push(Violation::Totality(e.to_string()));
            false
        }
    };

    if level == ValidationLevel::Theory && total {
        let n = count(g).expect("totality checked");
        if n > BigUint::from(theory_bound) {
            report.theory_skipped = Some(n);
        } else {
            let atoms = g.atom_map().table();
            for assignment in enumerate(g, theory_bound).expect("totality checked") {
                let linear: Vec<Literal> = assignment.iter().copied().filter(|l| atoms.is_linear(l.var())).collect();
                report.theory_checked += 1;
                if !check_feasible(atoms, &linear).expect("linear literals").is_sat() {
                    report.violations.push(Violation::TheoryUnsat(assignment));
                }
            }
        }
    }
    report
}
