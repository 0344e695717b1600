use super::{ClauseDb, PropFormula};
use crate::frontend::Expr;
use crate::literal::Literal;

/// Negation normal form with constants folded and same-kind nesting flattened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Nnf {
    pub fn from_expr(e: &Expr) -> Nnf {
        to_nnf(e, true)
    }
}

fn to_nnf(e: &Expr, positive: bool) -> Nnf {
    match e {
        Expr::True => {
            if positive {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        Expr::False => {
            if positive {
                Nnf::False
            } else {
                Nnf::True
            }
        }
        Expr::Lit(l) => Nnf::Lit(if positive { *l } else { !*l }),
        Expr::Not(inner) => to_nnf(inner, !positive),
        Expr::And(es) => {
            let parts = es.iter().map(|x| to_nnf(x, positive)).collect();
            if positive {
                and(parts)
            } else {
                or(parts)
            }
        }
        Expr::Or(es) => {
            let parts = es.iter().map(|x| to_nnf(x, positive)).collect();
            if positive {
                or(parts)
            } else {
                and(parts)
            }
        }
        // a => b is !a | b
        Expr::Implies(a, b) => {
            if positive {
                or(vec![to_nnf(a, false), to_nnf(b, true)])
            } else {
                and(vec![to_nnf(a, true), to_nnf(b, false)])
            }
        }
    }
}

fn and(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::True => {}
            Nnf::False => return Nnf::False,
            Nnf::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::True,
        1 => out.pop().unwrap(),
        _ => Nnf::And(out),
    }
}

fn or(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::False => {}
            Nnf::True => return Nnf::True,
            Nnf::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::False,
        1 => out.pop().unwrap(),
        _ => Nnf::Or(out),
    }
}

/// Tseitin-encodes `p`. Top-level conjuncts that are literals or disjunctions
/// become clauses directly; only nested subformulas get auxiliaries, each
/// defined by a full biconditional.
pub fn to_cnf(p: &PropFormula) -> ClauseDb {
    let mut db = ClauseDb::new(p.num_atoms);
    match Nnf::from_expr(&p.expr) {
        Nnf::True => {}
        Nnf::False => db.clauses.push(Vec::new()),
        Nnf::And(conjuncts) => {
            for c in &conjuncts {
                encode_root_clause(c, &mut db);
            }
        }
        other => encode_root_clause(&other, &mut db),
    }
    db
}

fn encode_root_clause(n: &Nnf, db: &mut ClauseDb) {
    let lits = match n {
        Nnf::Or(ds) => ds.iter().map(|d| define(d, db)).collect(),
        other => vec![define(other, db)],
    };
    db.add_clause(lits);
}

/// Returns a literal equivalent to `n`, adding definitional clauses for a
/// fresh auxiliary when `n` is compound.
fn define(n: &Nnf, db: &mut ClauseDb) -> Literal {
    match n {
        Nnf::Lit(l) => *l,
        Nnf::And(cs) => {
            let ls: Vec<Literal> = cs.iter().map(|c| define(c, db)).collect();
            let t = Literal::positive(db.fresh_aux());
            for l in &ls {
                db.add_clause(vec![!t, *l]);
            }
            let mut back: Vec<Literal> = ls.iter().map(|l| !*l).collect();
            back.push(t);
            db.add_clause(back);
            t
        }
        Nnf::Or(cs) => {
            let ls: Vec<Literal> = cs.iter().map(|c| define(c, db)).collect();
            let t = Literal::positive(db.fresh_aux());
            for l in &ls {
                db.add_clause(vec![t, !*l]);
            }
            let mut fwd = ls;
            fwd.push(!t);
            db.add_clause(fwd);
            t
        }
        Nnf::True | Nnf::False => unreachable!("constants are folded out of compound NNF nodes"),
    }
}
