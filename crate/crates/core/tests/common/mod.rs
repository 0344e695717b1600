//! Shared helpers for the integration tests: a seeded random instance
//! generator and small pipeline wrappers.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use smtc_core::abstraction::{boolean_abstract, to_cnf, AtomMap, ClauseDb};
use smtc_core::frontend::{parse_smt2, Formula};

pub const FIG1: &str = "(declare-const x Real)(declare-const y Real)\
    (assert (and (or (< x (- y 1)) (> x (+ y 1))) (or (not (< x (- y 1))) (> x 20))))";
pub const SEC2: &str = "(declare-const x Real)(declare-const A Bool)\
    (assert (and (or (<= x 0) (>= x 1)) (or A (<= x 0))))";

const REALS: [&str; 3] = ["x", "y", "z"];
const OPS: [&str; 6] = ["<=", "<", ">=", ">", "=", "distinct"];

fn linear_atom(rng: &mut StdRng, num_reals: usize) -> String {
    let mut terms = Vec::new();
    while terms.is_empty() {
        for r in REALS.iter().take(num_reals) {
            if rng.gen_bool(0.6) {
                let c: i64 = *[-2, -1, 1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
                terms.push(match c {
                    1 => r.to_string(),
                    c if c < 0 => format!("(* (- {}) {r})", -c),
                    c => format!("(* {c} {r})"),
                });
            }
        }
    }
    let lhs = if terms.len() == 1 { terms.pop().unwrap() } else { format!("(+ {})", terms.join(" ")) };
    let op = OPS[rng.gen_range(0..OPS.len())];
    let k: i64 = rng.gen_range(-3..=3);
    let rhs = if k < 0 { format!("(- {})", -k) } else { k.to_string() };
    format!("({op} {lhs} {rhs})")
}

/// A random QF_LRA instance: at most 8 atom expressions (Boolean and linear,
/// over at most 3 reals), at most 12 top-level clauses of width at most 3,
/// some of whose literals are nested conjunctions or implications.
pub fn random_instance(seed: u64) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let num_reals = rng.gen_range(1..=3);
    let num_atoms = rng.gen_range(2..=8);
    let mut pool = Vec::new();
    let mut bools = Vec::new();
    for i in 0..num_atoms {
        if rng.gen_bool(0.3) {
            let name = format!("p{i}");
            pool.push(name.clone());
            bools.push(name);
        } else {
            pool.push(linear_atom(&mut rng, num_reals));
        }
    }
    let lit = |rng: &mut StdRng| {
        let a = &pool[rng.gen_range(0..pool.len())];
        if rng.gen_bool(0.5) {
            format!("(not {a})")
        } else {
            a.clone()
        }
    };
    let mut src = String::from("(set-logic QF_LRA)\n");
    for r in REALS.iter().take(num_reals) {
        src += &format!("(declare-const {r} Real)\n");
    }
    for b in &bools {
        src += &format!("(declare-const {b} Bool)\n");
    }
    let num_clauses = rng.gen_range(1..=12);
    for _ in 0..num_clauses {
        let width = rng.gen_range(1..=3);
        let mut parts = Vec::new();
        for _ in 0..width {
            parts.push(match rng.gen_range(0..10) {
                0 => format!("(and {} {})", lit(&mut rng), lit(&mut rng)),
                1 => format!("(=> {} {})", lit(&mut rng), lit(&mut rng)),
                _ => lit(&mut rng),
            });
        }
        let clause = if parts.len() == 1 { parts.pop().unwrap() } else { format!("(or {})", parts.join(" ")) };
        src += &format!("(assert {clause})\n");
    }
    src += "(check-sat)\n";
    src
}

pub fn pipeline(src: &str) -> (Formula, ClauseDb, AtomMap) {
    let f = parse_smt2(src).expect("generated instances parse");
    let (p, map) = boolean_abstract(&f);
    (f, to_cnf(&p), map)
}
