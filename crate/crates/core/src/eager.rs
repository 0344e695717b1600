//! Eager theory handling: block every small infeasible combination of atom
//! literals up front, so a purely propositional search only meets
//! theory-consistent assignments.

use crate::abstraction::{AtomMap, ClauseDb};
use crate::frontend::AtomTable;
use crate::literal::{Literal, Var};
use crate::lra::check_feasible;

fn connected(atoms: &AtomTable, set: &[Var]) -> bool {
    let reals: Vec<Vec<_>> = set.iter().map(|&v| atoms.real_vars_of(v)).collect();
    let mut reached = vec![false; set.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..set.len() {
            if !reached[j] && reals[j].iter().any(|r| reals[i].contains(r)) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// All minimal infeasible literal sets of size at most `k` over the linear
/// atoms among `vars`, each sorted, in order of size then literal order.
///
/// Sets are visited by increasing size, and sets containing a known core are
/// skipped, so every infeasible set found has only feasible proper subsets.
/// Sets whose atoms are not linked by shared real variables are skipped too:
/// such a set is infeasible only if one of its parts is.
pub fn enumerate_infeasible_cores(atoms: &AtomTable, vars: &[Var], k: usize) -> Vec<Vec<Literal>> {
    let mut linear: Vec<Var> = vars.iter().copied().filter(|&v| atoms.is_linear(v)).collect();
    linear.sort_unstable();
    linear.dedup();
    let mut cores: Vec<Vec<Literal>> = Vec::new();
    for size in 1..=k.min(linear.len()) {
        combinations(linear.len(), size, &mut |idx| {
            let set: Vec<Var> = idx.iter().map(|&i| linear[i]).collect();
            if !connected(atoms, &set) {
                return;
            }
            for mask in 0u32..1 << size {
                let lits: Vec<Literal> =
                    set.iter().enumerate().map(|(i, &v)| Literal::new(v, mask >> i & 1 == 0)).collect();
                if cores.iter().any(|c| c.iter().all(|l| lits.contains(l))) {
                    continue;
                }
                if !check_feasible(atoms, &lits).expect("linear literals").is_sat() {
                    cores.push(lits);
                }
            }
        });
    }
    cores
}

/// `db` plus one blocking clause per infeasible core of size at most `k`.
/// Complete once `k` reaches the number of linear atoms.
pub fn eager_encode(db: &ClauseDb, map: &AtomMap, k: usize) -> ClauseDb {
    let vars: Vec<Var> = (1..=map.num_atoms()).collect();
    let mut out = db.clone();
    for core in enumerate_infeasible_cores(map.table(), &vars, k) {
        out.add_clause(core.iter().map(|&l| !l).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{boolean_abstract, to_cnf};
    use crate::compiler::{compile, CompileConfig, Mode};
    use crate::ddnnf::count;
    use crate::frontend::parse_smt2;
    use num_bigint::BigUint;

    fn table(src: &str) -> AtomTable {
        parse_smt2(src).unwrap().atoms
    }

    #[test]
    fn opposite_bounds_form_a_core() {
        let t = table("(declare-const x Real)(assert (or (<= x 0) (>= x 1)))");
        let cores = enumerate_infeasible_cores(&t, &[1, 2], 2);
        assert_eq!(cores, vec![vec![Literal::positive(1), Literal::positive(2)]]);
    }

    const CYCLE: &str = "(declare-const x Real)(declare-const y Real)(declare-const z Real)\
        (assert (and (< x y) (< y z) (< z x)))";

    #[test]
    fn strict_cycle_needs_all_three() {
        let t = table(CYCLE);
        assert!(enumerate_infeasible_cores(&t, &[1, 2, 3], 2).is_empty());
        let cores = enumerate_infeasible_cores(&t, &[1, 2, 3], 3);
        assert_eq!(cores.len(), 1);
        let f = parse_smt2(CYCLE).unwrap();
        let mut lits: Vec<Literal> = Vec::new();
        if let crate::frontend::Expr::And(cs) = &f.expr {
            for c in cs {
                if let crate::frontend::Expr::Lit(l) = c {
                    lits.push(*l);
                }
            }
        }
        lits.sort();
        assert_eq!(cores[0], lits);
    }

    #[test]
    fn encoding_adds_the_blocking_clause() {
        let f = parse_smt2("(declare-const x Real)(assert (or (<= x 0) (>= x 1)))").unwrap();
        let (p, map) = boolean_abstract(&f);
        let db = to_cnf(&p);
        let enc = eager_encode(&db, &map, 2);
        assert_eq!(enc.clauses.len(), db.clauses.len() + 1);
        assert_eq!(enc.clauses.last().unwrap(), &vec![Literal::negative(1), Literal::negative(2)]);
        let (g, _) = compile(&db, &map, &CompileConfig::with_mode(Mode::Eager));
        assert_eq!(count(&g).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn propositional_input_is_unchanged() {
        let f = parse_smt2("(declare-const A Bool)(declare-const B Bool)(assert (or A B))").unwrap();
        let (p, map) = boolean_abstract(&f);
        let db = to_cnf(&p);
        assert_eq!(eager_encode(&db, &map, 5), db);
    }
}
