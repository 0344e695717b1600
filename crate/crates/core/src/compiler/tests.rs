use num_bigint::BigUint;

use super::*;
use crate::abstraction::{boolean_abstract, to_cnf, AtomMap, ClauseDb};
use crate::ddnnf::{condense, count, enumerate, export_nnf, validate, ValidationLevel, DEFAULT_THEORY_BOUND};
use crate::frontend::{parse_smt2, AtomKind, AtomTable, CmpOp, Leaf, LinTerm, RealVar};
use crate::oracle::brute_counts;

const FIG1: &str = "(declare-const x Real)(declare-const y Real)\
    (assert (and (or (< x (- y 1)) (> x (+ y 1))) (or (not (< x (- y 1))) (> x 20))))";
const SEC2: &str = "(declare-const x Real)(declare-const A Bool)\
    (assert (and (or (<= x 0) (>= x 1)) (or A (<= x 0))))";

fn pos(v: u32) -> Literal {
    Literal::positive(v)
}

fn neg(v: u32) -> Literal {
    Literal::negative(v)
}

fn pipeline(src: &str) -> (ClauseDb, AtomMap) {
    let (p, map) = boolean_abstract(&parse_smt2(src).unwrap());
    (to_cnf(&p), map)
}

fn count_with(src: &str, cfg: &CompileConfig) -> u64 {
    let (db, map) = pipeline(src);
    let (g, _) = compile(&db, &map, cfg);
    let r = validate(&g, ValidationLevel::Structural, DEFAULT_THEORY_BOUND);
    assert!(r.is_ok(), "{:?}", r.violations);
    u64::try_from(count(&g).unwrap()).unwrap()
}

fn bool_db(n: u32, clauses: &[&[Literal]]) -> ClauseDb {
    let mut db = ClauseDb::new(n);
    for c in clauses {
        db.add_clause(c.to_vec());
    }
    db
}

#[test]
fn figure_one_counts() {
    assert_eq!(count_with(FIG1, &CompileConfig::default()), 3);
    assert_eq!(count_with(FIG1, &CompileConfig::with_mode(Mode::Agnostic)), 4);
    assert_eq!(count_with(FIG1, &CompileConfig::with_mode(Mode::Eager)), 3);
}

#[test]
fn figure_one_lazy_paths_are_consistent() {
    let (db, map) = pipeline(FIG1);
    let (g, _) = compile(&db, &map, &CompileConfig::default());
    let models = enumerate(&g, 100).unwrap();
    // B1, B2 and A are the negative literals of atoms 1, 2, 3.
    assert!(!models.iter().any(|m| m.contains(&neg(1)) && m.contains(&neg(2))));
    assert!(validate(&g, ValidationLevel::Theory, DEFAULT_THEORY_BOUND).is_ok());

    let (g, _) = compile(&db, &map, &CompileConfig::with_mode(Mode::Agnostic));
    let r = validate(&g, ValidationLevel::Theory, DEFAULT_THEORY_BOUND);
    let bad: Vec<_> = r.theory_unsat().collect();
    assert_eq!(bad, vec![&vec![neg(1), neg(2), neg(3)]]);
}

#[test]
fn figure_one_condensed_shape() {
    let (db, map) = pipeline(FIG1);
    let cfg = CompileConfig { condense_output: true, ..CompileConfig::default() };
    let (g, _) = compile(&db, &map, &cfg);
    assert_eq!(count(&g).unwrap(), BigUint::from(3u32));
    let c = condense(&g).unwrap();
    // Or(B2, And(B1, A)).
    let (nnf, _) = export_nnf(&c);
    assert_eq!(nnf, "nnf 5 4 3\nL -2\nL -1\nL -3\nA 2 1 2\nO 1 2 0 3\n");
    assert!(count(&c).is_err());
}

#[test]
fn section_two_example() {
    for mode in [Mode::Lazy, Mode::Eager] {
        assert_eq!(count_with(SEC2, &CompileConfig::with_mode(mode)), 3);
    }
    assert_eq!(count_with(SEC2, &CompileConfig::with_mode(Mode::Agnostic)), 5);
}

#[test]
fn unsatisfiable_input_is_false() {
    let (db, map) = pipeline("(declare-const x Real)(assert (and (<= x 0) (>= x 1)))");
    let (g, _) = compile(&db, &map, &CompileConfig::default());
    assert_eq!(g.root(), crate::ddnnf::GraphBuilder::FALSE);
    let (db, map) = pipeline("(assert false)");
    assert_eq!(compile(&db, &map, &CompileConfig::default()).0.root(), crate::ddnnf::GraphBuilder::FALSE);
}

#[test]
fn unit_propagation_examples() {
    let a = pos(1);
    let b = pos(2);
    let db = bool_db(2, &[&[a], &[!a, b]]);
    assert_eq!(unit_propagate(&db, &[]), Ok(vec![a, b]));
    let db = bool_db(1, &[&[a], &[!a]]);
    assert!(unit_propagate(&db, &[]).is_err());
    let db = bool_db(2, &[&[a, b]]);
    assert_eq!(unit_propagate(&db, &[!a]), Ok(vec![b]));
    let db = bool_db(2, &[&[a, b], &[a, !b]]);
    assert!(matches!(unit_propagate(&db, &[!a]), Err(BoolConflict(c)) if c.len() == 2 && c[0] == a));
}

const FPRIME: &str = "(declare-const x Real)(declare-const y Real)\
    (assert (and (or (< x 3) (> x 5)) (or (< y 0) (> y 4))))";

#[test]
fn entangling_trail_merges_components() {
    let (db, map) = pipeline(FPRIME);
    let cfg = CompileConfig::default();
    assert_eq!(split_components(&db, &map, &[], &[], &cfg).len(), 2);

    // x + y < 5 is a new atom: ¬(5 - x - y <= 0).
    let mut table = (**map.table()).clone();
    let (x, y) = (table.real_var("x").unwrap(), table.real_var("y").unwrap());
    let sum = LinTerm::var(x).plus(&LinTerm::var(y));
    let Leaf::Lit(t) = table.normalize_comparison(CmpOp::Lt, &sum, &LinTerm::constant(crate::frontend::rat(5))) else {
        panic!("not an atom")
    };
    let map2 = AtomMap::new(std::sync::Arc::new(table));
    let mut db2 = db.clone();
    db2.num_vars += 1;
    db2.aux_mark.push(false);
    let comps = split_components(&db2, &map2, &[t], &[t], &cfg);
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].reals, vec![x, y]);
    assert_eq!(comps[0].trail, vec![0]);

    let off = CompileConfig { components: false, ..cfg };
    assert_eq!(split_components(&db, &map, &[], &[], &off).len(), 1);
}

#[test]
fn propositional_components() {
    let (a, b, c, d) = (pos(1), pos(2), pos(3), pos(4));
    let db = bool_db(4, &[&[a, b], &[c, d]]);
    let mut t = AtomTable::new();
    for n in ["a", "b", "c", "d"] {
        t.bool_atom(n);
    }
    let map = AtomMap::new(std::sync::Arc::new(t));
    let comps = split_components(&db, &map, &[], &[], &CompileConfig::default());
    assert_eq!(comps.iter().map(|c| c.vars.clone()).collect::<Vec<_>>(), vec![vec![1, 2], vec![3, 4]]);
    assert_eq!(comps[0].clauses, vec![0]);
    // Satisfied clauses drop out.
    let comps = split_components(&db, &map, &[a], &[], &CompileConfig::default());
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0].vars, vec![2]);
    assert!(comps[0].clauses.is_empty());
}

#[test]
fn cache_keys() {
    let k = |trail: Vec<Literal>| CacheKey::new(vec![1, 2], vec![vec![pos(2), pos(1)]], trail);
    let mut cache = Cache::new();
    cache.store(k(vec![pos(5)]), 7);
    assert_eq!(cache.lookup(&k(vec![pos(5)])), Some(7));
    assert_eq!(cache.lookup(&k(vec![neg(5)])), None);
    cache.store(k(vec![pos(5)]), 9);
    assert_eq!(cache.lookup(&k(vec![pos(5)])), Some(7));
    assert_eq!(CacheKey::new(vec![2, 1], vec![vec![pos(1), pos(2)]], vec![]), k(vec![]));
}

/// Copies of one clause over reals x, y are entangled by a shared trail atom
/// only in some branches; audited caching must agree with recompilation.
#[test]
fn cache_respects_projected_trail() {
    let src = "(declare-const x Real)(declare-const y Real)(declare-const z Real)(declare-const P Bool)\
        (assert (and (or P (< (+ x y) 5)) (or (not P) (> (+ x y) 7)) (or (< x 0) (> y 4)) (or (< z 1) (> z 2))))";
    let f = parse_smt2(src).unwrap();
    let (_, aware) = brute_counts(&f).unwrap();
    for cache in [false, true] {
        let cfg = CompileConfig { cache, audit_cache: true, ..CompileConfig::default() };
        assert_eq!(count_with(src, &cfg), aware);
    }
}

#[test]
fn decide_examples() {
    let (a, b, c) = (pos(1), pos(2), pos(3));
    let db = bool_db(3, &[&[a, b], &[a, c]]);
    assert_eq!(decide(&db, &[], Heuristic::Dlcs, 0), Ok(a));
    let db = bool_db(2, &[&[a, b]]);
    assert_eq!(decide(&db, &[], Heuristic::FixedOrder, 0), Ok(a));
    assert_eq!(decide(&db, &[], Heuristic::Dlcs, 0), Ok(a));
    let db = bool_db(3, &[&[!b, c], &[!b, !c]]);
    assert_eq!(decide(&db, &[], Heuristic::Dlcs, 0), Ok(!b));
    assert_eq!(decide(&db, &[a, b, c], Heuristic::Dlcs, 0), Err(CompileError::NoUnassigned));
}

#[test]
fn learned_clauses() {
    let f = parse_smt2(FIG1).unwrap();
    assert_eq!(learn_theory_clause(&[pos(2), pos(1)]), vec![neg(1), neg(2)]);
    assert_eq!(learn_theory_clause(&[neg(4)]), vec![pos(4)]);
    assert!(matches!(f.atoms.kind(1), AtomKind::Leq(_)));
    let core = crate::lra::minimize_core(&f.atoms, &[neg(1), neg(2), neg(3)]).unwrap();
    assert_eq!(learn_theory_clause(&core), vec![pos(1), pos(2)]);
}

#[test]
fn learning_fires_without_changing_counts() {
    // Every branch pair B1, B2 is a theory conflict; propagation is disabled
    // so the conflicts surface at assertion time.
    let src = "(declare-const x Real)(declare-const y Real)(declare-const P Bool)(declare-const Q Bool)\
        (assert (and (or (< x (- y 1)) P) (or (> x (+ y 1)) Q) (or P Q)))";
    let f = parse_smt2(src).unwrap();
    let (_, aware) = brute_counts(&f).unwrap();
    let (db, map) = pipeline(src);
    let mut learned = Vec::new();
    for learning in [false, true] {
        let cfg = CompileConfig { learning, propagation_budget: Some(0), ..CompileConfig::default() };
        let (g, stats) = compile(&db, &map, &cfg);
        assert_eq!(u64::try_from(count(&g).unwrap()).unwrap(), aware);
        assert!(stats.conflicts > 0);
        learned.push(stats.learned);
    }
    assert_eq!(learned[0], 0);
    assert!(learned[1] > 0);
}

#[test]
fn independent_atom_is_a_free_choice() {
    let src = "(declare-const x Real)(declare-const A Bool)(assert (or A (not A) (<= x 0)))";
    assert_eq!(count_with(src, &CompileConfig::default()), 4);
    let _ = RealVar(0);
}

#[test]
fn stats_text_block() {
    let (db, map) = pipeline(FIG1);
    let (g, s) = compile(&db, &map, &CompileConfig::default());
    assert_eq!((s.nodes, s.edges), g.size());
    let text = s.to_string();
    let keys: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(
        keys,
        [
            "decisions",
            "bool_props",
            "theory_props",
            "theory_checks",
            "conflicts",
            "learned",
            "components",
            "cache_hits",
            "cache_misses",
            "nodes",
            "edges",
            "wall_ms"
        ]
    );
}
