use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::frontend::{rat, AtomTable};

fn bool_map(names: &[&str]) -> AtomMap {
    let mut t = AtomTable::new();
    for n in names {
        t.bool_atom(n);
    }
    AtomMap::new(Arc::new(t))
}

fn pos(v: u32) -> Literal {
    Literal::positive(v)
}

fn neg(v: u32) -> Literal {
    Literal::negative(v)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Or_a(And(a), And(¬a)) over one atom.
fn split_a() -> DdnnfGraph {
    let mut b = GraphBuilder::new();
    let a = b.lit(pos(1), false);
    let na = b.lit(neg(1), false);
    let root = b.or(1, [a, na]);
    b.finish(root, 1, bool_map(&["a"]), false)
}

#[test]
fn count_of_a_split() {
    let g = split_a();
    assert_eq!(count(&g).unwrap(), BigUint::from(2u32));
    let mut w = WeightMap::new();
    w.set(pos(1), half()).unwrap();
    w.set(neg(1), half()).unwrap();
    assert_eq!(weighted_count(&g, &w).unwrap(), rat(1));
    assert!(validate(&g, ValidationLevel::Theory, DEFAULT_THEORY_BOUND).is_ok());
}

#[test]
fn false_counts_zero() {
    let b = GraphBuilder::new();
    let g = b.finish(GraphBuilder::FALSE, 0, bool_map(&[]), false);
    assert_eq!(count(&g).unwrap(), BigUint::from(0u32));
    assert!(enumerate(&g, 10).unwrap().is_empty());
}

#[test]
fn weighted_product() {
    let mut b = GraphBuilder::new();
    let (a, bb) = (b.lit(pos(1), false), b.lit(pos(2), false));
    let root = b.and([a, bb]);
    let g = b.finish(root, 2, bool_map(&["a", "b"]), false);
    let mut w = WeightMap::new();
    w.set(pos(1), rat(2)).unwrap();
    w.set(pos(2), rat(3)).unwrap();
    assert_eq!(weighted_count(&g, &w).unwrap(), rat(6));
    assert_eq!(count(&g).unwrap(), BigUint::from(1u32));
}

#[test]
fn weight_errors() {
    let g = split_a();
    let mut w = WeightMap::strict();
    assert_eq!(w.set(pos(1), rat(-1)), Err(QueryError::NegativeWeight(pos(1))));
    w.set(pos(1), rat(1)).unwrap();
    assert_eq!(weighted_count(&g, &w), Err(QueryError::MissingWeight(neg(1))));
}

#[test]
fn enumerate_respects_cap() {
    let g = split_a();
    assert_eq!(enumerate(&g, 1).unwrap().len(), 1);
    assert_eq!(enumerate(&g, 5).unwrap(), vec![vec![pos(1)], vec![neg(1)]]);
}

#[test]
fn repeated_literal_breaks_decomposability() {
    let mut b = GraphBuilder::new();
    let a = b.lit(pos(1), false);
    let root = b.push(Node::And(vec![a, a]), false);
    let g = b.finish(root, 1, bool_map(&["a"]), false);
    let r = validate(&g, ValidationLevel::Structural, DEFAULT_THEORY_BOUND);
    assert!(r.violations.contains(&Violation::Decomposability { node: root, var: 1 }));
    assert!(matches!(count(&g), Err(QueryError::NotTotal(_))));
}

#[test]
fn same_polarity_breaks_determinism() {
    let mut b = GraphBuilder::new();
    let a = b.lit(pos(1), false);
    let bb = b.lit(pos(2), false);
    let nb = b.lit(neg(2), false);
    let left = b.and([a, bb]);
    let right = b.and([a, nb]);
    let root = b.or(1, [left, right]);
    let g = b.finish(root, 2, bool_map(&["a", "b"]), false);
    let r = validate(&g, ValidationLevel::Structural, DEFAULT_THEORY_BOUND);
    assert!(matches!(r.violations.as_slice(), [Violation::Determinism { node, .. }] if *node == root));
}

#[test]
fn totality_violation_is_reported() {
    let mut b = GraphBuilder::new();
    let root = b.lit(pos(1), false);
    let g = b.finish(root, 2, bool_map(&["a", "b"]), false);
    let r = validate(&g, ValidationLevel::Theory, DEFAULT_THEORY_BOUND);
    assert!(matches!(r.violations.as_slice(), [Violation::Totality(_)]));
    assert_eq!(r.theory_checked, 0);
}

#[test]
fn export_single_literal() {
    let mut b = GraphBuilder::new();
    let root = b.lit(pos(1), false);
    let g = b.finish(root, 1, bool_map(&["a"]), false);
    let (nnf, atoms) = export_nnf(&g);
    assert_eq!(nnf, "nnf 1 0 1\nL 1\n");
    assert_eq!(atoms, "1 bool a\n");
}

#[test]
fn export_conjunction() {
    let mut b = GraphBuilder::new();
    let (a, bb) = (b.lit(pos(1), false), b.lit(pos(2), false));
    let root = b.and([a, bb]);
    let g = b.finish(root, 2, bool_map(&["a", "b"]), false);
    assert_eq!(export_nnf(&g).0, "nnf 3 2 2\nL 1\nL 2\nA 2 0 1\n");
}

#[test]
fn import_roundtrip_and_tags() {
    let mut b = GraphBuilder::new();
    let a = b.lit(pos(1), false);
    let nb = b.lit(neg(2), true);
    let left = b.and([a, nb]);
    let na = b.lit(neg(1), false);
    let bb = b.lit(pos(2), false);
    let nbb = b.lit(neg(2), false);
    let free_b = b.or(2, [bb, nbb]);
    let right = b.and([na, free_b]);
    let root = b.or(1, [left, right]);
    let g = b.finish(root, 2, bool_map(&["a", "b"]), true);
    let (nnf, atoms) = export_nnf(&g);
    assert!(atoms.contains("c implied 1\n"));
    let (h, map) = import_nnf(&nnf, &atoms).unwrap();
    assert_eq!(map.num_atoms(), 2);
    assert!(h.is_tagged());
    assert_eq!(count(&h).unwrap(), count(&g).unwrap());
    assert_eq!(export_nnf(&h), (nnf, atoms));

    let c = condense(&g).unwrap();
    assert!(!c.is_tagged());
    // Dropping !b leaves Or(a, And(!a, Or(b, !b))); both free choices collapse.
    assert_eq!(export_nnf(&c).0, "nnf 1 0 2\nA 0\n");
}

#[test]
fn condense_needs_tags() {
    assert_eq!(condense(&split_a()).unwrap_err(), QueryError::NotTagged);
    let mut b = GraphBuilder::new();
    let root = b.lit(pos(1), false);
    let g = b.finish(root, 1, bool_map(&["a"]), true);
    assert_eq!(export_nnf(&condense(&g).unwrap()), export_nnf(&g));
}

#[test]
fn linear_atoms_roundtrip() {
    let atoms = "1 leq 1*x -1*y 1\n2 eq 2*x 3*z 0\n3 bool A\n";
    let nnf = "nnf 1 0 3\nA 0\n";
    let (g, map) = import_nnf(nnf, atoms).unwrap();
    assert_eq!(map.table().serialize(2), "eq 2*x 3*z 0");
    assert_eq!(export_nnf(&g).1, atoms);
}

#[test]
fn malformed_inputs() {
    let atoms = "1 bool a\n";
    for nnf in [
        "",
        "nnx 1 0 1\nL 1\n",
        "nnf 2 0 1\nL 1\n",
        "nnf 1 0 1\nL 2\n",
        "nnf 2 1 1\nA 1 1\nL 1\n",
        "nnf 1 1 1\nL 1\n",
        "nnf 1 0 1\nX 1\n",
        "nnf 1 0 1\nL 1 2\n",
    ] {
        assert!(matches!(import_nnf(nnf, atoms), Err(FormatError::Nnf { .. })), "{nnf:?}");
    }
    for atoms in ["2 bool a\n", "1 frob a\n", "1 bool a\n2 bool a\n", "1 leq 0\n", "c implied 5\n"] {
        assert!(import_nnf("nnf 1 0 1\nL 1\n", atoms).is_err(), "{atoms:?}");
    }
}

// ---- random graphs ---------------------------------------------------------

/// Random decision-tree style graph: total over `n` atoms by construction.
fn build_tree(b: &mut GraphBuilder, bits: &[bool], v: u32, n: u32, cursor: &mut usize) -> NodeId {
    if v > n {
        let keep = bits[*cursor % bits.len()];
        *cursor += 1;
        return if keep { GraphBuilder::TRUE } else { GraphBuilder::FALSE };
    }
    let branch = |b: &mut GraphBuilder, l: Literal, cursor: &mut usize| {
        let sub = build_tree(b, bits, v + 1, n, cursor);
        let lit = b.lit(l, false);
        b.and([lit, sub])
    };
    let p = branch(b, pos(v), cursor);
    let q = branch(b, neg(v), cursor);
    b.or(v, [p, q])
}

proptest! {
    #[test]
    fn count_matches_enumeration(n in 1u32..6, bits in prop::collection::vec(any::<bool>(), 1..64)) {
        let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut b = GraphBuilder::new();
        let root = build_tree(&mut b, &bits, 1, n, &mut 0);
        let g = b.finish(root, n, bool_map(&refs), false);
        let r = validate(&g, ValidationLevel::Structural, DEFAULT_THEORY_BOUND);
        prop_assert!(r.is_ok(), "{:?}", r);
        let c = count(&g).unwrap();
        let models = enumerate(&g, usize::MAX).unwrap();
        prop_assert_eq!(c.clone(), BigUint::from(models.len()));
        let mut dedup = models.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), models.len());
        prop_assert_eq!(weighted_count(&g, &WeightMap::new()).unwrap(), BigRational::from_integer(c.clone().into()));
        let (nnf, atoms) = export_nnf(&g);
        let (h, _) = import_nnf(&nnf, &atoms).unwrap();
        prop_assert_eq!(count(&h).unwrap(), c);
    }
}
