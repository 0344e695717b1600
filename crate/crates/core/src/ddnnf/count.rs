use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{DdnnfGraph, Node, NodeId, QueryError, VarSet};
use crate::literal::Literal;

/// Atom scope of a node. `False` is compatible with any scope.
#[derive(Clone, Debug)]
pub(crate) enum Scope {
    Any,
    Set(VarSet),
}

/// Atom scopes of the reachable nodes, or the first totality violation.
pub(crate) fn atom_scopes(g: &DdnnfGraph) -> Result<HashMap<NodeId, Scope>, String> {
    let mut scopes: HashMap<NodeId, Scope> = HashMap::new();
    for id in g.reachable() {
        let scope = match g.node(id) {
            Node::False => Scope::Any,
            Node::True => Scope::Set(VarSet::default()),
            Node::Lit(l) => {
                let mut s = VarSet::with_capacity(g.num_vars());
                if !g.is_aux(l.var()) {
                    s.insert(l.var());
                }
                Scope::Set(s)
            }
            Node::And(cs) => {
                let mut acc = VarSet::with_capacity(g.num_vars());
                let mut any = false;
                for c in cs {
                    match &scopes[c] {
                        Scope::Any => any = true,
                        Scope::Set(s) => {
                            if acc.intersects(s) {
                                return Err(format!("node {id}: AND children share atoms"));
                            }
                            acc.union_with(s);
                        }
                    }
                }
                if any {
                    Scope::Any
                } else {
                    Scope::Set(acc)
                }
            }
            Node::Or { children, .. } => {
                let mut common: Option<&VarSet> = None;
                for c in children {
                    if let Scope::Set(s) = &scopes[c] {
                        match common {
                            None => common = Some(s),
                            Some(prev) if !prev.same_as(s) => {
                                return Err(format!("node {id}: OR children mention different atoms"));
                            }
                            Some(_) => {}
                        }
                    }
                }
                match common {
                    Some(s) => Scope::Set(s.clone()),
                    None => Scope::Any,
                }
            }
        };
        scopes.insert(id, scope);
    }
    Ok(scopes)
}

/// Checks that every root-to-true path assigns every atom exactly once.
pub fn check_totality(g: &DdnnfGraph) -> Result<(), QueryError> {
    let scopes = atom_scopes(g).map_err(QueryError::NotTotal)?;
    if let Scope::Set(s) = &scopes[&g.root()] {
        let n = g.num_atoms();
        if s.len() != n as usize || !(1..=n).all(|v| s.contains(v)) {
            return Err(QueryError::NotTotal(format!("root mentions {} of {} atoms", s.len(), n)));
        }
    }
    Ok(())
}

/// Number of total atom assignments captured by `g`.
pub fn count(g: &DdnnfGraph) -> Result<BigUint, QueryError> {
    check_totality(g)?;
    let mut val: HashMap<NodeId, BigUint> = HashMap::new();
    for id in g.reachable() {
        let v = match g.node(id) {
            Node::True | Node::Lit(_) => BigUint::one(),
            Node::False => BigUint::zero(),
            Node::And(cs) => cs.iter().fold(BigUint::one(), |acc, c| acc * &val[c]),
            Node::Or { children, .. } => children.iter().fold(BigUint::zero(), |acc, c| acc + &val[c]),
        };
        val.insert(id, v);
    }
    Ok(val.remove(&g.root()).unwrap())
}

/// Per-literal nonnegative weights. Unlisted literals weigh the default,
/// which is one unless the map was built with [`WeightMap::strict`].
#[derive(Clone, Debug)]
pub struct WeightMap {
    weights: HashMap<Literal, BigRational>,
    default: Option<BigRational>,
}

impl Default for WeightMap {
    fn default() -> Self {
        Self::new()
    }
}

impl WeightMap {
    pub fn new() -> Self {
        WeightMap { weights: HashMap::new(), default: Some(BigRational::one()) }
    }

    /// A map with no default: every atom literal must be given a weight.
    pub fn strict() -> Self {
        WeightMap { weights: HashMap::new(), default: None }
    }

    pub fn set(&mut self, lit: Literal, w: BigRational) -> Result<(), QueryError> {
        if w.is_negative() {
            return Err(QueryError::NegativeWeight(lit));
        }
        self.weights.insert(lit, w);
        Ok(())
    }

    pub fn get(&self, lit: Literal) -> Result<BigRational, QueryError> {
        self.weights.get(&lit).or(self.default.as_ref()).cloned().ok_or(QueryError::MissingWeight(lit))
    }
}

/// Sum over captured assignments of the product of literal weights.
/// Auxiliary literals weigh one.
pub fn weighted_count(g: &DdnnfGraph, w: &WeightMap) -> Result<BigRational, QueryError> {
    check_totality(g)?;
    let mut val: HashMap<NodeId, BigRational> = HashMap::new();
    for id in g.reachable() {
        let v = match g.node(id) {
            Node::True => BigRational::one(),
            Node::False => BigRational::zero(),
            Node::Lit(l) if g.is_aux(l.var()) => BigRational::one(),
            Node::Lit(l) => w.get(*l)?,
            Node::And(cs) => cs.iter().fold(BigRational::one(), |acc, c| acc * &val[c]),
            Node::Or { children, .. } => children.iter().fold(BigRational::zero(), |acc, c| acc + &val[c]),
        };
        val.insert(id, v);
    }
    Ok(val.remove(&g.root()).unwrap())
}
