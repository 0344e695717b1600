//! Compiled d-DNNF graphs and the queries they support.
//!
//! Node ids are topologically ordered: children always precede parents.
//! Counting assumes totality, i.e. every root-to-true path assigns every
//! atom variable exactly once, so no smoothing pass is needed. Tseitin
//! auxiliaries may appear as literals but never contribute to counts.

mod condense;
mod count;
mod enumerate;
mod io;
mod validate;

use std::collections::HashMap;

pub use condense::condense;
pub use count::{check_totality, count, weighted_count, WeightMap};
pub use enumerate::enumerate;
pub use io::{export_nnf, import_nnf, FormatError};
pub use validate::{validate, ValidationLevel, ValidationReport, Violation, DEFAULT_THEORY_BOUND};

use thiserror::Error;

use crate::abstraction::AtomMap;
use crate::literal::{Literal, Var};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Lit(Literal),
    And(Vec<NodeId>),
    /// Decision node on `decision`; 0 when unknown (foreign files).
    Or { decision: Var, children: Vec<NodeId> },
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::And(cs) | Node::Or { children: cs, .. } => cs,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("graph is not total: {0}")]
    NotTotal(String),
    #[error("no weight given for literal {0}")]
    MissingWeight(Literal),
    #[error("negative weight for literal {0}")]
    NegativeWeight(Literal),
    #[error("graph carries no implied-literal provenance")]
    NotTagged,
}

/// An immutable compiled graph.
#[derive(Clone, Debug)]
pub struct DdnnfGraph {
    nodes: Vec<Node>,
    implied: Vec<bool>,
    root: NodeId,
    num_vars: u32,
    atoms: AtomMap,
    tagged: bool,
}

impl DdnnfGraph {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    /// All stored nodes, including any unreachable from the root.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Whether literal node `id` was tagged as theory-implied.
    pub fn is_implied(&self, id: NodeId) -> bool {
        self.implied[id]
    }

    /// Whether implied-literal provenance was recorded for this graph.
    pub fn is_tagged(&self) -> bool {
        self.tagged
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn atom_map(&self) -> &AtomMap {
        &self.atoms
    }

    pub fn num_atoms(&self) -> u32 {
        self.atoms.num_atoms()
    }

    pub fn is_aux(&self, v: Var) -> bool {
        self.atoms.is_aux(v)
    }

    /// Nodes reachable from the root, children before parents, root last.
    pub fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
                continue;
            }
            if seen[id] {
                continue;
            }
            seen[id] = true;
            stack.push((id, true));
            for &c in self.nodes[id].children().iter().rev() {
                if !seen[c] {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// `(nodes, edges)` reachable from the root.
    pub fn size(&self) -> (usize, usize) {
        let r = self.reachable();
        let edges = r.iter().map(|&id| self.nodes[id].children().len()).sum();
        (r.len(), edges)
    }
}

/// Hash-consing builder. Simplifies on the fly: `And` drops true children,
/// flattens nested `And`s and collapses on false; `Or` drops false children;
/// unary nodes collapse to their child.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    nodes: Vec<Node>,
    implied: Vec<bool>,
    unique: HashMap<(Node, bool), NodeId>,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphBuilder {
    pub const TRUE: NodeId = 0;
    pub const FALSE: NodeId = 1;

    pub fn new() -> Self {
        let mut b = GraphBuilder { nodes: Vec::new(), implied: Vec::new(), unique: HashMap::new() };
        b.intern(Node::True, false);
        b.intern(Node::False, false);
        b
    }

    fn intern(&mut self, node: Node, implied: bool) -> NodeId {
        if let Some(id) = self.unique.get(&(node.clone(), implied)) {
            return *id;
        }
        let id = self.push(node.clone(), implied);
        self.unique.insert((node, implied), id);
        id
    }

    /// Appends a node verbatim, without simplification or sharing.
    pub fn push(&mut self, node: Node, implied: bool) -> NodeId {
        debug_assert!(node.children().iter().all(|&c| c < self.nodes.len()));
        self.nodes.push(node);
        self.implied.push(implied);
        self.nodes.len() - 1
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lit(&mut self, l: Literal, implied: bool) -> NodeId {
        self.intern(Node::Lit(l), implied)
    }

    pub fn and(&mut self, children: impl IntoIterator<Item = NodeId>) -> NodeId {
        let mut flat = Vec::new();
        for c in children {
            match &self.nodes[c] {
                Node::True => {}
                Node::False => return Self::FALSE,
                Node::And(inner) => flat.extend_from_slice(inner),
                _ => flat.push(c),
            }
        }
        match flat.len() {
            0 => Self::TRUE,
            1 => flat[0],
            _ => self.intern(Node::And(flat), false),
        }
    }

    pub fn or(&mut self, decision: Var, children: impl IntoIterator<Item = NodeId>) -> NodeId {
        let live: Vec<NodeId> = children.into_iter().filter(|&c| c != Self::FALSE).collect();
        match live.len() {
            0 => Self::FALSE,
            1 => live[0],
            _ => self.intern(Node::Or { decision, children: live }, false),
        }
    }

    pub fn finish(self, root: NodeId, num_vars: u32, atoms: AtomMap, tagged: bool) -> DdnnfGraph {
        DdnnfGraph { nodes: self.nodes, implied: self.implied, root, num_vars, atoms, tagged }
    }
}

/// Fixed-width bitset over variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct VarSet(Vec<u64>);

impl VarSet {
    pub fn with_capacity(num_vars: u32) -> Self {
        VarSet(vec![0; num_vars as usize / 64 + 1])
    }

    pub fn insert(&mut self, v: Var) {
        let (w, b) = (v as usize / 64, v as usize % 64);
        if w >= self.0.len() {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << b;
    }

    pub fn contains(&self, v: Var) -> bool {
        let (w, b) = (v as usize / 64, v as usize % 64);
        self.0.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn intersects(&self, other: &VarSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &VarSet) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn same_as(&self, other: &VarSet) -> bool {
        let n = self.0.len().max(other.0.len());
        (0..n).all(|i| self.0.get(i).copied().unwrap_or(0) == other.0.get(i).copied().unwrap_or(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| (w * 64 + b) as Var))
    }
}

#[cfg(test)]
mod tests;
