use std::collections::HashMap;

use super::{DdnnfGraph, GraphBuilder, Node, NodeId, QueryError};

/// Drops literal nodes tagged as theory-implied, and collapses free choices
/// `Or(l, !l)` to true. The result is meant for export and inspection: it is
/// generally not total, so counting it fails.
pub fn condense(g: &DdnnfGraph) -> Result<DdnnfGraph, QueryError> {
    if !g.is_tagged() {
        return Err(QueryError::NotTagged);
    }
    let order = g.reachable();
    if !order.iter().any(|&id| g.is_implied(id)) {
        return Ok(g.clone());
    }
    let mut b = GraphBuilder::new();
    let mut map: HashMap<NodeId, NodeId> = HashMap::new();
    for id in order {
        let new = match g.node(id) {
            Node::True => GraphBuilder::TRUE,
            Node::False => GraphBuilder::FALSE,
            Node::Lit(_) if g.is_implied(id) => GraphBuilder::TRUE,
            Node::Lit(l) => b.lit(*l, false),
            Node::And(cs) => {
                let cs: Vec<NodeId> = cs.iter().map(|c| map[c]).collect();
                b.and(cs)
            }
            Node::Or { decision, children } => {
                let cs: Vec<NodeId> = children.iter().map(|c| map[c]).collect();
                match (b.node(cs[0]), cs.get(1).map(|&c| b.node(c))) {
                    (Node::Lit(p), Some(Node::Lit(q))) if cs.len() == 2 && *p == !*q => GraphBuilder::TRUE,
                    _ => b.or(*decision, cs),
                }
            }
        };
        map.insert(id, new);
    }
    let root = map[&g.root()];
    Ok(b.finish(root, g.num_vars(), g.atom_map().clone(), false))
}
