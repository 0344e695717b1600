use std::collections::HashMap;
use std::rc::Rc;

use super::{check_totality, DdnnfGraph, Node, NodeId, QueryError};
use crate::literal::Literal;

type Models = Rc<Vec<Vec<Literal>>>;

/// Up to `cap` distinct total assignments over the atom variables, each as a
/// literal list sorted by variable. Auxiliary literals are omitted.
pub fn enumerate(g: &DdnnfGraph, cap: usize) -> Result<Vec<Vec<Literal>>, QueryError> {
    check_totality(g)?;
    if cap == 0 {
        return Ok(Vec::new());
    }
    let mut memo: HashMap<NodeId, Models> = HashMap::new();
    for id in g.reachable() {
        let models: Vec<Vec<Literal>> = match g.node(id) {
            Node::True => vec![Vec::new()],
            Node::False => Vec::new(),
            Node::Lit(l) if g.is_aux(l.var()) => vec![Vec::new()],
            Node::Lit(l) => vec![vec![*l]],
            Node::And(cs) => {
                let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
                for c in cs {
                    let part = &memo[c];
                    let mut next = Vec::new();
                    'outer: for a in &acc {
                        for b in part.iter() {
                            if next.len() == cap {
                                break 'outer;
                            }
                            let mut m = a.clone();
                            m.extend_from_slice(b);
                            next.push(m);
                        }
                    }
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            Node::Or { children, .. } => {
                let mut acc = Vec::new();
                for c in children {
                    for m in memo[c].iter() {
                        if acc.len() == cap {
                            break;
                        }
                        acc.push(m.clone());
                    }
                }
                acc
            }
        };
        memo.insert(id, Rc::new(models));
    }
    let mut out = Rc::try_unwrap(memo.remove(&g.root()).unwrap()).unwrap_or_else(|rc| (*rc).clone());
    for m in &mut out {
        m.sort();
    }
    Ok(out)
}
