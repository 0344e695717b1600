use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::{DdnnfGraph, GraphBuilder, Node, NodeId};
use crate::abstraction::AtomMap;
use crate::frontend::AtomTable;
use crate::literal::Literal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("nnf line {line}: {msg}")]
    Nnf { line: usize, msg: String },
    #[error("atoms line {line}: {msg}")]
    Atoms { line: usize, msg: String },
}

fn nnf_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Nnf { line, msg: msg.into() }
}

fn atoms_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Atoms { line, msg: msg.into() }
}

/// Serializes the reachable part of `g` as an `.nnf` file and its `.atoms`
/// sidecar. `True` is written as `A 0` and `False` as `O 0 0`.
pub fn export_nnf(g: &DdnnfGraph) -> (String, String) {
    let order = g.reachable();
    let index: HashMap<NodeId, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let edges: usize = order.iter().map(|&id| g.node(id).children().len()).sum();
    let mut nnf = format!("nnf {} {} {}\n", order.len(), edges, g.num_vars());
    let ids = |cs: &[NodeId]| cs.iter().map(|c| format!(" {}", index[c])).collect::<String>();
    for &id in &order {
        match g.node(id) {
            Node::True => nnf.push_str("A 0\n"),
            Node::False => nnf.push_str("O 0 0\n"),
            Node::Lit(l) => writeln!(nnf, "L {}", l.to_dimacs()).unwrap(),
            Node::And(cs) => writeln!(nnf, "A {}{}", cs.len(), ids(cs)).unwrap(),
            Node::Or { decision, children } => {
                writeln!(nnf, "O {} {}{}", decision, children.len(), ids(children)).unwrap()
            }
        }
    }
    let table = g.atom_map().table();
    let mut atoms = String::new();
    for v in 1..=g.num_atoms() {
        writeln!(atoms, "{} {}", v, table.serialize(v)).unwrap();
    }
    for (i, &id) in order.iter().enumerate() {
        if g.is_implied(id) {
            writeln!(atoms, "c implied {i}").unwrap();
        }
    }
    (nnf, atoms)
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| nnf_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| nnf_err(line, format!("bad {what} `{tok}`")))
}

fn parse_atoms(text: &str) -> Result<(AtomTable, Vec<usize>), FormatError> {
    let mut table = AtomTable::new();
    let mut implied = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix('c') {
            let mut toks = rest.split_whitespace();
            if toks.next() == Some("implied") {
                let idx = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| atoms_err(line, "bad implied index"))?;
                implied.push(idx);
            }
            continue;
        }
        let (var, atom) = raw.split_once(char::is_whitespace).ok_or_else(|| atoms_err(line, "expected `<var> <atom>`"))?;
        let var: u32 = var.parse().map_err(|_| atoms_err(line, format!("bad variable `{var}`")))?;
        if var as usize != table.len() + 1 {
            return Err(atoms_err(line, format!("expected variable {}, found {var}", table.len() + 1)));
        }
        let kind = table.parse_serialized(atom).map_err(|m| atoms_err(line, m))?;
        if table.lookup(&kind).is_some() {
            return Err(atoms_err(line, "duplicate atom"));
        }
        table.intern(kind);
    }
    Ok((table, implied))
}

/// Parses an `.nnf` file and its `.atoms` sidecar. Node structure is kept
/// verbatim (no simplification). The graph is tagged iff the sidecar has
/// `c implied` lines.
pub fn import_nnf(nnf: &str, atoms: &str) -> Result<(DdnnfGraph, AtomMap), FormatError> {
    let (table, implied) = parse_atoms(atoms)?;
    let map = AtomMap::new(Arc::new(table));

    let mut lines = nnf.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with("c"));
    let (hline, header) = lines.next().ok_or_else(|| nnf_err(1, "missing header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("nnf") {
        return Err(nnf_err(hline, "header must start with `nnf`"));
    }
    let v: usize = parse_num(toks.next(), hline, "node count")?;
    let e: usize = parse_num(toks.next(), hline, "edge count")?;
    let n: u32 = parse_num(toks.next(), hline, "variable count")?;
    if n < map.num_atoms() {
        return Err(nnf_err(hline, format!("{n} variables but {} atoms", map.num_atoms())));
    }

    let mut b = GraphBuilder::new();
    let mut index: Vec<NodeId> = Vec::with_capacity(v);
    let mut edges = 0;
    let mut implied_set = vec![false; v];
    for &i in &implied {
        if i >= v {
            return Err(atoms_err(0, format!("implied index {i} out of range")));
        }
        implied_set[i] = true;
    }
    for (line, text) in lines {
        if index.len() == v {
            return Err(nnf_err(line, "more nodes than declared"));
        }
        let mut toks = text.split_whitespace();
        let kind = toks.next().unwrap();
        let children = |toks: &mut std::str::SplitWhitespace, c: usize| -> Result<Vec<NodeId>, FormatError> {
            let mut out = Vec::with_capacity(c);
            for _ in 0..c {
                let j: usize = parse_num(toks.next(), line, "child index")?;
                if j >= index.len() {
                    return Err(nnf_err(line, format!("child {j} does not precede node {}", index.len())));
                }
                out.push(index[j]);
            }
            Ok(out)
        };
        let node = match kind {
            "L" => {
                let l: i64 = parse_num(toks.next(), line, "literal")?;
                if l == 0 || l.unsigned_abs() > n as u64 {
                    return Err(nnf_err(line, format!("literal {l} out of range")));
                }
                Node::Lit(Literal::from_dimacs(l).expect("nonzero"))
            }
            "A" => {
                let c: usize = parse_num(toks.next(), line, "child count")?;
                let cs = children(&mut toks, c)?;
                if cs.is_empty() {
                    Node::True
                } else {
                    Node::And(cs)
                }
            }
            "O" => {
                let j: u32 = parse_num(toks.next(), line, "decision variable")?;
                if j > n {
                    return Err(nnf_err(line, format!("decision variable {j} out of range")));
                }
                let c: usize = parse_num(toks.next(), line, "child count")?;
                let cs = children(&mut toks, c)?;
                if cs.is_empty() {
                    Node::False
                } else {
                    Node::Or { decision: j, children: cs }
                }
            }
            other => return Err(nnf_err(line, format!("unknown node kind `{other}`"))),
        };
        if toks.next().is_some() {
            return Err(nnf_err(line, "trailing tokens"));
        }
        edges += node.children().len();
        let tag = implied_set[index.len()];
        if tag && !matches!(node, Node::Lit(_)) {
            return Err(atoms_err(0, format!("implied index {} is not a literal", index.len())));
        }
        let id = match node {
            Node::True => GraphBuilder::TRUE,
            Node::False => GraphBuilder::FALSE,
            node => b.push(node, tag),
        };
        index.push(id);
    }
    if index.len() != v {
        return Err(nnf_err(hline, format!("declared {v} nodes, found {}", index.len())));
    }
    if edges != e {
        return Err(nnf_err(hline, format!("declared {e} edges, found {edges}")));
    }
    let root = *index.last().ok_or_else(|| nnf_err(hline, "empty graph"))?;
    let g = b.finish(root, n, map.clone(), !implied.is_empty());
    Ok((g, map))
}
