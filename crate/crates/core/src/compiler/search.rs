use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use super::cache::{Cache, CacheKey};
use super::components::{group, Component};
use super::heuristic::choose;
use super::propagate::{Reason, Watcher};
use super::{learn_theory_clause, CompileConfig, Mode, Stats};
use crate::abstraction::{AtomMap, ClauseDb};
use crate::ddnnf::{DdnnfGraph, GraphBuilder, Node, NodeId};
use crate::eager::eager_encode;
use crate::frontend::AtomTable;
use crate::literal::{Literal, Var};
use crate::lra::{check_feasible, minimize_core, AssertOutcome, TheoryState};

const TRUE: NodeId = GraphBuilder::TRUE;
const FALSE: NodeId = GraphBuilder::FALSE;

struct Search<'a> {
    cfg: &'a CompileConfig,
    atoms: Arc<AtomTable>,
    w: Watcher,
    /// Original clauses containing each variable.
    occ: Vec<Vec<usize>>,
    num_original: usize,
    learned: HashSet<Vec<Literal>>,
    theory: Option<TheoryState>,
    /// Length of the trail prefix already asserted to the theory.
    theory_head: usize,
    level: u32,
    b: GraphBuilder,
    cache: Cache,
    cache_on: bool,
    stats: Stats,
    extra_checks: u64,
}

/// Compiles `db` into a d-DNNF by recording an exhaustive DPLL(T) search.
pub fn compile(db: &ClauseDb, map: &AtomMap, cfg: &CompileConfig) -> (DdnnfGraph, Stats) {
    let start = Instant::now();
    let encoded;
    let db = if cfg.mode == Mode::Eager {
        let k = cfg.eager_k.unwrap_or_else(|| (1..=map.num_atoms()).filter(|&v| map.is_linear(v)).count());
        encoded = eager_encode(db, map, k);
        &encoded
    } else {
        db
    };
    let mut s = Search {
        cfg,
        atoms: map.table().clone(),
        w: Watcher::new(db.num_vars),
        occ: vec![Vec::new(); db.num_vars as usize + 1],
        num_original: 0,
        learned: HashSet::new(),
        theory: cfg.theory_hooks().then(|| TheoryState::new(map.table().clone())),
        theory_head: 0,
        level: 0,
        b: GraphBuilder::new(),
        cache: Cache::new(),
        cache_on: cfg.cache,
        stats: Stats::default(),
        extra_checks: 0,
    };
    let root = s.root(db);
    let mut stats = s.stats;
    stats.theory_checks = s.theory.as_ref().map_or(0, TheoryState::checks) + s.extra_checks;
    let g = s.b.finish(root, db.num_vars, map.clone(), cfg.mode != Mode::Agnostic);
    (stats.nodes, stats.edges) = g.size();
    stats.wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    (g, stats)
}

impl Search<'_> {
    fn root(&mut self, db: &ClauseDb) -> NodeId {
        let mut units = Vec::new();
        for c in &db.clauses {
            match c.len() {
                0 => return FALSE,
                1 => units.push(c[0]),
                _ => {}
            }
        }
        // Unit clauses are assigned at level 0 rather than watched.
        let mut clauses: Vec<Vec<Literal>> = Vec::new();
        for c in &db.clauses {
            if c.len() >= 2 {
                clauses.push(c.clone());
            }
        }
        for (i, c) in clauses.into_iter().enumerate() {
            for l in &c {
                self.occ[l.var() as usize].push(i);
            }
            self.w.add_clause(c);
        }
        self.num_original = self.w.clauses.len();
        for u in units {
            match self.w.value(u) {
                None => self.w.assign(u, Reason::Bool),
                Some(false) => return FALSE,
                Some(true) => {}
            }
        }
        let all: Vec<Var> = (1..=db.num_vars).collect();
        if self.settle(&all).is_err() {
            return FALSE;
        }
        let remaining: Vec<Var> = all.into_iter().filter(|&v| !self.w.is_assigned(v)).collect();
        let sub = self.compile_vars(&remaining);
        if sub == FALSE {
            return FALSE;
        }
        let mut children = self.literal_nodes(0);
        children.push(sub);
        self.b.and(children)
    }

    /// Boolean and theory propagation to a joint fixpoint. Theory propagation
    /// considers the unassigned linear atoms among `scope`.
    fn settle(&mut self, scope: &[Var]) -> Result<(), ()> {
        loop {
            let before = self.w.trail.len();
            if self.w.propagate().is_err() {
                self.stats.conflicts += 1;
                self.stats.bool_props += (self.w.trail.len() - before) as u64;
                return Err(());
            }
            self.stats.bool_props += (self.w.trail.len() - before) as u64;
            let Some(theory) = self.theory.as_mut() else {
                return Ok(());
            };
            for i in self.theory_head..self.w.trail.len() {
                let l = self.w.trail[i];
                if !self.atoms.is_linear(l.var()) {
                    continue;
                }
                match theory.assert_literal(l, self.level).expect("linear literal at current level") {
                    AssertOutcome::Ok => {}
                    AssertOutcome::Conflict(core) => {
                        self.stats.conflicts += 1;
                        self.learn(&core);
                        return Err(());
                    }
                }
            }
            self.theory_head = self.w.trail.len();
            let theory = self.theory.as_ref().unwrap();
            let candidates: Vec<Var> =
                scope.iter().copied().filter(|&v| !self.w.is_assigned(v) && self.atoms.is_linear(v)).collect();
            if candidates.is_empty() {
                return Ok(());
            }
            let budget = self.cfg.propagation_budget.unwrap_or(2 * candidates.len());
            let implied = theory.propagate_candidates(&candidates, budget);
            if implied.is_empty() {
                return Ok(());
            }
            self.stats.theory_props += implied.len() as u64;
            for l in implied {
                self.w.assign(l, Reason::Theory);
            }
        }
    }

    fn learn(&mut self, core: &[Literal]) {
        if !self.cfg.learning {
            return;
        }
        let core = minimize_core(&self.atoms, core).unwrap_or_else(|_| core.to_vec());
        let clause = learn_theory_clause(&core);
        if clause.len() >= 2 && self.learned.insert(clause.clone()) {
            self.w.add_clause(clause);
            self.stats.learned += 1;
        }
    }

    fn undo(&mut self, mark: usize) {
        self.w.backtrack(mark);
        self.theory_head = self.theory_head.min(mark);
        self.level -= 1;
        if let Some(t) = self.theory.as_mut() {
            t.pop_to_level(self.level);
        }
    }

    /// Literal nodes for the trail suffix starting at `mark`.
    fn literal_nodes(&mut self, mark: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        for i in mark..self.w.trail.len() {
            let l = self.w.trail[i];
            let tag = match self.w.reasons[i] {
                Reason::Theory => true,
                _ => self.cfg.condense_output && self.cfg.mode != Mode::Agnostic && self.entailed_by_rest(i),
            };
            out.push(self.b.lit(l, tag));
        }
        out
    }

    /// Whether the other linear literals on the trail entail trail entry `i`.
    fn entailed_by_rest(&mut self, i: usize) -> bool {
        let l = self.w.trail[i];
        if !self.atoms.is_linear(l.var()) {
            return false;
        }
        let mut lits: Vec<Literal> = self
            .w
            .trail
            .iter()
            .enumerate()
            .filter(|&(j, m)| j != i && self.atoms.is_linear(m.var()))
            .map(|(_, m)| *m)
            .collect();
        lits.push(!l);
        self.extra_checks += 1;
        !check_feasible(&self.atoms, &lits).expect("linear literals").is_sat()
    }

    fn theory_trail(&self) -> Vec<Literal> {
        match self.theory {
            Some(_) => self.w.trail[..self.theory_head]
                .iter()
                .copied()
                .filter(|l| self.atoms.is_linear(l.var()))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Unsatisfied original clauses touching `vars`, as (index, unassigned
    /// literals).
    fn residual(&self, vars: &[Var]) -> Vec<(usize, Vec<Literal>)> {
        let mut ids: Vec<usize> = vars.iter().flat_map(|&v| self.occ[v as usize].iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
            .filter(|&ci| !self.w.clauses[ci].iter().any(|&l| self.w.value(l) == Some(true)))
            .map(|ci| {
                let lits: Vec<Literal> =
                    self.w.clauses[ci].iter().copied().filter(|l| !self.w.is_assigned(l.var())).collect();
                (ci, lits)
            })
            .filter(|(_, lits)| !lits.is_empty())
            .collect()
    }

    fn compile_vars(&mut self, vars: &[Var]) -> NodeId {
        if vars.is_empty() {
            return TRUE;
        }
        let trail = self.theory_trail();
        let residual: Vec<(usize, Vec<Var>)> = self
            .residual(vars)
            .into_iter()
            .map(|(ci, lits)| {
                let mut vs: Vec<Var> = lits.iter().map(|l| l.var()).collect();
                vs.dedup();
                (ci, vs)
            })
            .collect();
        let comps = group(vars, &residual, &self.atoms, &trail, self.cfg.components);
        if comps.len() > 1 {
            self.stats.components += comps.len() as u64;
        }
        let mut nodes = Vec::with_capacity(comps.len());
        for c in &comps {
            let n = self.compile_component(c, &trail);
            if n == FALSE {
                return FALSE;
            }
            nodes.push(n);
        }
        self.b.and(nodes)
    }

    fn compile_component(&mut self, c: &Component, trail: &[Literal]) -> NodeId {
        if !self.cache_on {
            return self.branch(&c.vars);
        }
        let clauses = c.clauses.iter().map(|&ci| {
            self.w.clauses[ci].iter().copied().filter(|l| !self.w.is_assigned(l.var())).collect::<Vec<_>>()
        });
        let key = CacheKey::new(c.vars.clone(), clauses.collect::<Vec<_>>(), c.trail.iter().map(|&i| trail[i]).collect());
        if let Some(n) = self.cache.lookup(&key) {
            self.stats.cache_hits += 1;
            if self.cfg.audit_cache {
                self.cache_on = false;
                let fresh = self.branch(&c.vars);
                self.cache_on = true;
                assert_eq!(
                    count_node(&self.b, n),
                    count_node(&self.b, fresh),
                    "cache hit disagrees with recompilation for {key:?}"
                );
            }
            return n;
        }
        self.stats.cache_misses += 1;
        let n = self.branch(&c.vars);
        self.cache.store(key, n);
        n
    }

    fn branch(&mut self, vars: &[Var]) -> NodeId {
        let residual = self.residual(vars);
        let lit = choose(vars, residual.iter().map(|(_, c)| c.as_slice()), self.cfg.heuristic)
            .expect("component has unassigned variables");
        self.stats.decisions += 1;
        let mut children = [FALSE; 2];
        for (slot, l) in children.iter_mut().zip([lit, !lit]) {
            let mark = self.w.trail.len();
            self.level += 1;
            self.w.assign(l, Reason::Decision);
            if self.settle(vars).is_ok() {
                debug_assert!(self.w.trail[mark..].iter().all(|l| vars.contains(&l.var())));
                let remaining: Vec<Var> = vars.iter().copied().filter(|&v| !self.w.is_assigned(v)).collect();
                let sub = self.compile_vars(&remaining);
                if sub != FALSE {
                    let mut parts = self.literal_nodes(mark);
                    parts.push(sub);
                    *slot = self.b.and(parts);
                }
            }
            self.undo(mark);
        }
        self.b.or(lit.var(), children)
    }
}

/// Model count of the subgraph under `id`, assuming it is total.
fn count_node(b: &GraphBuilder, id: NodeId) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    fn go(b: &GraphBuilder, id: NodeId, memo: &mut HashMap<NodeId, BigUint>) -> BigUint {
        if let Some(v) = memo.get(&id) {
            return v.clone();
        }
        let v = match b.node(id) {
            Node::True | Node::Lit(_) => BigUint::from(1u32),
            Node::False => BigUint::from(0u32),
            Node::And(cs) => cs.clone().into_iter().map(|c| go(b, c, memo)).product(),
            Node::Or { children, .. } => children.clone().into_iter().map(|c| go(b, c, memo)).sum(),
        };
        memo.insert(id, v.clone());
        v
    }
    go(b, id, &mut HashMap::new())
}
