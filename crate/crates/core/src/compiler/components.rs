use std::collections::HashMap;

use super::CompileConfig;
use crate::abstraction::{AtomMap, ClauseDb};
use crate::frontend::{AtomTable, RealVar};
use crate::literal::{Literal, Var};

/// An independent subproblem: residual clauses plus the unassigned variables
/// and real variables they (transitively) touch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Indices of member clauses in the clause database.
    pub clauses: Vec<usize>,
    /// Unassigned Boolean variables, ascending.
    pub vars: Vec<Var>,
    /// Real variables linked to the component, ascending.
    pub reals: Vec<RealVar>,
    /// Indices of trail literals over `reals`.
    pub trail: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Groups `vars` into components. `residual` lists each unsatisfied clause
/// with its unassigned variables, all of which must be in `vars`. Variables
/// are linked by shared clauses, by shared real variables of their atoms, and
/// through real variables co-occurring in a trail literal. With `enabled`
/// false everything lands in one component.
pub(crate) fn group(
    vars: &[Var],
    residual: &[(usize, Vec<Var>)],
    atoms: &AtomTable,
    trail: &[Literal],
    enabled: bool,
) -> Vec<Component> {
    if vars.is_empty() {
        return Vec::new();
    }
    let n = vars.len();
    let index: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let real = |r: RealVar| n + r.0 as usize;
    let mut uf = UnionFind((0..n + atoms.num_reals()).collect());
    for (_, cv) in residual {
        for w in cv.windows(2) {
            uf.union(index[&w[0]], index[&w[1]]);
        }
    }
    for (i, &v) in vars.iter().enumerate() {
        for r in atoms.real_vars_of(v) {
            uf.union(i, real(r));
        }
    }
    for l in trail {
        let rs = atoms.real_vars_of(l.var());
        for w in rs.windows(2) {
            uf.union(real(w[0]), real(w[1]));
        }
    }

    // Map each union-find root holding a variable to its component slot.
    let mut comps: Vec<Component> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, &v) in vars.iter().enumerate() {
        let root = uf.find(i);
        let next = if enabled { comps.len() } else { 0 };
        let k = *slot.entry(root).or_insert(next);
        if k == comps.len() {
            comps.push(Component { clauses: Vec::new(), vars: Vec::new(), reals: Vec::new(), trail: Vec::new() });
        }
        comps[k].vars.push(v);
    }
    for (ci, cv) in residual {
        if let Some(v) = cv.first() {
            let k = slot[&uf.find(index[v])];
            comps[k].clauses.push(*ci);
        }
    }
    for r in 0..atoms.num_reals() as u32 {
        if let Some(&k) = slot.get(&uf.find(real(RealVar(r)))) {
            comps[k].reals.push(RealVar(r));
        }
    }
    for (ti, l) in trail.iter().enumerate() {
        if let Some(&r) = atoms.real_vars_of(l.var()).first() {
            if let Some(&k) = slot.get(&uf.find(real(r))) {
                comps[k].trail.push(ti);
            }
        }
    }
    let mut out = comps;
    for c in &mut out {
        c.vars.sort_unstable();
        c.clauses.sort_unstable();
    }
    out.sort_by_key(|c| c.vars[0]);
    out
}

/// Components of `db` under `assignment`, with `trail` the asserted theory
/// literals. Satisfied clauses are dropped; every unassigned variable lands in
/// exactly one component.
pub fn split_components(
    db: &ClauseDb,
    map: &AtomMap,
    assignment: &[Literal],
    trail: &[Literal],
    cfg: &CompileConfig,
) -> Vec<Component> {
    let mut value: HashMap<Var, bool> = HashMap::new();
    for l in assignment {
        value.insert(l.var(), l.is_positive());
    }
    let vars: Vec<Var> = (1..=db.num_vars).filter(|v| !value.contains_key(v)).collect();
    let residual: Vec<(usize, Vec<Var>)> = db
        .clauses
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.iter().any(|l| value.get(&l.var()) == Some(&l.is_positive())))
        .map(|(i, c)| {
            let mut vs: Vec<Var> = c.iter().map(|l| l.var()).filter(|v| !value.contains_key(v)).collect();
            vs.dedup();
            (i, vs)
        })
        .filter(|(_, vs)| !vs.is_empty())
        .collect();
    group(&vars, &residual, map.table(), trail, cfg.components)
}
