use crate::abstraction::ClauseDb;
use crate::literal::{Literal, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Reason {
    Decision,
    Bool,
    Theory,
}

/// A clause falsified by unit propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolConflict(pub Vec<Literal>);

/// Assignment trail with two-watched-literal unit propagation.
///
/// Clauses of length at least two live here; the first two literals of each
/// are its watches. Watches survive backtracking unchanged.
#[derive(Clone, Debug)]
pub(crate) struct Watcher {
    pub clauses: Vec<Vec<Literal>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    pos: Vec<usize>,
    pub trail: Vec<Literal>,
    pub reasons: Vec<Reason>,
    qhead: usize,
}

fn lit_value(value: &[Option<bool>], l: Literal) -> Option<bool> {
    value[l.var() as usize].map(|v| v == l.is_positive())
}

impl Watcher {
    pub fn new(num_vars: u32) -> Self {
        let n = num_vars as usize + 1;
        Watcher {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            value: vec![None; n],
            pos: vec![0; n],
            trail: Vec::new(),
            reasons: Vec::new(),
            qhead: 0,
        }
    }

    pub fn value(&self, l: Literal) -> Option<bool> {
        lit_value(&self.value, l)
    }

    pub fn is_assigned(&self, v: Var) -> bool {
        self.value[v as usize].is_some()
    }

    /// Adds a clause of length at least two. Watches go to non-false
    /// literals first, then to the most recently falsified ones.
    pub fn add_clause(&mut self, mut lits: Vec<Literal>) -> usize {
        debug_assert!(lits.len() >= 2);
        let rank = |l: &Literal| match lit_value(&self.value, *l) {
            Some(false) => usize::MAX - 1 - self.pos[l.var() as usize],
            _ => 0,
        };
        lits.sort_by_key(rank);
        let id = self.clauses.len();
        self.watches[lits[0].code()].push(id);
        self.watches[lits[1].code()].push(id);
        self.clauses.push(lits);
        id
    }

    pub fn assign(&mut self, l: Literal, reason: Reason) {
        debug_assert!(!self.is_assigned(l.var()));
        self.value[l.var() as usize] = Some(l.is_positive());
        self.pos[l.var() as usize] = self.trail.len();
        self.trail.push(l);
        self.reasons.push(reason);
    }

    pub fn backtrack(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            self.reasons.pop();
            self.value[l.var() as usize] = None;
        }
        self.qhead = self.qhead.min(len);
    }

    /// Runs unit propagation to fixpoint. Returns the index of a falsified
    /// clause on conflict.
    pub fn propagate(&mut self) -> Result<(), usize> {
        let Watcher { clauses, watches, value, pos, trail, reasons, qhead } = self;
        while *qhead < trail.len() {
            let falsified = !trail[*qhead];
            *qhead += 1;
            let mut ws = std::mem::take(&mut watches[falsified.code()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                let c = &mut clauses[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                let first_value = lit_value(value, first);
                if first_value == Some(true) {
                    i += 1;
                    continue;
                }
                if let Some(k) = (2..c.len()).find(|&k| lit_value(value, c[k]) != Some(false)) {
                    c.swap(1, k);
                    watches[c[1].code()].push(ci);
                    ws.swap_remove(i);
                    continue;
                }
                if first_value.is_none() {
                    value[first.var() as usize] = Some(first.is_positive());
                    pos[first.var() as usize] = trail.len();
                    trail.push(first);
                    reasons.push(Reason::Bool);
                    i += 1;
                } else {
                    conflict = Some(ci);
                    break;
                }
            }
            watches[falsified.code()] = ws;
            if let Some(ci) = conflict {
                return Err(ci);
            }
        }
        Ok(())
    }
}

/// Unit propagation of `db` under `assignment` (assumed consistent). Returns
/// the implied literals in propagation order, excluding the assignment.
pub fn unit_propagate(db: &ClauseDb, assignment: &[Literal]) -> Result<Vec<Literal>, BoolConflict> {
    let mut w = Watcher::new(db.num_vars);
    for &l in assignment {
        if !w.is_assigned(l.var()) {
            w.assign(l, Reason::Decision);
        }
    }
    let given = w.trail.len();
    for c in &db.clauses {
        match c.as_slice() {
            [] => return Err(BoolConflict(Vec::new())),
            [l] => match w.value(*l) {
                None => w.assign(*l, Reason::Bool),
                Some(false) => return Err(BoolConflict(c.clone())),
                Some(true) => {}
            },
            _ => {
                w.add_clause(c.clone());
            }
        }
    }
    match w.propagate() {
        Ok(()) => Ok(w.trail[given..].to_vec()),
        Err(ci) => {
            let mut c = w.clauses[ci].clone();
            c.sort();
            Err(BoolConflict(c))
        }
    }
}
