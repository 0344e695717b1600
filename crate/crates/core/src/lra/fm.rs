//! Fourier–Motzkin elimination over exact rationals.
//!
//! Every derived row carries the nonnegative combination of input rows it came
//! from, so a constant contradiction yields its Farkas certificate directly.
//! Variables are eliminated in ascending id order; the rows mentioning each
//! eliminated variable are kept per stage for witness back-substitution.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::certificate::FarkasCertificate;
use super::{Row, Witness};
use crate::frontend::{LinTerm, RealVar};

#[derive(Clone, Debug)]
struct Derived {
    term: LinTerm,
    strict: bool,
    combo: BTreeMap<usize, BigRational>,
}

impl Derived {
    fn scale(&mut self, k: &BigRational) {
        self.term = self.term.scaled(k);
        for m in self.combo.values_mut() {
            *m *= k;
        }
    }

    /// Positive rescaling so that the leading coefficient (or the constant for
    /// constant rows) has magnitude one.
    fn normalize(&mut self) {
        let lead = self.term.leading_coeff().cloned().unwrap_or_else(|| self.term.constant_part().clone());
        if !lead.is_zero() && !lead.abs().is_one() {
            self.scale(&lead.abs().recip());
        }
    }

    /// `Some(true)` if contradictory, `Some(false)` if trivially true, `None`
    /// if the row still mentions variables.
    fn constant_status(&self) -> Option<bool> {
        if !self.term.is_constant() {
            return None;
        }
        let c = self.term.constant_part();
        Some(if self.strict { !c.is_negative() } else { c.is_positive() })
    }

    fn certificate(&self) -> FarkasCertificate {
        FarkasCertificate { multipliers: self.combo.iter().filter(|(_, m)| m.is_positive()).map(|(i, m)| (*i, m.clone())).collect() }
    }
}

pub(crate) enum FmOutcome {
    Feasible(Witness),
    Infeasible(FarkasCertificate),
}

/// Drops trivially true rows and, among rows with the same variable part,
/// keeps only the tightest. Returns a contradiction if one is found.
fn simplify(rows: Vec<Derived>) -> Result<Vec<Derived>, FarkasCertificate> {
    let mut best: HashMap<Vec<(RealVar, BigRational)>, Derived> = HashMap::new();
    let mut order = Vec::new();
    for mut r in rows {
        match r.constant_status() {
            Some(true) => return Err(r.certificate()),
            Some(false) => continue,
            None => {}
        }
        r.normalize();
        let key: Vec<(RealVar, BigRational)> = r.term.coeffs().map(|(v, c)| (v, c.clone())).collect();
        match best.get_mut(&key) {
            None => {
                order.push(key.clone());
                best.insert(key, r);
            }
            Some(existing) => {
                // a.x + c <= 0: a larger constant is the tighter bound.
                let (c_new, c_old) = (r.term.constant_part(), existing.term.constant_part());
                if c_new > c_old || (c_new == c_old && r.strict && !existing.strict) {
                    *existing = r;
                }
            }
        }
    }
    Ok(order.into_iter().map(|k| best.remove(&k).unwrap()).collect())
}

pub(crate) fn eliminate(rows: &[Row]) -> FmOutcome {
    let initial: Vec<Derived> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| Derived { term: r.term.clone(), strict: r.strict, combo: BTreeMap::from([(i, BigRational::one())]) })
        .collect();
    let vars: BTreeSet<RealVar> = rows.iter().flat_map(|r| r.term.vars()).collect();

    let mut current = match simplify(initial) {
        Ok(r) => r,
        Err(cert) => return FmOutcome::Infeasible(cert),
    };
    let mut stages: Vec<(RealVar, Vec<Derived>)> = Vec::new();

    for &v in &vars {
        let (with_v, rest): (Vec<Derived>, Vec<Derived>) = current.into_iter().partition(|r| r.term.coeff(v).is_some());
        let (pos, neg): (Vec<&Derived>, Vec<&Derived>) = with_v.iter().partition(|r| r.term.coeff(v).unwrap().is_positive());
        let mut next = rest;
        for p in &pos {
            let a = p.term.coeff(v).unwrap();
            for n in &neg {
                let b = n.term.coeff(v).unwrap().abs();
                // (1/a) p + (1/b) n cancels v.
                let (ka, kb) = (a.recip(), b.recip());
                let mut term = p.term.scaled(&ka);
                term.add_scaled(&n.term, &kb);
                let mut combo = BTreeMap::new();
                for (i, m) in &p.combo {
                    *combo.entry(*i).or_insert_with(BigRational::zero) += m * &ka;
                }
                for (i, m) in &n.combo {
                    *combo.entry(*i).or_insert_with(BigRational::zero) += m * &kb;
                }
                next.push(Derived { term, strict: p.strict || n.strict, combo });
            }
        }
        stages.push((v, with_v));
        current = match simplify(next) {
            Ok(r) => r,
            Err(cert) => return FmOutcome::Infeasible(cert),
        };
    }
    debug_assert!(current.is_empty(), "all rows are constant after full elimination");

    let mut point = Witness::new();
    for (v, rows) in stages.iter().rev() {
        let value = pick_value(*v, rows, &point);
        point.insert(*v, value);
    }
    FmOutcome::Feasible(point)
}

/// Chooses a value for `v` inside the bounds implied by `rows`, given values
/// of every later-eliminated variable.
fn pick_value(v: RealVar, rows: &[Derived], point: &Witness) -> BigRational {
    let mut lower: Option<(BigRational, bool)> = None;
    let mut upper: Option<(BigRational, bool)> = None;
    for r in rows {
        let a = r.term.coeff(v).unwrap();
        let mut rest = r.term.clone();
        rest.add_coeff(v, -a.clone());
        let bound = -rest.eval(point) / a;
        if a.is_positive() {
            // v <= bound
            let tighter = match &upper {
                None => true,
                Some((u, s)) => bound < *u || (bound == *u && r.strict && !s),
            };
            if tighter {
                upper = Some((bound, r.strict));
            }
        } else {
            let tighter = match &lower {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && r.strict && !s),
            };
            if tighter {
                lower = Some((bound, r.strict));
            }
        }
    }
    let two = BigRational::from_integer(2.into());
    match (lower, upper) {
        (Some((l, _)), Some((u, _))) if l < u => (l + u) / two,
        (Some((l, _)), Some(_)) => l,
        (Some((l, strict)), None) => {
            if strict {
                l + BigRational::one()
            } else {
                l
            }
        }
        (None, Some((u, strict))) => {
            if strict {
                u - BigRational::one()
            } else {
                u
            }
        }
        (None, None) => BigRational::zero(),
    }
}
