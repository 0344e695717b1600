use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::term::{LinTerm, RealVar};
use crate::literal::{Literal, Var};

/// Comparison operators of the input language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
        }
    }
}

/// What an atom stands for. Linear atoms are always stored in canonical form:
/// `Leq(t)` means `t <= 0`, `Eq(t)` means `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Bool(String),
    Leq(LinTerm),
    Eq(LinTerm),
}

impl AtomKind {
    pub fn is_linear(&self) -> bool {
        !matches!(self, AtomKind::Bool(_))
    }

    pub fn term(&self) -> Option<&LinTerm> {
        match self {
            AtomKind::Bool(_) => None,
            AtomKind::Leq(t) | AtomKind::Eq(t) => Some(t),
        }
    }

    /// Re-canonicalizes a linear atom; Boolean atoms are returned unchanged.
    pub fn canonical(&self) -> Canonical {
        match self {
            AtomKind::Bool(_) => Canonical::Atom { kind: self.clone(), positive: true },
            AtomKind::Leq(t) => canonicalize(CmpOp::Le, t, &LinTerm::zero()),
            AtomKind::Eq(t) => canonicalize(CmpOp::Eq, t, &LinTerm::zero()),
        }
    }
}

/// A typed atom: its kind plus its dense id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub id: Var,
    pub kind: AtomKind,
}

/// Result of canonicalizing a comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    /// Both sides were constant; the comparison folded to a truth value.
    Const(bool),
    Atom { kind: AtomKind, positive: bool },
}

/// Canonical form of `lhs op rhs`.
///
/// Non-strict comparisons become positive `Leq` atoms, strict ones become
/// negated `Leq` atoms over the complementary term (`t < 0` is `!(-t <= 0)`),
/// and `!=` is a negated `Eq` atom.
pub fn canonicalize(op: CmpOp, lhs: &LinTerm, rhs: &LinTerm) -> Canonical {
    let diff = lhs.minus(rhs);
    if diff.is_constant() {
        return Canonical::Const(op.holds(diff.constant_part(), &BigRational::zero()));
    }
    let (kind, positive) = match op {
        CmpOp::Le => (AtomKind::Leq(diff.primitive()), true),
        CmpOp::Ge => (AtomKind::Leq(diff.negated().primitive()), true),
        CmpOp::Lt => (AtomKind::Leq(diff.negated().primitive()), false),
        CmpOp::Gt => (AtomKind::Leq(diff.primitive()), false),
        CmpOp::Eq => (AtomKind::Eq(canonical_eq(&diff)), true),
        CmpOp::Ne => (AtomKind::Eq(canonical_eq(&diff)), false),
    };
    Canonical::Atom { kind, positive }
}

fn canonical_eq(t: &LinTerm) -> LinTerm {
    let p = t.primitive();
    match p.leading_coeff() {
        Some(c) if c.is_negative() => p.negated(),
        _ => p,
    }
}

/// Leaf produced by normalizing a comparison against an [`AtomTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leaf {
    Const(bool),
    Lit(Literal),
}

/// Interning table of atoms with dense ids `1..=n` in first-occurrence order,
/// plus the real-variable name table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    reals: Vec<String>,
    real_index: HashMap<String, RealVar>,
    atoms: Vec<AtomKind>,
    index: HashMap<AtomKind, Var>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_real(&mut self, name: &str) -> RealVar {
        if let Some(v) = self.real_index.get(name) {
            return *v;
        }
        let v = RealVar(self.reals.len() as u32);
        self.reals.push(name.to_string());
        self.real_index.insert(name.to_string(), v);
        v
    }

    pub fn real_var(&self, name: &str) -> Option<RealVar> {
        self.real_index.get(name).copied()
    }

    pub fn real_name(&self, v: RealVar) -> &str {
        &self.reals[v.0 as usize]
    }

    pub fn num_reals(&self) -> usize {
        self.reals.len()
    }

    /// Returns the id of `kind`, inserting it if new. `kind` must already be
    /// canonical.
    pub fn intern(&mut self, kind: AtomKind) -> Var {
        if let Some(id) = self.index.get(&kind) {
            return *id;
        }
        let id = self.atoms.len() as Var + 1;
        self.atoms.push(kind.clone());
        self.index.insert(kind, id);
        id
    }

    pub fn lookup(&self, kind: &AtomKind) -> Option<Var> {
        self.index.get(kind).copied()
    }

    pub fn bool_atom(&mut self, name: &str) -> Literal {
        Literal::positive(self.intern(AtomKind::Bool(name.to_string())))
    }

    pub fn normalize_comparison(&mut self, op: CmpOp, lhs: &LinTerm, rhs: &LinTerm) -> Leaf {
        match canonicalize(op, lhs, rhs) {
            Canonical::Const(b) => Leaf::Const(b),
            Canonical::Atom { kind, positive } => Leaf::Lit(Literal::new(self.intern(kind), positive)),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, id: Var) -> Option<&AtomKind> {
        if id == 0 {
            return None;
        }
        self.atoms.get(id as usize - 1)
    }

    pub fn kind(&self, id: Var) -> &AtomKind {
        self.get(id).unwrap_or_else(|| panic!("unknown atom id {id}"))
    }

    pub fn is_linear(&self, id: Var) -> bool {
        self.get(id).is_some_and(AtomKind::is_linear)
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, k)| Atom { id: i as Var + 1, kind: k.clone() })
    }

    /// Real variables of a linear atom (empty for Boolean atoms and unknown ids).
    pub fn real_vars_of(&self, id: Var) -> Vec<RealVar> {
        self.get(id).and_then(AtomKind::term).map(|t| t.vars().collect()).unwrap_or_default()
    }

    /// Serialization used by the `.atoms` sidecar and DIMACS comments:
    /// `bool <name>` or `leq|eq <c>*<x> ... <constant>`.
    pub fn serialize(&self, id: Var) -> String {
        match self.kind(id) {
            AtomKind::Bool(name) => format!("bool {name}"),
            AtomKind::Leq(t) => format!("leq {}", self.serialize_term(t)),
            AtomKind::Eq(t) => format!("eq {}", self.serialize_term(t)),
        }
    }

    fn serialize_term(&self, t: &LinTerm) -> String {
        let mut parts: Vec<String> = t.coeffs().map(|(v, c)| format!("{}*{}", c, self.real_name(v))).collect();
        parts.push(t.constant_part().to_string());
        parts.join(" ")
    }

    /// Parses one serialized atom, registering real variable names as needed.
    /// Returns the canonical kind.
    pub fn parse_serialized(&mut self, text: &str) -> Result<AtomKind, String> {
        let mut toks = text.split_whitespace();
        let tag = toks.next().ok_or("empty atom")?;
        match tag {
            "bool" => {
                let name = toks.next().ok_or("missing Boolean atom name")?;
                if toks.next().is_some() {
                    return Err("trailing tokens after Boolean atom".into());
                }
                Ok(AtomKind::Bool(name.to_string()))
            }
            "leq" | "eq" => {
                let rest: Vec<&str> = toks.collect();
                let (constant, monomials) = rest.split_last().ok_or("missing constant")?;
                let mut term = LinTerm::constant(parse_rational(constant)?);
                for m in monomials {
                    let (c, name) = m.split_once('*').ok_or_else(|| format!("malformed monomial `{m}`"))?;
                    let v = self.add_real(name);
                    term.add_coeff(v, parse_rational(c)?);
                }
                let op = if tag == "leq" { CmpOp::Le } else { CmpOp::Eq };
                match canonicalize(op, &term, &LinTerm::zero()) {
                    Canonical::Atom { kind, positive: true } => Ok(kind),
                    _ => Err(format!("degenerate atom `{text}`")),
                }
            }
            other => Err(format!("unknown atom tag `{other}`")),
        }
    }

    /// Human-readable rendering of a literal, e.g. `x - y + 1 <= 0` or `!A`.
    pub fn display_literal(&self, lit: Literal) -> String {
        let name = |v: RealVar| self.real_name(v).to_string();
        match self.get(lit.var()) {
            None => format!("{}", lit.to_dimacs()),
            Some(AtomKind::Bool(n)) => {
                if lit.is_positive() {
                    n.clone()
                } else {
                    format!("!{n}")
                }
            }
            Some(AtomKind::Leq(t)) => {
                if lit.is_positive() {
                    format!("{} <= 0", t.display_with(&name))
                } else {
                    format!("{} > 0", t.display_with(&name))
                }
            }
            Some(AtomKind::Eq(t)) => {
                let op = if lit.is_positive() { "=" } else { "!=" };
                format!("{} {op} 0", t.display_with(&name))
            }
        }
    }
}

impl fmt::Display for AtomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.iter() {
            writeln!(f, "{} {}", a.id, self.serialize(a.id))?;
        }
        Ok(())
    }
}

/// Parses `n` or `n/d` with integer `n`, `d` (`d` nonzero).
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let bad = || format!("malformed rational `{s}`");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}
