//! Input side: SMT-LIB2 parsing and canonical theory atoms.

mod atom;
mod formula;
mod parser;
mod term;

pub use atom::{canonicalize, Atom, AtomKind, AtomTable, Canonical, CmpOp, Leaf};
pub use atom::parse_rational;
pub use formula::{atoms_of, Expr, Formula};
pub use parser::{parse_smt2, ParseError};
pub use term::{LinTerm, RealVar};
#[cfg(test)]
pub(crate) use term::rat;
