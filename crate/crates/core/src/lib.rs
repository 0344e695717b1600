//! Top-down knowledge compilation of quantifier-free linear real arithmetic
//! formulas into d-DNNF, by recording the trace of an exhaustive DPLL(T)
//! search.
//!
//! Pipeline: [`frontend::parse_smt2`] → [`abstraction::boolean_abstract`] →
//! [`abstraction::to_cnf`] → [`compiler::compile`] → [`ddnnf`] queries and
//! file I/O. [`oracle`] is an independent brute-force reference.

pub mod abstraction;
pub mod compiler;
pub mod ddnnf;
pub mod eager;
pub mod frontend;
pub mod literal;
pub mod lra;
pub mod oracle;

pub use literal::{Literal, Var};
