//! Parser for the QF_LRA subset of SMT-LIB2.
//!
//! Accepted commands: `set-logic`, `set-info`, `set-option`, `declare-const`,
//! `declare-fun` with arity zero, `assert`, `check-sat`, `get-model`,
//! `get-value`, `exit`. Sorts are `Real` and `Bool`. Terms are linear:
//! multiplication needs at least all but one factor to be a constant.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::atom::{AtomTable, CmpOp, Leaf};
use super::formula::{Expr, Formula};
use super::term::LinTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error (line {line}): {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported feature (line {line}): {msg}")]
    UnsupportedFeature { line: usize, msg: String },
    #[error("undeclared symbol `{name}` (line {line})")]
    UndeclaredSymbol { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum SExpr {
    Atom { text: String, quoted: bool, line: usize },
    Str { line: usize },
    List { items: Vec<SExpr>, line: usize },
}

impl SExpr {
    fn line(&self) -> usize {
        match self {
            SExpr::Atom { line, .. } | SExpr::Str { line } | SExpr::List { line, .. } => *line,
        }
    }

    fn symbol(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            _ => None,
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn unsupported(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::UnsupportedFeature { line, msg: msg.into() }
}

fn read_sexprs(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut stack: Vec<(Vec<SExpr>, usize)> = Vec::new();
    let mut top = Vec::new();

    let push = |e: SExpr, stack: &mut Vec<(Vec<SExpr>, usize)>, top: &mut Vec<SExpr>| match stack.last_mut() {
        Some((items, _)) => items.push(e),
        None => top.push(e),
    };

    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            ';' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                stack.push((Vec::new(), line));
                i += 1;
            }
            ')' => {
                let (items, start) = stack.pop().ok_or_else(|| syntax(line, "unbalanced `)`"))?;
                push(SExpr::List { items, line: start }, &mut stack, &mut top);
                i += 1;
            }
            '|' => {
                let start = line;
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(start, "unterminated quoted symbol")),
                        Some('|') => break,
                        Some(ch) => {
                            if *ch == '\n' {
                                line += 1;
                            }
                            s.push(*ch);
                        }
                    }
                    i += 1;
                }
                i += 1;
                push(SExpr::Atom { text: s, quoted: true, line: start }, &mut stack, &mut top);
            }
            '"' => {
                let start = line;
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(start, "unterminated string literal")),
                        Some('"') if chars.get(i + 1) == Some(&'"') => i += 2,
                        Some('"') => break,
                        Some(ch) => {
                            if *ch == '\n' {
                                line += 1;
                            }
                            i += 1;
                        }
                    }
                }
                i += 1;
                push(SExpr::Str { line: start }, &mut stack, &mut top);
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '(' | ')' | ';' | '|' | '"') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                push(SExpr::Atom { text, quoted: false, line }, &mut stack, &mut top);
            }
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(syntax(*start, "unbalanced `(`"));
    }
    Ok(top)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sort {
    Real,
    Bool,
}

struct Parser {
    atoms: AtomTable,
    decls: HashMap<String, Sort>,
    asserts: Vec<Expr>,
}

/// Parses SMT-LIB2 text into a [`Formula`]: the conjunction of all asserts.
pub fn parse_smt2(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { atoms: AtomTable::new(), decls: HashMap::new(), asserts: Vec::new() };
    for cmd in read_sexprs(text)? {
        p.command(&cmd)?;
    }
    let expr = match p.asserts.len() {
        0 => Expr::True,
        1 => p.asserts.pop().unwrap(),
        _ => Expr::And(p.asserts),
    };
    Ok(Formula { expr, atoms: p.atoms })
}

fn parse_numeral(s: &str) -> Option<BigRational> {
    if s.is_empty() || !s.chars().next().unwrap().is_ascii_digit() {
        return None;
    }
    if let Some((int, frac)) = s.split_once('.') {
        if int.is_empty() || frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = format!("{int}{frac}").parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        Some(BigRational::new(n, d))
    } else if s.chars().all(|c| c.is_ascii_digit()) {
        Some(BigRational::from_integer(s.parse().ok()?))
    } else {
        None
    }
}

impl Parser {
    fn command(&mut self, cmd: &SExpr) -> Result<(), ParseError> {
        let line = cmd.line();
        let SExpr::List { items, .. } = cmd else {
            return Err(syntax(line, "expected a command"));
        };
        let head = items.first().and_then(SExpr::symbol).ok_or_else(|| syntax(line, "empty command"))?;
        match head {
            "set-logic" => {
                let logic = items.get(1).and_then(SExpr::symbol).ok_or_else(|| syntax(line, "set-logic expects a symbol"))?;
                if logic != "QF_LRA" {
                    return Err(unsupported(line, format!("logic {logic}")));
                }
                Ok(())
            }
            "set-info" | "set-option" | "check-sat" | "get-model" | "get-value" | "get-info" | "exit" => Ok(()),
            "declare-const" => {
                let [_, name, sort] = items.as_slice() else {
                    return Err(syntax(line, "declare-const expects a name and a sort"));
                };
                self.declare(name, sort)
            }
            "declare-fun" => {
                let [_, name, args, sort] = items.as_slice() else {
                    return Err(syntax(line, "declare-fun expects a name, argument sorts and a sort"));
                };
                match args {
                    SExpr::List { items, .. } if items.is_empty() => self.declare(name, sort),
                    SExpr::List { .. } => Err(unsupported(line, "uninterpreted functions")),
                    _ => Err(syntax(line, "declare-fun expects an argument sort list")),
                }
            }
            "assert" => {
                let [_, body] = items.as_slice() else {
                    return Err(syntax(line, "assert expects one term"));
                };
                let e = self.bool_term(body)?;
                self.asserts.push(e);
                Ok(())
            }
            "define-fun" | "define-sort" | "declare-sort" | "push" | "pop" | "declare-datatypes" | "check-sat-assuming" => {
                Err(unsupported(line, format!("command {head}")))
            }
            other => Err(syntax(line, format!("unknown command {other}"))),
        }
    }

    fn declare(&mut self, name: &SExpr, sort: &SExpr) -> Result<(), ParseError> {
        let line = name.line();
        let name = match name {
            SExpr::Atom { text, quoted, .. } => {
                if *quoted && text.chars().any(|c| c.is_whitespace() || c == '*') {
                    return Err(unsupported(line, format!("symbol `{text}` contains whitespace or `*`")));
                }
                text.clone()
            }
            _ => return Err(syntax(line, "expected a symbol")),
        };
        let sort = match sort.symbol() {
            Some("Real") => Sort::Real,
            Some("Bool") => Sort::Bool,
            Some("Int") => return Err(unsupported(line, "sort Int")),
            Some(s) => return Err(unsupported(line, format!("sort {s}"))),
            None => return Err(unsupported(line, "compound sorts")),
        };
        if self.decls.insert(name.clone(), sort).is_some() {
            return Err(syntax(line, format!("symbol `{name}` declared twice")));
        }
        if sort == Sort::Real {
            self.atoms.add_real(&name);
        }
        Ok(())
    }

    /// Best-effort sort inference, used to disambiguate `=` and `distinct`.
    fn sort_of(&self, e: &SExpr) -> Result<Sort, ParseError> {
        match e {
            SExpr::Atom { text, quoted, line } => {
                if !quoted && parse_numeral(text).is_some() {
                    return Ok(Sort::Real);
                }
                if !quoted && (text == "true" || text == "false") {
                    return Ok(Sort::Bool);
                }
                self.decls
                    .get(text)
                    .copied()
                    .ok_or_else(|| ParseError::UndeclaredSymbol { line: *line, name: text.clone() })
            }
            SExpr::Str { line } => Err(syntax(*line, "string literal in term position")),
            SExpr::List { items, line } => match items.first().and_then(SExpr::symbol) {
                Some("+" | "-" | "*" | "/" | "to_real") => Ok(Sort::Real),
                Some("!") => self.sort_of(items.get(1).ok_or_else(|| syntax(*line, "empty annotation"))?),
                Some("ite") => Err(unsupported(*line, "ite")),
                _ => Ok(Sort::Bool),
            },
        }
    }

    fn bool_term(&mut self, e: &SExpr) -> Result<Expr, ParseError> {
        match e {
            SExpr::Atom { text, quoted, line } => {
                if !quoted && text == "true" {
                    return Ok(Expr::True);
                }
                if !quoted && text == "false" {
                    return Ok(Expr::False);
                }
                if !quoted && parse_numeral(text).is_some() {
                    return Err(syntax(*line, format!("expected a Boolean term, found `{text}`")));
                }
                match self.decls.get(text) {
                    Some(Sort::Bool) => Ok(Expr::Lit(self.atoms.bool_atom(text))),
                    Some(Sort::Real) => Err(syntax(*line, format!("`{text}` is Real, expected Bool"))),
                    None => Err(ParseError::UndeclaredSymbol { line: *line, name: text.clone() }),
                }
            }
            SExpr::Str { line } => Err(syntax(*line, "string literal in term position")),
            SExpr::List { items, line } => {
                let line = *line;
                let head = match items.first() {
                    Some(SExpr::Atom { text, quoted: false, .. }) => text.as_str(),
                    Some(_) => return Err(unsupported(line, "higher-order application")),
                    None => return Err(syntax(line, "empty application")),
                };
                let args = &items[1..];
                match head {
                    "not" => {
                        let [a] = args else {
                            return Err(syntax(line, "not expects one argument"));
                        };
                        Ok(Expr::negation(self.bool_term(a)?))
                    }
                    "and" => Ok(Expr::And(self.bool_args(args)?)),
                    "or" => Ok(Expr::Or(self.bool_args(args)?)),
                    "=>" => {
                        let mut parts = self.bool_args(args)?;
                        if parts.len() < 2 {
                            return Err(syntax(line, "=> expects at least two arguments"));
                        }
                        let mut acc = parts.pop().unwrap();
                        while let Some(p) = parts.pop() {
                            acc = Expr::implies(p, acc);
                        }
                        Ok(acc)
                    }
                    "=" | "distinct" => {
                        if args.len() < 2 {
                            return Err(syntax(line, format!("{head} expects at least two arguments")));
                        }
                        let sort = self.sort_of(&args[0])?;
                        match (head, sort) {
                            ("=", Sort::Real) => self.chain(CmpOp::Eq, args),
                            ("distinct", Sort::Real) => self.pairwise_distinct(args),
                            ("=", Sort::Bool) => {
                                let parts = self.bool_args(args)?;
                                Ok(Expr::And(parts.windows(2).map(|w| Expr::iff(w[0].clone(), w[1].clone())).collect()))
                            }
                            _ => {
                                let parts = self.bool_args(args)?;
                                if parts.len() != 2 {
                                    return Err(unsupported(line, "Boolean distinct with more than two arguments"));
                                }
                                Ok(Expr::negation(Expr::iff(parts[0].clone(), parts[1].clone())))
                            }
                        }
                    }
                    "<=" => self.chain(CmpOp::Le, args),
                    ">=" => self.chain(CmpOp::Ge, args),
                    "<" => self.chain(CmpOp::Lt, args),
                    ">" => self.chain(CmpOp::Gt, args),
                    "!" => match args.first() {
                        Some(inner) => self.bool_term(inner),
                        None => Err(syntax(line, "empty annotation")),
                    },
                    "+" | "-" | "*" | "/" => {
                        self.real_term(e)?;
                        Err(syntax(line, "arithmetic term used where a Boolean was expected"))
                    }
                    "forall" | "exists" => Err(unsupported(line, "quantifiers")),
                    "let" => Err(unsupported(line, "let bindings")),
                    "ite" => Err(unsupported(line, "ite")),
                    "xor" => Err(unsupported(line, "xor")),
                    other => {
                        if self.decls.contains_key(other) {
                            Err(unsupported(line, format!("application of constant `{other}`")))
                        } else {
                            Err(ParseError::UndeclaredSymbol { line, name: other.to_string() })
                        }
                    }
                }
            }
        }
    }

    fn bool_args(&mut self, args: &[SExpr]) -> Result<Vec<Expr>, ParseError> {
        args.iter().map(|a| self.bool_term(a)).collect()
    }

    fn leaf(&mut self, op: CmpOp, lhs: &LinTerm, rhs: &LinTerm) -> Expr {
        match self.atoms.normalize_comparison(op, lhs, rhs) {
            Leaf::Const(true) => Expr::True,
            Leaf::Const(false) => Expr::False,
            Leaf::Lit(l) => Expr::Lit(l),
        }
    }

    fn chain(&mut self, op: CmpOp, args: &[SExpr]) -> Result<Expr, ParseError> {
        if args.len() < 2 {
            let line = args.first().map_or(0, SExpr::line);
            return Err(syntax(line, "comparison expects at least two arguments"));
        }
        let terms = args.iter().map(|a| self.real_term(a)).collect::<Result<Vec<_>, _>>()?;
        let mut parts: Vec<Expr> = terms.windows(2).map(|w| self.leaf(op, &w[0], &w[1])).collect();
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn pairwise_distinct(&mut self, args: &[SExpr]) -> Result<Expr, ParseError> {
        let terms = args.iter().map(|a| self.real_term(a)).collect::<Result<Vec<_>, _>>()?;
        let mut parts = Vec::new();
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                parts.push(self.leaf(CmpOp::Ne, &terms[i], &terms[j]));
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn real_term(&mut self, e: &SExpr) -> Result<LinTerm, ParseError> {
        match e {
            SExpr::Atom { text, quoted, line } => {
                if !quoted {
                    if let Some(q) = parse_numeral(text) {
                        return Ok(LinTerm::constant(q));
                    }
                }
                match self.decls.get(text) {
                    Some(Sort::Real) => Ok(LinTerm::var(self.atoms.real_var(text).expect("declared real"))),
                    Some(Sort::Bool) => Err(syntax(*line, format!("`{text}` is Bool, expected Real"))),
                    None => Err(ParseError::UndeclaredSymbol { line: *line, name: text.clone() }),
                }
            }
            SExpr::Str { line } => Err(syntax(*line, "string literal in term position")),
            SExpr::List { items, line } => {
                let line = *line;
                let head = items.first().and_then(SExpr::symbol).ok_or_else(|| syntax(line, "malformed term"))?;
                let args = &items[1..];
                match head {
                    "+" => {
                        let mut acc = LinTerm::zero();
                        for a in args {
                            acc = acc.plus(&self.real_term(a)?);
                        }
                        Ok(acc)
                    }
                    "-" => match args {
                        [] => Err(syntax(line, "- expects arguments")),
                        [a] => Ok(self.real_term(a)?.negated()),
                        [first, rest @ ..] => {
                            let mut acc = self.real_term(first)?;
                            for a in rest {
                                acc = acc.minus(&self.real_term(a)?);
                            }
                            Ok(acc)
                        }
                    },
                    "*" => {
                        let mut scale = BigRational::one();
                        let mut linear: Option<LinTerm> = None;
                        for a in args {
                            let t = self.real_term(a)?;
                            if t.is_constant() {
                                scale *= t.constant_part();
                            } else if linear.is_none() {
                                linear = Some(t);
                            } else {
                                return Err(unsupported(line, "nonlinear multiplication"));
                            }
                        }
                        Ok(match linear {
                            Some(t) => t.scaled(&scale),
                            None => LinTerm::constant(scale),
                        })
                    }
                    "/" => match args {
                        [first, rest @ ..] if !rest.is_empty() => {
                            let mut acc = self.real_term(first)?;
                            for a in rest {
                                let d = self.real_term(a)?;
                                if !d.is_constant() {
                                    return Err(unsupported(line, "division by a non-constant term"));
                                }
                                if d.constant_part().is_zero() {
                                    return Err(unsupported(line, "division by zero"));
                                }
                                acc = acc.scaled(&d.constant_part().recip());
                            }
                            Ok(acc)
                        }
                        _ => Err(syntax(line, "/ expects at least two arguments")),
                    },
                    "!" => match args.first() {
                        Some(inner) => self.real_term(inner),
                        None => Err(syntax(line, "empty annotation")),
                    },
                    "ite" => Err(unsupported(line, "ite")),
                    "to_real" | "to_int" => Err(unsupported(line, "integer sort conversions")),
                    other if self.decls.contains_key(other) => {
                        Err(unsupported(line, format!("application of constant `{other}`")))
                    }
                    other => Err(ParseError::UndeclaredSymbol { line, name: other.to_string() }),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::atom::AtomKind;
    use crate::frontend::term::{rat, RealVar};
    use crate::literal::Literal;

    const SEC2: &str = "(declare-const x Real)(declare-const A Bool)\
        (assert (and (or (<= x 0) (>= x 1)) (or A (<= x 0))))";

    #[test]
    fn section_two_example() {
        let f = parse_smt2(SEC2).unwrap();
        assert_eq!(f.atoms.len(), 3);
        let x = LinTerm::var(RealVar(0));
        assert_eq!(f.atoms.kind(1), &AtomKind::Leq(x.clone()));
        assert_eq!(f.atoms.kind(2), &AtomKind::Leq(x.negated().plus(&LinTerm::constant(rat(1)))));
        assert_eq!(f.atoms.kind(3), &AtomKind::Bool("A".into()));
        let l = |v| Expr::Lit(Literal::positive(v));
        assert_eq!(f.expr, Expr::And(vec![Expr::Or(vec![l(1), l(2)]), Expr::Or(vec![l(3), l(1)])]));
    }

    #[test]
    fn assert_true_is_trivial() {
        let f = parse_smt2("(assert true)").unwrap();
        assert_eq!(f.expr, Expr::True);
        assert!(f.atoms.is_empty());
    }

    #[test]
    fn nonlinear_is_rejected() {
        let e = parse_smt2("(declare-const x Real)(declare-const y Real)(assert (* x y))").unwrap_err();
        assert!(matches!(e, ParseError::UnsupportedFeature { .. }), "{e:?}");
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_smt2("(assert (and A"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_smt2("(assert A)"), Err(ParseError::UndeclaredSymbol { .. })));
        assert!(matches!(parse_smt2("(set-logic QF_LIA)"), Err(ParseError::UnsupportedFeature { .. })));
        assert!(matches!(
            parse_smt2("(declare-const x Real)(assert (forall ((y Real)) (<= x y)))"),
            Err(ParseError::UnsupportedFeature { .. })
        ));
        assert!(matches!(parse_smt2("(declare-const n Int)"), Err(ParseError::UnsupportedFeature { .. })));
        assert!(matches!(
            parse_smt2("(declare-const x Real)(assert (let ((y x)) (<= y 0)))"),
            Err(ParseError::UnsupportedFeature { .. })
        ));
    }

    #[test]
    fn decimals_division_and_scaling() {
        let f = parse_smt2("(set-logic QF_LRA)(declare-fun x () Real)(assert (<= (* 2 x) (/ 9 2.25)))").unwrap();
        let x = LinTerm::var(RealVar(0));
        assert_eq!(f.atoms.kind(1), &AtomKind::Leq(x.minus(&LinTerm::constant(rat(2)))));
    }

    #[test]
    fn figure_one_atoms() {
        let src = "(declare-const x Real)(declare-const y Real)\
            (assert (and (or (< x (- y 1)) (> x (+ y 1))) (or (not (< x (- y 1))) (> x 20))))";
        let f = parse_smt2(src).unwrap();
        assert_eq!(f.atoms.len(), 3);
    }

    #[test]
    fn constant_comparisons_fold() {
        let f = parse_smt2("(declare-const x Real)(assert (or (distinct x x) (< 1 2)))").unwrap();
        assert_eq!(f.expr, Expr::Or(vec![Expr::False, Expr::True]));
        assert!(f.atoms.is_empty());
    }

    #[test]
    fn parse_is_deterministic() {
        assert_eq!(parse_smt2(SEC2).unwrap(), parse_smt2(SEC2).unwrap());
    }
}
