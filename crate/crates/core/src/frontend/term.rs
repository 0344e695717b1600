use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Real-valued variable, indexing the real-variable name table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealVar(pub u32);

/// A linear term `sum_i c_i * x_i + c` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is semantic
/// equality of the affine function.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinTerm {
    coeffs: BTreeMap<RealVar, BigRational>,
    constant: BigRational,
}

impl LinTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        LinTerm { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(v: RealVar) -> Self {
        let mut t = Self::zero();
        t.add_coeff(v, BigRational::one());
        t
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (RealVar, BigRational)>, constant: BigRational) -> Self {
        let mut t = Self::constant(constant);
        for (v, c) in coeffs {
            t.add_coeff(v, c);
        }
        t
    }

    pub fn add_coeff(&mut self, v: RealVar, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: RealVar) -> Option<&BigRational> {
        self.coeffs.get(&v)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (RealVar, &BigRational)> + '_ {
        self.coeffs.iter().map(|(v, c)| (*v, c))
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn vars(&self) -> impl Iterator<Item = RealVar> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn plus(&self, other: &LinTerm) -> LinTerm {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.add_coeff(*v, c.clone());
        }
        out.constant += &other.constant;
        out
    }

    pub fn minus(&self, other: &LinTerm) -> LinTerm {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> LinTerm {
        self.scaled(&-BigRational::one())
    }

    pub fn scaled(&self, k: &BigRational) -> LinTerm {
        if k.is_zero() {
            return LinTerm::zero();
        }
        LinTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// Adds `k * other` in place.
    pub fn add_scaled(&mut self, other: &LinTerm, k: &BigRational) {
        if k.is_zero() {
            return;
        }
        for (v, c) in &other.coeffs {
            self.add_coeff(*v, c * k);
        }
        self.constant += &other.constant * k;
    }

    /// Evaluates the term; variables missing from `point` read as zero.
    pub fn eval(&self, point: &BTreeMap<RealVar, BigRational>) -> BigRational {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            if let Some(x) = point.get(v) {
                acc += c * x;
            }
        }
        acc
    }

    /// Rescales by a positive factor so that all coefficients and the constant
    /// are integers whose gcd is one.
    pub fn primitive(&self) -> LinTerm {
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for c in self.coeffs.values().chain(std::iter::once(&self.constant)) {
            lcm = lcm.lcm(c.denom());
        }
        for c in self.coeffs.values().chain(std::iter::once(&self.constant)) {
            let scaled = c.numer() * (&lcm / c.denom());
            gcd = gcd.gcd(&scaled);
        }
        if gcd.is_zero() {
            return LinTerm::zero();
        }
        self.scaled(&BigRational::new(lcm, gcd.abs()))
    }

    /// First (lowest-id) nonzero coefficient.
    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.values().next()
    }

    /// Writes the term with variable names from `name`.
    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(RealVar) -> String) -> impl fmt::Display + 'a {
        TermDisplay { term: self, name }
    }
}

struct TermDisplay<'a> {
    term: &'a LinTerm,
    name: &'a dyn Fn(RealVar) -> String,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.term.coeffs() {
            let name = (self.name)(v);
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}{name}")?;
            }
            first = false;
        }
        let k = self.term.constant_part();
        if first {
            write!(f, "{k}")
        } else if k.is_positive() {
            write!(f, " + {k}")
        } else if k.is_negative() {
            write!(f, " - {}", k.abs())
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
