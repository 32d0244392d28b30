use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{canonical_bracket, AlgebraId, Mode, Parity};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `Σ c_x x + constant`, a linear combination of modes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearExpr {
    terms: BTreeMap<Mode, Rational>,
    constant: Rational,
}

impl LinearExpr {
    pub fn zero() -> Self {
        LinearExpr::default()
    }

    pub fn mode(x: Mode) -> Self {
        LinearExpr::zero().with(x, Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        LinearExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn with(mut self, x: Mode, coeff: Rational) -> Self {
        self.add_term(x, coeff);
        self
    }

    pub fn add_term(&mut self, x: Mode, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(x).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn add_scaled(&mut self, other: &LinearExpr, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        for (x, c) in &other.terms {
            self.add_term(*x, c * coeff);
        }
        self.constant += &other.constant * coeff;
    }

    pub fn scaled(&self, coeff: &Rational) -> LinearExpr {
        let mut out = LinearExpr::zero();
        out.add_scaled(self, coeff);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mode, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, x: Mode) -> Rational {
        self.terms.get(&x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parity shared by all modes. A pure scalar is even; an expression whose
    /// modes have mixed parity is a domain error.
    pub fn parity_in(&self, algebra: &AlgebraId) -> Result<Parity> {
        let mut parities = self.terms.keys().map(|x| algebra.parity_of(x.kind));
        let first = match parities.next() {
            Some(p) => p,
            None => return Ok(Parity::Even),
        };
        if parities.any(|p| p != first) {
            return Err(Error::Domain(format!("{self} has inhomogeneous parity")));
        }
        if first.is_odd() && !self.constant.is_zero() {
            return Err(Error::Domain(format!("{self} mixes an odd part with a constant")));
        }
        Ok(first)
    }

    /// Graded bracket of two linear expressions, a scalar.
    pub fn bracket(&self, other: &LinearExpr, algebra: &AlgebraId) -> Result<Rational> {
        let mut total = Rational::zero();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                if x.index + y.index != crate::algebra::ModeIndex::ZERO {
                    continue;
                }
                let b = canonical_bracket(*x, *y, algebra)?;
                if !b.is_zero() {
                    total += b * cx * cy;
                }
            }
        }
        Ok(total)
    }

    pub fn map_modes(&self, mut f: impl FnMut(Mode) -> LinearExpr) -> LinearExpr {
        let mut out = LinearExpr::scalar(self.constant.clone());
        for (x, c) in &self.terms {
            out.add_scaled(&f(*x), c);
        }
        out
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{x}")?;
            } else {
                write!(f, "({c}) {x}")?;
            }
        }
        if !self.constant.is_zero() || first {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}
