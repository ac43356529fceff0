//! Affine functionals `x ↦ ⟨slope, x⟩ + offset` on ℚⁿ.

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::scalar::{format_rational, Rational};
use num_traits::Zero;

/// An affine functional with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineFunctional {
    pub slope: Vec<Rational>,
    pub offset: Rational,
}

impl AffineFunctional {
    pub fn new(slope: Vec<Rational>, offset: Rational) -> Self {
        AffineFunctional { slope, offset }
    }

    /// Linear functional (zero offset).
    pub fn linear(slope: Vec<Rational>) -> Self {
        AffineFunctional { slope, offset: Rational::zero() }
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }

    pub fn is_linear(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.slope.len() {
            return Err(Error::DimensionMismatch { expected: self.slope.len(), got: x.len() });
        }
        Ok(dot(&self.slope, x) + &self.offset)
    }

    pub fn describe(&self) -> String {
        let terms: Vec<String> = self.slope.iter().map(format_rational).collect();
        format!("[{}] + {}", terms.join(", "), format_rational(&self.offset))
    }
}
