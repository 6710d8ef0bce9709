use std::fmt;

use num_traits::{Signed, Zero};

use super::poly::{Monomial, Polynomial};
use super::rational::{rat, Rational};
use crate::error::{Error, Result};

/// A (possibly affine) linear form `sum c_i x_i + constant`, stored with
/// its first nonzero coefficient positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm {
    coefficients: Vec<Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn new(coefficients: Vec<Rational>, constant: Rational) -> Result<Self> {
        let lead = coefficients
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidParameter("linear form has no nonzero coefficient".into()))?;
        if lead.is_negative() {
            Ok(LinearForm {
                coefficients: coefficients.iter().map(|c| -c).collect(),
                constant: -constant,
            })
        } else {
            Ok(LinearForm {
                coefficients,
                constant,
            })
        }
    }

    pub fn central(coefficients: Vec<Rational>) -> Result<Self> {
        Self::new(coefficients, Rational::zero())
    }

    pub fn from_ints(coefficients: &[i64]) -> Result<Self> {
        Self::central(coefficients.iter().map(|&c| rat(c)).collect())
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn is_central(&self) -> bool {
        self.constant.is_zero()
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_slot(&self) -> usize {
        self.coefficients
            .iter()
            .position(|c| !c.is_zero())
            .expect("normalized form has a nonzero coefficient")
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.arity();
        let mut p = Polynomial::constant(n, self.constant.clone());
        for (i, c) in self.coefficients.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn is_proportional(&self, other: &LinearForm) -> bool {
        if self.arity() != other.arity() {
            return false;
        }
        let a: Vec<&Rational> = self.coefficients.iter().chain([&self.constant]).collect();
        let b: Vec<&Rational> = other.coefficients.iter().chain([&other.constant]).collect();
        // 2x2 minors all vanish
        (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i] * b[j] == a[j] * b[i]))
    }

    pub fn display_with(&self, last_is_z: bool) -> String {
        self.to_polynomial().display_with(last_is_z)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polynomial().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_normalization() {
        let f = LinearForm::new(vec![rat(0), rat(-2), rat(1)], rat(3)).unwrap();
        assert_eq!(f.coefficients(), &[rat(0), rat(2), rat(-1)]);
        assert_eq!(f.constant(), &rat(-3));
        assert_eq!(f.leading_slot(), 1);
    }

    #[test]
    fn zero_form_rejected() {
        assert!(LinearForm::central(vec![rat(0), rat(0)]).is_err());
    }

    #[test]
    fn proportionality() {
        let a = LinearForm::from_ints(&[1, -1]).unwrap();
        let b = LinearForm::from_ints(&[-3, 3]).unwrap();
        let c = LinearForm::from_ints(&[1, 1]).unwrap();
        assert!(a.is_proportional(&b));
        assert!(!a.is_proportional(&c));
        assert_eq!(a.display_with(true), "x1 - z");
    }
}
