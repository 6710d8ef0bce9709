use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LogTarget;
use crate::error::{Error, Result};
use crate::exactalg::{LinearForm, Polynomial, Rational};
use crate::rootsys::RootSystem;

/// A homogeneous derivation, stored as the images `theta(x_1), ...,
/// theta(x_n)` of the coordinate functionals. In cone coordinates the last
/// slot is `theta(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DerivationRepr")]
pub struct Derivation {
    degree: u32,
    coefficients: Vec<Polynomial>,
}

#[derive(Deserialize)]
struct DerivationRepr {
    degree: u32,
    coefficients: Vec<Polynomial>,
}

impl TryFrom<DerivationRepr> for Derivation {
    type Error = Error;

    fn try_from(r: DerivationRepr) -> Result<Self> {
        Derivation::new(r.degree, r.coefficients)
    }
}

/// First hyperplane at which a derivation fails membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub form: LinearForm,
    pub multiplicity: u32,
    /// The first nonzero remainder component and its index.
    pub component: usize,
    pub remainder: Polynomial,
}

impl Derivation {
    /// Builds a derivation and checks that every nonzero coefficient is
    /// homogeneous of degree `degree` in `coefficients.len()` variables.
    pub fn new(degree: u32, coefficients: Vec<Polynomial>) -> Result<Self> {
        let n = coefficients.len();
        if n == 0 {
            return Err(Error::InvalidParameter("derivation needs at least one coefficient".into()));
        }
        for (i, c) in coefficients.iter().enumerate() {
            if c.arity() != n {
                return Err(Error::ArityMismatch {
                    left: n,
                    right: c.arity(),
                });
            }
            if !c.is_homogeneous(degree) {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {} is not homogeneous of degree {degree}",
                    i + 1
                )));
            }
        }
        Ok(Derivation {
            degree,
            coefficients,
        })
    }

    pub fn zero(arity: usize, degree: u32) -> Self {
        Derivation {
            degree,
            coefficients: vec![Polynomial::zero(arity); arity],
        }
    }

    /// The coordinate derivation `d/dx_i` (0-based slot), degree 0.
    pub fn coordinate(arity: usize, slot: usize) -> Self {
        let mut c = vec![Polynomial::zero(arity); arity];
        c[slot] = Polynomial::one(arity);
        Derivation {
            degree: 0,
            coefficients: c,
        }
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    pub fn coefficient(&self, slot: usize) -> &Polynomial {
        &self.coefficients[slot]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    /// `theta(z) = 0` for the last variable.
    pub fn kills_last_variable(&self) -> bool {
        self.coefficients.last().is_some_and(Polynomial::is_zero)
    }

    /// `theta(f)` for a linear form `f`.
    pub fn apply_form(&self, f: &LinearForm) -> Result<Polynomial> {
        if f.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: f.arity(),
            });
        }
        let mut out = Polynomial::zero(self.arity());
        for (c, p) in f.coefficients().iter().zip(&self.coefficients) {
            out.add_scaled(p, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.add_scaled(other, &-Rational::one())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Derivation, c: &Rational) -> Result<Derivation> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: other.arity(),
            });
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "cannot add derivations of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut coefficients = self.coefficients.clone();
        for (a, b) in coefficients.iter_mut().zip(&other.coefficients) {
            a.add_scaled(b, c);
        }
        Ok(Derivation {
            degree,
            coefficients,
        })
    }

    /// `p * self` for a homogeneous polynomial `p`.
    pub fn mul_poly(&self, p: &Polynomial) -> Result<Derivation> {
        let pd = p.total_degree().unwrap_or(0);
        if !p.is_homogeneous(pd) {
            return Err(Error::InvalidParameter("multiplier must be homogeneous".into()));
        }
        Ok(Derivation {
            degree: self.degree + pd,
            coefficients: self.coefficients.iter().map(|c| c * p).collect(),
        })
    }

    /// Exact division of every coefficient by `d`; `None` if some
    /// coefficient is not divisible.
    pub fn divide_exact(&self, d: &Polynomial) -> Result<Option<Derivation>> {
        let dd = d.total_degree().unwrap_or(0);
        let mut out = Vec::with_capacity(self.arity());
        for c in &self.coefficients {
            match c.divide_exact(d)? {
                Some(q) => out.push(q),
                None => return Ok(None),
            }
        }
        Ok(Some(Derivation {
            degree: self.degree.saturating_sub(dd),
            coefficients: out,
        }))
    }

    /// Checks `theta(alpha_H)` against `alpha_H^{m(H)}` for every hyperplane
    /// by the linear-power remainder; returns the first failure.
    pub fn membership_witness<T: LogTarget + ?Sized>(&self, target: &T) -> Result<Option<MembershipWitness>> {
        if target.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                left: target.arity(),
                right: self.arity(),
            });
        }
        for (f, m) in target.constraints() {
            let v = self.apply_form(&f)?;
            let comps = v.remainder_mod_linear_power(&f, m)?;
            if let Some((component, r)) = comps.into_iter().enumerate().find(|(_, r)| !r.is_zero()) {
                return Ok(Some(MembershipWitness {
                    form: f,
                    multiplicity: m,
                    component,
                    remainder: r,
                }));
            }
        }
        Ok(None)
    }

    pub fn is_member<T: LogTarget + ?Sized>(&self, target: &T) -> Result<bool> {
        Ok(self.membership_witness(target)?.is_none())
    }

    /// Membership decided by repeated exact division instead of the
    /// linear-power expansion.
    pub fn is_member_by_division<T: LogTarget + ?Sized>(&self, target: &T) -> Result<bool> {
        for (f, m) in target.constraints() {
            let mut v = self.apply_form(&f)?;
            let fp = f.to_polynomial();
            for _ in 0..m {
                if v.is_zero() {
                    break;
                }
                match v.divide_exact(&fp)? {
                    Some(q) => v = q,
                    None => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// One `theta(x_j) = ...` line per coordinate.
    pub fn render_lines(&self, last_is_z: bool) -> Vec<String> {
        let n = self.arity();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let name = if last_is_z && j + 1 == n {
                    "z".to_string()
                } else {
                    format!("x{}", j + 1)
                };
                format!("theta({name}) = {}", c.display_with(last_is_z))
            })
            .collect()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_lines(false).join("\n"))
    }
}

/// `sum x_i d/dx_i` over all `arity` variables (including `z`).
pub fn euler_derivation(arity: usize) -> Derivation {
    Derivation {
        degree: 1,
        coefficients: (0..arity).map(|i| Polynomial::var(arity, i)).collect(),
    }
}

/// Sets `z = 0` in a derivation with `theta(z) = 0`, giving a derivation in
/// one variable fewer.
pub fn ziegler_restrict(theta: &Derivation) -> Result<Derivation> {
    if theta.arity() < 2 {
        return Err(Error::InvalidParameter("restriction needs a cone derivation".into()));
    }
    if !theta.kills_last_variable() {
        return Err(Error::InvalidParameter("restriction requires theta(z) = 0".into()));
    }
    let n = theta.arity() - 1;
    Ok(Derivation {
        degree: theta.degree,
        coefficients: theta.coefficients[..n]
            .iter()
            .map(|c| c.set_zero(n).drop_last_var())
            .collect(),
    })
}

/// `(s_i theta)(f) = s_i(theta(s_i^{-1} f))`, with `s_i` acting on
/// `x_1..x_l` through its reflection matrix and fixing `z`.
pub fn weyl_act(rs: &RootSystem, i: usize, theta: &Derivation) -> Result<Derivation> {
    let l = rs.rank();
    let n = theta.arity();
    if n != l && n != l + 1 {
        return Err(Error::ArityMismatch { left: l, right: n });
    }
    let r = rs.simple_reflection_matrix(i)?;
    let mut images: Vec<Polynomial> = (0..l)
        .map(|j| {
            let mut row: Vec<i64> = r[j].clone();
            row.resize(n, 0);
            Polynomial::linear(&row)
        })
        .collect();
    if n == l + 1 {
        images.push(Polynomial::var(n, l));
    }
    let moved: Vec<Polynomial> = theta
        .coefficients
        .iter()
        .map(|c| c.compose(&images))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for j in 0..l {
        let mut acc = Polynomial::zero(n);
        for (m, &coef) in r[j].iter().enumerate() {
            if coef != 0 {
                acc.add_scaled(&moved[m], &Rational::from_integer(coef.into()));
            }
        }
        out.push(acc);
    }
    if n == l + 1 {
        out.push(moved[l].clone());
    }
    Ok(Derivation {
        degree: theta.degree,
        coefficients: out,
    })
}

/// The `c` with `a = c * b`, if any. `None` when `b` is zero.
pub fn is_scalar_multiple(a: &Derivation, b: &Derivation) -> Option<Rational> {
    let (slot, bc) = b
        .coefficients
        .iter()
        .enumerate()
        .find_map(|(i, p)| p.leading_term().map(|(m, c)| (i, (m.clone(), c.clone()))))?;
    let c = a.coefficients[slot].coeff(&bc.0) / bc.1;
    if c.is_zero() {
        return None;
    }
    (b.scale(&c) == *a).then_some(c)
}
