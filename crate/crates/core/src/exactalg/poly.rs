//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are ordered `x1 > x2 > ... > z`; the last slot is named `z`
//! whenever a polynomial is printed with [`Polynomial::display_with`] in
//! cone mode. Terms are stored in graded lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linear_form::LinearForm;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Exponent vector. Ordered by total degree, then lexicographically with
/// the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    fn with_slot(&self, slot: usize, value: u32) -> Monomial {
        let mut e = self.0.clone();
        e[slot] = value;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `arity` variables, largest first.
pub fn monomials_of_degree(arity: usize, d: u32) -> Vec<Monomial> {
    fn rec(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e;
            rec(slot + 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if arity == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(0, d, &mut vec![0; arity], &mut out);
    out
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: u32) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    // C(d + n - 1, n - 1)
    let mut acc: u128 = 1;
    for i in 1..n as u128 {
        acc = acc * (d as u128 + i) / i;
    }
    acc as usize
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation; fails only on an arity mismatch.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch {
            left: a.arity,
            right: b.arity,
        });
    }
    Ok(match op {
        PolyOp::Add => a.add_unchecked(b, false),
        PolyOp::Sub => a.add_unchecked(b, true),
        PolyOp::Mul => a.mul_unchecked(b),
    })
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    /// The coordinate function of slot `i` (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        Self::term(Monomial::var(arity, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.arity());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            if m.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: m.arity(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Linear polynomial `sum c_i x_i` from integer coefficients.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), Rational::from_integer(c.into()));
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    fn add_unchecked(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c.clone() } else { c.clone() });
        }
        out
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        assert_eq!(self.arity, other.arity, "polynomial arity mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(self.arity);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Exact quotient `self / d`, `None` when `d` does not divide `self`.
    ///
    /// A single divisor is a Groebner basis of the ideal it generates, so
    /// the remainder of leading-term division vanishes iff `d | self`.
    pub fn divide_exact(&self, d: &Polynomial) -> Result<Option<Polynomial>> {
        if self.arity != d.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: d.arity,
            });
        }
        let (lm, lc) = match d.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.arity);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Ok(None);
            }
            let qm = lm.quotient_of(m);
            let qc = c / &lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }

    pub fn is_divisible_by(&self, d: &Polynomial) -> Result<bool> {
        Ok(self.divide_exact(d)?.is_some())
    }

    /// Components `r_0..r_{m-1}` of `self` expanded in powers of the
    /// central form `f`.
    ///
    /// The first variable with a nonzero coefficient in `f` is eliminated;
    /// `r_t` is returned in the remaining variables (its slot for the
    /// eliminated variable is always zero). All components vanish iff
    /// `f^m` divides `self`.
    pub fn remainder_mod_linear_power(&self, f: &LinearForm, m: u32) -> Result<Vec<Polynomial>> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: f.arity(),
            });
        }
        if !f.is_central() {
            return Err(Error::InvalidParameter(
                "remainder requires a central form".into(),
            ));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("power must be at least 1".into()));
        }
        let exp = LinearPowerExpander::new(f, self.total_degree().unwrap_or(0), m);
        Ok(exp.components(self, m))
    }

    /// Sets the variable in `slot` to zero.
    pub fn set_zero(&self, slot: usize) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[slot] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops the last variable, which must not occur.
    pub fn drop_last_var(&self) -> Polynomial {
        let n = self.arity - 1;
        let mut p = Self::zero(n);
        for (m, c) in &self.terms {
            debug_assert_eq!(m.0[n], 0);
            p.add_term(Monomial(m.0[..n].to_vec()), c.clone());
        }
        p
    }

    /// Appends a new last variable that does not occur.
    pub fn extend_arity(&self) -> Polynomial {
        let mut p = Self::zero(self.arity + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.push(0);
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Substitutes `x_i -> images[i]` for every slot.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: images.len(),
            });
        }
        let target = images.first().map_or(0, Polynomial::arity);
        if let Some(bad) = images.iter().find(|p| p.arity != target) {
            return Err(Error::ArityMismatch {
                left: target,
                right: bad.arity,
            });
        }
        let max_deg = self.total_degree().unwrap_or(0);
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        for slot in powers.iter_mut() {
            while slot.len() <= max_deg as usize {
                let next = slot.last().unwrap().mul_unchecked(&slot[1]);
                slot.push(next);
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (slot, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul_unchecked(&powers[slot][e as usize]);
                }
            }
            out.add_scaled(&t, &Rational::one());
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Canonical text with variables `x1..x_n` (or `x1..x_l, z` when
    /// `last_is_z`).
    pub fn display_with(&self, last_is_z: bool) -> String {
        let names = var_names(self.arity, last_is_z);
        render_terms(self.terms(), &names)
    }
}

pub(crate) fn var_names(arity: usize, last_is_z: bool) -> Vec<String> {
    (0..arity)
        .map(|i| {
            if last_is_z && i + 1 == arity {
                "z".to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (e, name) in m.0.iter().zip(names) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a Rational)>,
    names: &[String],
) -> String {
    let mut out = String::new();
    for (idx, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = render_monomial(m, names);
        if mono.is_empty() {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rational(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(false))
    }
}

/// Expands polynomials in powers of a central linear form by rewriting the
/// eliminated variable `x_v = (f - g) / c`.
pub(crate) struct LinearPowerExpander {
    slot: usize,
    // powers[e] = ((x_v - g) / c)^e with x_v standing for f, keeping only
    // the terms with f-degree below `below`
    powers: Vec<Polynomial>,
}

impl LinearPowerExpander {
    /// Expansions up to `max_degree`, truncated to `f`-powers below `below`.
    /// Truncation commutes with multiplying by the substitution, whose
    /// `f`-degree is at most 1.
    pub(crate) fn new(f: &LinearForm, max_degree: u32, below: u32) -> Self {
        let n = f.arity();
        let slot = f.leading_slot();
        let c = f.coefficients()[slot].clone();
        let mut sub = Polynomial::var(n, slot);
        for (b, fb) in f.coefficients().iter().enumerate() {
            if b != slot && !fb.is_zero() {
                sub.add_term(Monomial::var(n, b), -fb.clone());
            }
        }
        let sub = sub.scale(&(Rational::one() / c));
        let mut powers = vec![Polynomial::one(n)];
        for e in 1..=max_degree as usize {
            let mut next = powers[e - 1].mul_unchecked(&sub);
            next.terms.retain(|m, _| m.0[slot] < below);
            powers.push(next);
        }
        LinearPowerExpander { slot, powers }
    }

    pub(crate) fn slot(&self) -> usize {
        self.slot
    }

    fn power(&self, e: u32) -> &Polynomial {
        &self.powers[e as usize]
    }

    /// The expansion of a single monomial: `sum_t r_t * f^t`, returned as a
    /// polynomial whose `slot` exponent records `t`.
    pub(crate) fn expand_monomial(&self, m: &Monomial) -> Polynomial {
        let e = m.0[self.slot];
        let rest = m.with_slot(self.slot, 0);
        self.power(e).mul_monomial(&rest, &Rational::one())
    }

    pub(crate) fn components(&self, p: &Polynomial, m: u32) -> Vec<Polynomial> {
        let mut comps = vec![Polynomial::zero(p.arity); m as usize];
        for (mono, c) in &p.terms {
            let e = mono.0[self.slot];
            let rest = mono.with_slot(self.slot, 0);
            for (pm, pc) in &self.power(e).terms {
                let t = pm.0[self.slot];
                if t < m {
                    comps[t as usize].add_term(pm.with_slot(self.slot, 0).mul(&rest), pc * c);
                }
            }
        }
        comps
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        poly_arith(self, rhs, PolyOp::Add).expect("polynomial arity mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        poly_arith(self, rhs, PolyOp::Sub).expect("polynomial arity mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        poly_arith(self, rhs, PolyOp::Mul).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    arity: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            arity: self.arity,
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    coef: format_rational(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c = parse_rational(&t.coef).map_err(serde::de::Error::custom)?;
            terms.push((Monomial(t.exp), c));
        }
        Polynomial::from_terms(raw.arity, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn additive_inverse() {
        let a = x(2, 0);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let (x1, z) = (x(2, 0), x(2, 1));
        let p = &(&x1 + &z) * &(&x1 - &z);
        assert_eq!(p, &(&x1 * &x1) - &(&z * &z));
        assert_eq!(p.display_with(true), "x1^2 - z^2");
    }

    #[test]
    fn rational_cancellation() {
        let a = x(2, 0).scale(&ratio(2, 3));
        let b = x(2, 1).scale(&ratio(3, 2));
        assert_eq!(&a * &b, &x(2, 0) * &x(2, 1));
    }

    #[test]
    fn arity_mismatch_is_error() {
        let err = poly_arith(&x(2, 0), &x(3, 0), PolyOp::Add).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { left: 2, right: 3 });
    }

    #[test]
    fn grlex_order() {
        // x1 > x2 > z, degree first
        let a = Monomial::new(vec![0, 0, 2]);
        let b = Monomial::new(vec![1, 0, 0]);
        let c = Monomial::new(vec![0, 1, 1]);
        let d = Monomial::new(vec![1, 0, 1]);
        assert!(a > b);
        assert!(d > c && c > a);
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms.len(), count_monomials(3, 2));
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(ms[0], Monomial::new(vec![2, 0, 0]));
    }

    #[test]
    fn divide_exact_examples() {
        let (x1, z) = (x(2, 0), x(2, 1));
        let p = &(&x1 * &x1) - &(&z * &z);
        let q = p.divide_exact(&(&x1 - &z)).unwrap().unwrap();
        assert_eq!(q, &x1 + &z);

        let p2 = &(&x1 * &x1) + &(&z * &z);
        assert_eq!(p2.divide_exact(&(&x1 - &z)).unwrap(), None);

        let p3 = &x1 * &(&x1 - &z);
        assert_eq!(p3.divide_exact(&(&x1 - &z)).unwrap().unwrap(), x1);

        assert_eq!(
            p3.divide_exact(&Polynomial::zero(2)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn remainder_examples() {
        let x1sq = &x(2, 0) * &x(2, 0);
        let f = LinearForm::central(vec![rat(1), rat(0)]).unwrap();
        let r = x1sq.remainder_mod_linear_power(&f, 2).unwrap();
        assert!(r.iter().all(Polynomial::is_zero));
        let r = x1sq.remainder_mod_linear_power(&f, 3).unwrap();
        assert!(r[0].is_zero() && r[1].is_zero() && !r[2].is_zero());

        let p = &x(2, 0) * &x(2, 1);
        let f = LinearForm::central(vec![rat(1), rat(1)]).unwrap();
        let r = p.remainder_mod_linear_power(&f, 1).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0], -&(&x(2, 1) * &x(2, 1)));
    }

    #[test]
    fn rendering() {
        let (x1, x2, z) = (x(3, 0), x(3, 1), x(3, 2));
        let p = &(&(&x1 * &x2).scale(&ratio(2, 3)) - &z) + &Polynomial::constant(3, rat(5));
        assert_eq!(p.display_with(true), "2/3*x1*x2 - z + 5");
        assert_eq!(Polynomial::zero(3).display_with(true), "0");
        assert_eq!((-&x1).display_with(false), "-x1");
    }

    #[test]
    fn json_shape() {
        let p = &x(2, 0).scale(&ratio(1, 2)) - &x(2, 1);
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"arity": 2, "terms": [
                {"exp": [1, 0], "coef": "1/2"},
                {"exp": [0, 1], "coef": "-1"}
            ]})
        );
        let back: Polynomial = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn compose_linear() {
        // x1 -> -x1, x2 -> x1 + x2 applied to x1*x2
        let p = &x(2, 0) * &x(2, 1);
        let img = [-&x(2, 0), &x(2, 0) + &x(2, 1)];
        let q = p.compose(&img).unwrap();
        assert_eq!(q, -&(&x(2, 0) * &(&x(2, 0) + &x(2, 1))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly3() -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5), 0..6).prop_map(|terms| {
                let mut p = Polynomial::zero(3);
                for ((a, b, c), k) in terms {
                    p.add_term(Monomial::new(vec![a, b, c]), rat(k));
                }
                p
            })
        }

        fn form3() -> impl Strategy<Value = LinearForm> {
            (1i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, c)| LinearForm::from_ints(&[a, b, c]).unwrap())
        }

        proptest! {
            #[test]
            fn divide_round_trip(a in poly3(), b in poly3()) {
                prop_assume!(!b.is_zero());
                let prod = &a * &b;
                prop_assert_eq!(prod.divide_exact(&b).unwrap(), Some(a));
            }

            #[test]
            fn remainder_matches_iterated_division(p in poly3(), f in form3(), m in 1u32..4) {
                let fp = f.to_polynomial();
                let mut v = p.clone();
                let mut divisible = true;
                for _ in 0..m {
                    if v.is_zero() {
                        break;
                    }
                    match v.divide_exact(&fp).unwrap() {
                        Some(q) => v = q,
                        None => {
                            divisible = false;
                            break;
                        }
                    }
                }
                let comps = p.remainder_mod_linear_power(&f, m).unwrap();
                prop_assert_eq!(comps.iter().all(Polynomial::is_zero), divisible);
            }

            #[test]
            fn multiples_have_zero_remainder(p in poly3(), f in form3(), m in 1u32..3) {
                let q = &p * &f.to_polynomial().pow(m);
                prop_assert!(q.remainder_mod_linear_power(&f, m).unwrap().iter().all(Polynomial::is_zero));
            }
        }
    }
}
