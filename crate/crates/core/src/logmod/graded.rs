//! Homogeneous pieces of logarithmic derivation modules as rational vector
//! spaces.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::derivation::{euler_derivation, Derivation};
use super::LogTarget;
use crate::arrangement::infinity_form;
use crate::error::{Error, Result};
use crate::exactalg::{
    count_monomials, kernel_sparse, monomials_of_degree, rref_rows, LinearPowerExpander, Monomial, Polynomial, Rational, SparseRow,
};

/// Coordinates for degree-`d` derivations in `arity` variables: slot-major,
/// monomials in decreasing order within a slot.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    arity: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DerivationSpace {
    pub fn new(arity: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(arity, degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DerivationSpace {
            arity,
            degree,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.arity * self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn to_vector(&self, theta: &Derivation) -> Result<Vec<Rational>> {
        if theta.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: theta.arity(),
            });
        }
        let m = self.monomials.len();
        let mut v = vec![Rational::zero(); self.dim()];
        for (slot, p) in theta.coefficients().iter().enumerate() {
            for (mono, c) in p.terms() {
                let idx = self.index.get(mono).ok_or_else(|| {
                    Error::InvalidParameter(format!("derivation is not homogeneous of degree {}", self.degree))
                })?;
                v[slot * m + idx] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[Rational]) -> Derivation {
        let m = self.monomials.len();
        let coefficients = (0..self.arity)
            .map(|slot| {
                let terms = self
                    .monomials
                    .iter()
                    .zip(&v[slot * m..(slot + 1) * m])
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(mono, c)| (mono.clone(), c.clone()));
                Polynomial::from_terms(self.arity, terms).expect("arity matches")
            })
            .collect();
        Derivation::new(self.degree, coefficients).expect("homogeneous by construction")
    }
}

/// A basis of a homogeneous piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: u32,
    pub derivations: Vec<Derivation>,
}

impl GradedBasis {
    pub fn dimension(&self) -> usize {
        self.derivations.len()
    }
}

/// Basis of the degree-`d` part of `D(target)` (or of `D_0`, the members
/// with `theta(z) = 0`, when `restrict_d0` is set).
///
/// The basis is the reduced row echelon basis of the solution space in the
/// coordinates of [`DerivationSpace`], so it does not depend on how the
/// space was computed.
pub fn graded_derivations<T: LogTarget + ?Sized>(target: &T, d: u32, restrict_d0: bool) -> Result<GradedBasis> {
    let n = target.arity();
    if restrict_d0 && n < 2 {
        return Err(Error::InvalidParameter("D0 needs a cone (arity >= 2)".into()));
    }
    if !restrict_d0 && splits_off_euler(target) {
        return graded_via_euler_split(target, d);
    }
    graded_derivations_direct(target, d, restrict_d0)
}

fn splits_off_euler<T: LogTarget + ?Sized>(target: &T) -> bool {
    let n = target.arity();
    n >= 2
        && target.is_simple_arrangement()
        && target
            .constraints()
            .iter()
            .any(|(f, m)| *m == 1 && *f == infinity_form(n))
}

/// `D_d = theta_E * S_{d-1} (+) D0_d` for a simple arrangement containing
/// `z = 0`.
fn graded_via_euler_split<T: LogTarget + ?Sized>(target: &T, d: u32) -> Result<GradedBasis> {
    let n = target.arity();
    let space = DerivationSpace::new(n, d);
    let vectors = spanning_set(target, d)?
        .iter()
        .map(|t| space.to_vector(t))
        .collect::<Result<Vec<_>>>()?;
    let canonical = rref_rows(vectors);
    Ok(GradedBasis {
        degree: d,
        derivations: canonical.iter().map(|v| space.from_vector(v)).collect(),
    })
}

/// A basis of the degree-`d` piece, not canonicalized: Euler multiples
/// followed by a basis of `D_0` when the Euler split applies.
pub(crate) fn spanning_set<T: LogTarget + ?Sized>(target: &T, d: u32) -> Result<Vec<Derivation>> {
    if !splits_off_euler(target) {
        return Ok(graded_derivations_direct(target, d, false)?.derivations);
    }
    let n = target.arity();
    let mut out = Vec::new();
    if d >= 1 {
        let euler = euler_derivation(n);
        for m in monomials_of_degree(n, d - 1) {
            out.push(euler.mul_poly(&Polynomial::term(m, Rational::from_integer(1.into())))?);
        }
    }
    out.extend(graded_derivations_direct(target, d, true)?.derivations);
    Ok(out)
}

/// Dimension of the degree-`d` piece of `D(target)`.
pub fn graded_dimension<T: LogTarget + ?Sized>(target: &T, d: u32) -> Result<usize> {
    if !splits_off_euler(target) {
        return Ok(graded_derivations_direct(target, d, false)?.dimension());
    }
    let n = target.arity();
    let euler_part = if d >= 1 { count_monomials(n, d - 1) } else { 0 };
    Ok(euler_part + graded_derivations_direct(target, d, true)?.dimension())
}

/// Assembles the divisibility constraints over unknown coefficients and
/// solves them with a single kernel computation.
pub fn graded_derivations_direct<T: LogTarget + ?Sized>(
    target: &T,
    d: u32,
    restrict_d0: bool,
) -> Result<GradedBasis> {
    let n = target.arity();
    let space = DerivationSpace::new(n, d);
    let per_slot = space.monomials.len();
    let slots = if restrict_d0 { n - 1 } else { n };
    let cols = slots * per_slot;
    let z = infinity_form(n);

    let mut rows: Vec<SparseRow> = Vec::new();
    for (f, m) in target.constraints() {
        if restrict_d0 && f == z {
            continue;
        }
        let expander = LinearPowerExpander::new(&f, d, m);
        let elim = expander.slot();
        let mut by_key: BTreeMap<(u32, Monomial), Vec<(usize, Rational)>> = BTreeMap::new();
        for (idx, mono) in space.monomials.iter().enumerate() {
            let expanded = expander.expand_monomial(mono);
            for (em, ec) in expanded.terms() {
                let t = em.exponents()[elim];
                if t >= m {
                    continue;
                }
                let mut rest = em.exponents().to_vec();
                rest[elim] = 0;
                let entry = by_key.entry((t, Monomial::new(rest))).or_default();
                for (slot, fc) in f.coefficients().iter().enumerate().take(slots) {
                    if !fc.is_zero() {
                        entry.push((slot * per_slot + idx, fc * ec));
                    }
                }
            }
        }
        rows.extend(by_key.into_values().map(SparseRow::from_sparse_rational));
    }

    let basis = kernel_sparse(cols, rows);
    let derivations = basis
        .into_iter()
        .map(|v| {
            let mut full = v;
            full.resize(space.dim(), Rational::zero());
            space.from_vector(&full)
        })
        .collect();
    Ok(GradedBasis { degree: d, derivations })
}
