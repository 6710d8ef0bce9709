//! The simple-root bases SRB+ and SRB- of `D_0` of the cone of `Shi^k`,
//! the k-Euler derivation, and checks of their properties.

mod verify;

pub use verify::{
    default_gammas, membership_checks, run_suite, verify_characterization, verify_exponents, verify_k_euler, verify_reflections,
    verify_simplefree, verify_ziegler, CheckRecord, CheckStatus, Suite, VerificationReport,
};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{b_gamma, catalan_arrangement, cone, shifted_simple_form, Sign};
use crate::error::{Error, Result};
use crate::exactalg::{rational::serde_vec_str, rref_rows, Rational};
use crate::logmod::{graded_derivations, Derivation, DerivationSpace};
use crate::rootsys::{build_root_system, Family, RootSystem};

/// Output of the full pipeline. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SrbResultJson", into = "SrbResultJson")]
pub struct SrbResult {
    pub rs: RootSystem,
    pub k: i64,
    pub plus: Vec<Derivation>,
    pub minus: Vec<Derivation>,
    pub hat_minus: Vec<Derivation>,
    pub eta: Derivation,
    pub scalars: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SrbResultJson {
    family: Family,
    rank: usize,
    k: i64,
    plus: Vec<Derivation>,
    minus: Vec<Derivation>,
    hat_minus: Vec<Derivation>,
    eta: Derivation,
    #[serde(with = "serde_vec_str")]
    scalars: Vec<Rational>,
}

impl From<SrbResult> for SrbResultJson {
    fn from(r: SrbResult) -> Self {
        SrbResultJson {
            family: r.rs.family(),
            rank: r.rs.rank(),
            k: r.k,
            plus: r.plus,
            minus: r.minus,
            hat_minus: r.hat_minus,
            eta: r.eta,
            scalars: r.scalars,
        }
    }
}

impl TryFrom<SrbResultJson> for SrbResult {
    type Error = Error;

    fn try_from(j: SrbResultJson) -> Result<Self> {
        let rs = build_root_system(j.family, j.rank)?;
        let l = rs.rank();
        let lists = [&j.plus, &j.minus, &j.hat_minus];
        if lists.iter().any(|v| v.len() != l) || j.scalars.len() != l {
            return Err(Error::Parse(format!("expected {l} derivations and scalars per list")));
        }
        let all = lists.iter().flat_map(|v| v.iter()).chain(std::iter::once(&j.eta));
        if let Some(bad) = all.map(Derivation::arity).find(|&a| a != l + 1) {
            return Err(Error::ArityMismatch { left: l + 1, right: bad });
        }
        Ok(SrbResult {
            rs,
            k: j.k,
            plus: j.plus,
            minus: j.minus,
            hat_minus: j.hat_minus,
            eta: j.eta,
            scalars: j.scalars,
        })
    }
}

impl SrbResult {
    pub fn degree(&self) -> u32 {
        srb_degree(&self.rs, self.k)
    }

    /// Text rendering: every derivation as `theta(x_j) = ...` lines.
    pub fn render_text(&self) -> String {
        let mut out = format!("{} k={} degree {}\n", self.rs.name(), self.k, self.degree());
        let mut block = |title: String, d: &Derivation| {
            out.push_str(&title);
            out.push('\n');
            for line in render_factored(d, self.k) {
                out.push_str("  ");
                out.push_str(&line);
                out.push('\n');
            }
        };
        for (i, d) in self.plus.iter().enumerate() {
            block(format!("phi+_{}", i + 1), d);
        }
        for (i, d) in self.minus.iter().enumerate() {
            block(format!("phi-_{}", i + 1), d);
        }
        for (i, d) in self.hat_minus.iter().enumerate() {
            block(format!("hat phi-_{}", i + 1), d);
        }
        block("eta".to_string(), &self.eta);
        let scalars: Vec<String> = self.scalars.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("scalars {}\n", scalars.join(" ")));
        out
    }
}

/// `kh`.
pub fn srb_degree(rs: &RootSystem, k: i64) -> u32 {
    (k as usize * rs.coxeter_number()) as u32
}

fn check_k(k: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    Ok(())
}

fn falsified(statement: &str, detail: String) -> Error {
    Error::TheoremFalsified {
        statement: statement.to_string(),
        detail,
    }
}

/// For each `i`, the generator of `D_0(B^+_{Delta \ {alpha_i}})_{kh}`.
/// Each space must be one-dimensional.
pub fn compute_srb_plus_raw(rs: &RootSystem, k: i64) -> Result<Vec<Derivation>> {
    check_k(k)?;
    let l = rs.rank();
    let d = srb_degree(rs, k);
    (1..=l)
        .into_par_iter()
        .map(|i| {
            let gamma: Vec<usize> = (1..=l).filter(|&j| j != i).collect();
            let target = b_gamma(rs, k, &gamma, Sign::Plus)?;
            let basis = graded_derivations(&target, d, true)?;
            if basis.dimension() != 1 {
                return Err(falsified(
                    "plus-uniqueness",
                    format!("D0 of B+ without alpha_{i} has dimension {} in degree {d}", basis.dimension()),
                ));
            }
            Ok(basis.derivations.into_iter().next().expect("one element"))
        })
        .collect()
}

/// Finds the scalars `c_i` with `sum c_i (alpha_i + k z) raw_i` in
/// `D_0(cone Cat^k)_{kh+1}`, rescales so that the first nonzero coefficient
/// of `phi_1^+` is 1, and returns `(plus, eta, scalars)`.
pub fn normalize_srb_plus(
    rs: &RootSystem,
    k: i64,
    raw: &[Derivation],
) -> Result<(Vec<Derivation>, Derivation, Vec<Rational>)> {
    check_k(k)?;
    let l = rs.rank();
    if raw.len() != l {
        return Err(Error::InvalidParameter(format!("expected {l} raw derivations, got {}", raw.len())));
    }
    let d = srb_degree(rs, k) + 1;
    let n = l + 1;
    let space = DerivationSpace::new(n, d);
    let lifted: Vec<Derivation> = (0..l)
        .map(|i| raw[i].mul_poly(&shifted_simple_form(l, i + 1, k).to_polynomial()))
        .collect::<Result<_>>()?;
    let catalan = cone(&catalan_arrangement(rs, k)?);
    let target = graded_derivations(&catalan, d, true)?;

    // Columns: the lifted derivations, then the Catalan basis.
    let columns: Vec<Vec<Rational>> = lifted
        .iter()
        .chain(&target.derivations)
        .map(|t| space.to_vector(t))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Rational>> = (0..space.dim())
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let matrix = crate::exactalg::RationalMatrix::from_rows(rows)?;
    let solutions = crate::exactalg::kernel(&matrix);
    let projected = rref_rows(solutions.into_iter().map(|mut v| {
        v.truncate(l);
        v
    }).collect());
    if projected.len() != 1 {
        return Err(falsified(
            "normalization-uniqueness",
            format!("scalar system has a {}-dimensional solution space", projected.len()),
        ));
    }
    let mut scalars = projected.into_iter().next().expect("one solution");
    if let Some(i) = scalars.iter().position(Zero::is_zero) {
        return Err(falsified("normalization-nonzero", format!("scalar c_{} vanishes", i + 1)));
    }

    let plus_unscaled: Vec<Derivation> = raw.iter().zip(&scalars).map(|(r, c)| r.scale(c)).collect();
    let lead = first_nonzero_coefficient(&plus_unscaled[0])
        .ok_or_else(|| falsified("normalization-nonzero", "phi_1^+ is zero".into()))?;
    let fix = Rational::one() / lead;
    for c in scalars.iter_mut() {
        *c *= &fix;
    }
    let plus: Vec<Derivation> = plus_unscaled.iter().map(|p| p.scale(&fix)).collect();
    let mut eta = Derivation::zero(n, d);
    for (i, p) in plus.iter().enumerate() {
        eta = eta.add(&p.mul_poly(&shifted_simple_form(l, i + 1, k).to_polynomial())?)?;
    }
    Ok((plus, eta, scalars))
}

/// First nonzero coefficient in slot order, then decreasing monomial order.
pub fn first_nonzero_coefficient(theta: &Derivation) -> Option<Rational> {
    theta
        .coefficients()
        .iter()
        .find_map(|p| p.leading_term().map(|(_, c)| c.clone()))
}

/// `phi_j^- = sum_p gram(j, p) phi_p^+` and the quotients by `alpha_j - k z`.
pub fn compute_srb_minus(rs: &RootSystem, k: i64, plus: &[Derivation]) -> Result<(Vec<Derivation>, Vec<Derivation>)> {
    let l = rs.rank();
    if plus.len() != l {
        return Err(Error::InvalidParameter(format!("expected {l} derivations, got {}", plus.len())));
    }
    let gram = rs.gram_dual();
    let n = l + 1;
    let d = srb_degree(rs, k);
    let mut minus = Vec::with_capacity(l);
    let mut hat = Vec::with_capacity(l);
    for j in 0..l {
        let mut acc = Derivation::zero(n, d);
        for (p, phi) in plus.iter().enumerate() {
            let g = gram.get(j, p);
            if !g.is_zero() {
                acc = acc.add_scaled(phi, g)?;
            }
        }
        let divisor = shifted_simple_form(l, j + 1, -k).to_polynomial();
        let q = acc.divide_exact(&divisor)?.ok_or_else(|| {
            falsified("minus-divisibility", format!("phi_{}^- is not divisible by {divisor}", j + 1))
        })?;
        minus.push(acc);
        hat.push(q);
    }
    Ok((minus, hat))
}

/// Runs raw computation, normalization and the minus construction.
pub fn compute_srb(rs: &RootSystem, k: i64) -> Result<SrbResult> {
    let raw = compute_srb_plus_raw(rs, k)?;
    let (plus, eta, scalars) = normalize_srb_plus(rs, k, &raw)?;
    let (minus, hat_minus) = compute_srb_minus(rs, k, &plus)?;
    Ok(SrbResult {
        rs: rs.clone(),
        k,
        plus,
        minus,
        hat_minus,
        eta,
        scalars,
    })
}

/// Coefficient lines with every polynomial written as a product of the
/// forms `x_i - j z` it is divisible by (for `|j| <= k`) and a cofactor.
pub fn render_factored(theta: &Derivation, k: i64) -> Vec<String> {
    let n = theta.arity();
    let l = n - 1;
    theta
        .coefficients()
        .iter()
        .enumerate()
        .map(|(slot, p)| {
            let name = if slot == l { "z".to_string() } else { format!("x{}", slot + 1) };
            format!("theta({name}) = {}", factor_against_simple_forms(p, l, k))
        })
        .collect()
}

fn factor_against_simple_forms(p: &crate::exactalg::Polynomial, l: usize, k: i64) -> String {
    if p.is_zero() || p.is_constant() {
        return p.display_with(true);
    }
    let mut rest = p.clone();
    let mut factors: Vec<String> = Vec::new();
    for i in 1..=l {
        let shifts = std::iter::once(0).chain((1..=k).flat_map(|j| [j, -j]));
        for j in shifts {
            let f = shifted_simple_form(l, i, -j).to_polynomial();
            while let Ok(Some(q)) = rest.divide_exact(&f) {
                factors.push(wrap(&f.display_with(true)));
                rest = q;
            }
        }
    }
    if factors.is_empty() {
        return p.display_with(true);
    }
    let tail = rest.display_with(true);
    match tail.as_str() {
        "1" => factors.join("*"),
        "-1" => format!("-{}", factors.join("*")),
        _ => format!("{}*{}", wrap(&tail), factors.join("*")),
    }
}

fn wrap(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}
