//! Extended Shi and Catalan arrangements, their cones, the added/deleted
//! arrangements `B_Gamma^+-` and Ziegler multiplicities.
//!
//! The cone sends the affine hyperplane `{alpha = j}` to the central form
//! `alpha - j z`, so `alpha + k z` is the cone of `{alpha = -k}`. The
//! hyperplane at infinity `z = 0` is always the last form of a cone.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, LinearForm, Polynomial, Rational};
use crate::rootsys::RootSystem;

/// Affine hyperplanes `{alpha = level}` for positive roots `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineArrangement {
    rank: usize,
    hyperplanes: Vec<(Vec<i64>, i64)>,
}

impl AffineArrangement {
    pub fn new(rs: &RootSystem, hyperplanes: Vec<(Vec<i64>, i64)>) -> Result<Self> {
        for (i, (root, level)) in hyperplanes.iter().enumerate() {
            if !rs.is_positive_root(root) {
                return Err(Error::InvalidParameter(format!("{root:?} is not a positive root of {}", rs.name())));
            }
            if hyperplanes[..i].iter().any(|(r, l)| r == root && l == level) {
                return Err(Error::InvalidParameter(format!("duplicate hyperplane {root:?} = {level}")));
            }
        }
        Ok(AffineArrangement {
            rank: rs.rank(),
            hyperplanes,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn hyperplanes(&self) -> &[(Vec<i64>, i64)] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// Text table of `(root, level)` pairs.
    pub fn render_table(&self) -> String {
        let mut out = String::from("root\tlevel\tequation\n");
        for (root, level) in &self.hyperplanes {
            let lhs = Polynomial::linear(root).to_string();
            out.push_str(&format!("{root:?}\t{level}\t{lhs} = {level}\n"));
        }
        out
    }
}

fn translates(rs: &RootSystem, lo: i64, hi: i64) -> Vec<(Vec<i64>, i64)> {
    rs.positive_roots()
        .iter()
        .flat_map(|r| (lo..=hi).map(move |j| (r.clone(), j)))
        .collect()
}

/// `Shi^k`: `{alpha = j}` for `alpha` positive and `-k+1 <= j <= k`.
pub fn shi_arrangement(rs: &RootSystem, k: i64) -> Result<AffineArrangement> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("Shi arrangement needs k >= 1, got {k}")));
    }
    Ok(AffineArrangement {
        rank: rs.rank(),
        hyperplanes: translates(rs, 1 - k, k),
    })
}

/// `Cat^k`: `{alpha = j}` for `alpha` positive and `-k <= j <= k`.
pub fn catalan_arrangement(rs: &RootSystem, k: i64) -> Result<AffineArrangement> {
    if k < 0 {
        return Err(Error::InvalidParameter(format!("Catalan arrangement needs k >= 0, got {k}")));
    }
    Ok(AffineArrangement {
        rank: rs.rank(),
        hyperplanes: translates(rs, -k, k),
    })
}

/// The central form `alpha - level * z` in `l + 1` variables.
pub fn cone_form(root: &[i64], level: i64) -> LinearForm {
    let mut c: Vec<i64> = root.to_vec();
    c.push(-level);
    LinearForm::from_ints(&c).expect("root is nonzero")
}

/// The form `z` in `arity` variables.
pub fn infinity_form(arity: usize) -> LinearForm {
    let mut c = vec![0; arity];
    c[arity - 1] = 1;
    LinearForm::from_ints(&c).expect("nonzero")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralArrangement {
    arity: usize,
    forms: Vec<LinearForm>,
}

impl CentralArrangement {
    pub fn new(arity: usize, forms: Vec<LinearForm>) -> Result<Self> {
        for (i, f) in forms.iter().enumerate() {
            if f.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: f.arity(),
                });
            }
            if !f.is_central() {
                return Err(Error::InvalidParameter(format!("form {f} is not central")));
            }
            if forms[..i].iter().any(|g| g.is_proportional(f)) {
                return Err(Error::InvalidParameter(format!("form {f} occurs twice")));
            }
        }
        Ok(CentralArrangement { arity, forms })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn contains(&self, f: &LinearForm) -> bool {
        self.forms.iter().any(|g| g.is_proportional(f))
    }

    pub fn has_infinity(&self) -> bool {
        self.contains(&infinity_form(self.arity))
    }

    pub fn with_form(&self, f: LinearForm) -> Result<Self> {
        let mut forms = self.forms.clone();
        forms.push(f);
        Self::new(self.arity, forms)
    }

    pub fn without_form(&self, f: &LinearForm) -> Result<Self> {
        if !self.contains(f) {
            return Err(Error::InvalidParameter(format!("form {f} is not in the arrangement")));
        }
        Ok(CentralArrangement {
            arity: self.arity,
            forms: self.forms.iter().filter(|g| !g.is_proportional(f)).cloned().collect(),
        })
    }

    /// Product of the defining forms.
    pub fn defining_polynomial(&self) -> Polynomial {
        self.forms
            .iter()
            .fold(Polynomial::one(self.arity), |acc, f| &acc * &f.to_polynomial())
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            rank: self.arity - 1,
            forms: self
                .forms
                .iter()
                .map(|f| f.coefficients().iter().map(rational_json).collect())
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for f in &self.forms {
            out.push_str(&f.display_with(true));
            out.push('\n');
        }
        out
    }
}

fn rational_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Ok(v) = i64::try_from(q.to_integer()) {
            return Value::from(v);
        }
    }
    Value::from(format_rational(q))
}

/// `{"rank": l, "forms": [[c_1, ..., c_l, c_z], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ArrangementJson {
    pub rank: usize,
    pub forms: Vec<Vec<Value>>,
}

/// The cone over an affine arrangement, with `z = 0` appended.
pub fn cone(aff: &AffineArrangement) -> CentralArrangement {
    let arity = aff.rank + 1;
    let mut forms: Vec<LinearForm> = aff
        .hyperplanes
        .iter()
        .map(|(root, level)| cone_form(root, *level))
        .collect();
    forms.push(infinity_form(arity));
    CentralArrangement { arity, forms }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `B_Gamma^+` (cone of Shi^k plus `alpha_i + k z`, `i` in `gamma`) or
/// `B_Gamma^-` (cone of Shi^k minus `alpha_i - k z`). Indices are 1-based.
pub fn b_gamma(rs: &RootSystem, k: i64, gamma: &[usize], sign: Sign) -> Result<CentralArrangement> {
    let base = cone(&shi_arrangement(rs, k)?);
    for (pos, &i) in gamma.iter().enumerate() {
        if i == 0 || i > rs.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: rs.rank(),
            });
        }
        if gamma[..pos].contains(&i) {
            return Err(Error::InvalidParameter(format!("simple index {i} repeated")));
        }
    }
    let mut out = base;
    for &i in gamma {
        let alpha = rs.simple_root(i);
        out = match sign {
            Sign::Plus => out.with_form(cone_form(&alpha, -k))?,
            Sign::Minus => out.without_form(&cone_form(&alpha, k))?,
        };
    }
    Ok(out)
}

/// Cone of Shi^k with `alpha + k z` added.
pub fn added_root(rs: &RootSystem, k: i64, root: &[i64]) -> Result<CentralArrangement> {
    check_root(rs, root)?;
    cone(&shi_arrangement(rs, k)?).with_form(cone_form(root, -k))
}

/// Cone of Shi^k with `alpha - k z` removed.
pub fn deleted_root(rs: &RootSystem, k: i64, root: &[i64]) -> Result<CentralArrangement> {
    check_root(rs, root)?;
    cone(&shi_arrangement(rs, k)?).without_form(&cone_form(root, k))
}

fn check_root(rs: &RootSystem, root: &[i64]) -> Result<()> {
    if root.len() != rs.rank() || !rs.is_positive_root(root) {
        return Err(Error::InvalidParameter(format!("{root:?} is not a positive root of {}", rs.name())));
    }
    Ok(())
}

/// A central arrangement with a multiplicity on each hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiArrangement {
    arity: usize,
    forms: Vec<LinearForm>,
    mult: Vec<u32>,
}

impl MultiArrangement {
    pub fn new(arity: usize, forms: Vec<LinearForm>, mult: Vec<u32>) -> Result<Self> {
        if forms.len() != mult.len() {
            return Err(Error::ArityMismatch {
                left: forms.len(),
                right: mult.len(),
            });
        }
        let base = CentralArrangement::new(arity, forms)?;
        Ok(MultiArrangement {
            arity,
            forms: base.forms,
            mult,
        })
    }

    /// The Coxeter arrangement of `rs` in `l` variables with multiplicity
    /// `m(alpha)` on each positive root.
    pub fn coxeter(rs: &RootSystem, m: impl Fn(&[i64]) -> u32) -> Self {
        let forms = rs
            .positive_roots()
            .iter()
            .map(|r| LinearForm::from_ints(r).expect("nonzero root"))
            .collect();
        let mult = rs.positive_roots().iter().map(|r| m(r)).collect();
        MultiArrangement {
            arity: rs.rank(),
            forms,
            mult,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn multiplicity_of(&self, f: &LinearForm) -> u32 {
        self.forms
            .iter()
            .zip(&self.mult)
            .find(|(g, _)| g.is_proportional(f))
            .map_or(0, |(_, &m)| m)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    pub fn defining_polynomial(&self) -> Polynomial {
        self.forms
            .iter()
            .zip(&self.mult)
            .fold(Polynomial::one(self.arity), |acc, (f, &m)| &acc * &f.to_polynomial().pow(m))
    }
}

impl From<&CentralArrangement> for MultiArrangement {
    fn from(c: &CentralArrangement) -> Self {
        MultiArrangement {
            arity: c.arity,
            forms: c.forms.clone(),
            mult: vec![1; c.forms.len()],
        }
    }
}

/// Ziegler multiplicity on `z = 0`: each remaining form restricts to
/// `z = 0`, and proportional restrictions are counted together.
pub fn ziegler_multiplicity(central: &CentralArrangement) -> Result<MultiArrangement> {
    if !central.has_infinity() {
        return Err(Error::MissingInfinity);
    }
    let l = central.arity - 1;
    let mut forms: Vec<LinearForm> = Vec::new();
    let mut mult: Vec<u32> = Vec::new();
    for f in &central.forms {
        let restricted: Vec<Rational> = f.coefficients()[..l].to_vec();
        if restricted.iter().all(Zero::is_zero) {
            continue;
        }
        let g = LinearForm::central(restricted)?;
        match forms.iter().position(|h| h.is_proportional(&g)) {
            Some(p) => mult[p] += 1,
            None => {
                forms.push(g);
                mult.push(1);
            }
        }
    }
    Ok(MultiArrangement { arity: l, forms, mult })
}

/// `x_i + c z` style helper used in tests and renderings.
pub fn shifted_simple_form(rank: usize, i: usize, shift: i64) -> LinearForm {
    let mut c = vec![rat(0); rank + 1];
    c[i - 1] = Rational::one();
    c[rank] = rat(shift);
    LinearForm::central(c).expect("nonzero")
}
