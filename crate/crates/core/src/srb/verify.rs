//! Check suites over a computed [`SrbResult`] or directly over `(rs, k)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{srb_degree, SrbResult};
use crate::arrangement::{
    added_root, b_gamma, catalan_arrangement, cone, deleted_root, shi_arrangement, shifted_simple_form,
    MultiArrangement, Sign,
};
use crate::error::{Error, Result};
use crate::exactalg::{rref_rows, Polynomial, Rational};
use crate::logmod::{
    decide_freeness, graded_derivations, is_scalar_multiple, weyl_act, ziegler_restrict, Derivation,
    DerivationSpace, FreenessOptions, FreenessStatus, FreenessVerdict, LogTarget,
};
use crate::rootsys::{Family, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    fn pass(id: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            status: CheckStatus::Pass,
            detail: detail.into(),
            witness: None,
        }
    }

    fn fail(id: impl Into<String>, detail: impl Into<String>, witness: Value) -> Self {
        CheckRecord {
            id: id.into(),
            status: CheckStatus::Fail,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    fn from_bool(id: impl Into<String>, ok: bool, detail: impl Into<String>, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(id, detail)
        } else {
            Self::fail(id, detail, witness())
        }
    }

    fn errored(id: impl Into<String>, e: &Error) -> Self {
        Self::fail(id, "computation failed", json!({ "error": e.to_string() }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub family: Family,
    pub rank: usize,
    pub k: i64,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    fn new(suite: Suite, rs: &RootSystem, k: i64) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            family: rs.family(),
            rank: rs.rank(),
            k,
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn has_unknown(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Unknown)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.status != CheckStatus::Pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "suite {} for {}{} k={}: {} passed, {} failed, {} unknown\n",
            self.suite,
            self.family,
            self.rank,
            self.k,
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Fail),
            self.count(CheckStatus::Unknown)
        );
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Unknown => "UNKNOWN",
            };
            out.push_str(&format!("  {tag} {}: {}\n", c.id, c.detail));
            if let Some(w) = &c.witness {
                out.push_str(&format!("    witness {w}\n"));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Characterization,
    Keuler,
    Reflections,
    Simplefree,
    Exponents,
    Ziegler,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Characterization,
        Suite::Keuler,
        Suite::Reflections,
        Suite::Simplefree,
        Suite::Exponents,
        Suite::Ziegler,
    ];

    /// Whether the suite reads an [`SrbResult`].
    pub fn needs_result(self) -> bool {
        matches!(self, Suite::Characterization | Suite::Keuler | Suite::Reflections)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Characterization => "characterization",
            Suite::Keuler => "keuler",
            Suite::Reflections => "reflections",
            Suite::Simplefree => "simplefree",
            Suite::Exponents => "exponents",
            Suite::Ziegler => "ziegler",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Runs one suite. `result` is required for the suites that read it.
pub fn run_suite(
    suite: Suite,
    rs: &RootSystem,
    k: i64,
    result: Option<&SrbResult>,
    options: &FreenessOptions,
) -> Result<VerificationReport> {
    let need = || result.ok_or_else(|| Error::InvalidParameter(format!("suite {suite} needs an SRB result")));
    Ok(match suite {
        Suite::Characterization => verify_characterization(need()?),
        Suite::Keuler => verify_k_euler(need()?),
        Suite::Reflections => verify_reflections(need()?),
        Suite::Simplefree => verify_simplefree(rs, k, options),
        Suite::Exponents => verify_exponents(rs, k, &default_gammas(rs.rank()), options),
        Suite::Ziegler => verify_ziegler(rs, k),
    })
}

/// All subsets for rank 2, otherwise the empty set, `{1}` and everything.
pub fn default_gammas(rank: usize) -> Vec<Vec<usize>> {
    if rank <= 2 {
        (0..1usize << rank)
            .map(|mask| (1..=rank).filter(|i| mask >> (i - 1) & 1 == 1).collect())
            .collect()
    } else {
        vec![vec![], vec![1], (1..=rank).collect()]
    }
}

fn lines(d: &Derivation) -> Value {
    json!(d.render_lines(true))
}

/// One record per derivation: is it in `D(target)`?
pub fn membership_checks<T: LogTarget + ?Sized>(prefix: &str, derivs: &[Derivation], target: &T) -> Vec<CheckRecord> {
    derivs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let id = format!("{prefix}[{}]", i + 1);
            match d.membership_witness(target) {
                Ok(None) => CheckRecord::pass(id, "member"),
                Ok(Some(w)) => CheckRecord::fail(
                    id,
                    "not a member",
                    json!({
                        "derivation": lines(d),
                        "form": w.form.to_string(),
                        "multiplicity": w.multiplicity,
                        "component": w.component,
                        "remainder": w.remainder.to_string(),
                    }),
                ),
                Err(e) => CheckRecord::errored(id, &e),
            }
        })
        .collect()
}

fn residual_record(id: String, detail: &str, lhs: &Derivation, rhs: &Derivation) -> CheckRecord {
    match lhs.sub(rhs) {
        Ok(r) if r.is_zero() => CheckRecord::pass(id, detail),
        Ok(r) => CheckRecord::fail(id, detail, json!({ "residual": lines(&r) })),
        Err(e) => CheckRecord::errored(id, &e),
    }
}

fn spans_record(id: String, basis: &[Derivation], theta: &Derivation, expected_dim: usize) -> CheckRecord {
    let ok = basis.len() == expected_dim && expected_dim == 1 && is_scalar_multiple(theta, &basis[0]).is_some();
    CheckRecord::from_bool(id, ok, format!("space has dimension {}", basis.len()), || {
        json!({ "dimension": basis.len(), "derivation": lines(theta) })
    })
}

fn dimension_record(id: String, got: usize, want: usize, what: &str) -> CheckRecord {
    CheckRecord::from_bool(id, got == want, format!("{what} has dimension {got}, expected {want}"), || {
        json!({ "dimension": got, "expected": want })
    })
}

pub fn verify_characterization(result: &SrbResult) -> VerificationReport {
    let rs = &result.rs;
    let k = result.k;
    let l = rs.rank();
    let d = srb_degree(rs, k);
    let mut report = VerificationReport::new(Suite::Characterization, rs, k);
    let shi = match shi_arrangement(rs, k) {
        Ok(a) => cone(&a),
        Err(e) => {
            report.checks.push(CheckRecord::errored("setup", &e));
            return report;
        }
    };

    report.checks.extend(membership_checks("plus-member", &result.plus, &shi));
    for (i, p) in result.plus.iter().enumerate() {
        report.checks.push(CheckRecord::from_bool(
            format!("plus-kills-z[{}]", i + 1),
            p.kills_last_variable() && p.degree() == d,
            format!("theta(z) = 0 in degree {}", p.degree()),
            || json!({ "derivation": lines(p) }),
        ));
        for j in (1..=l).filter(|&j| j != i + 1) {
            let f = shifted_simple_form(l, j, k);
            let id = format!("plus-divisibility[i={},j={j}]", i + 1);
            let rec = p.apply_form(&f).and_then(|v| v.remainder_mod_linear_power(&f, 1));
            report.checks.push(match rec {
                Ok(r) if r.iter().all(Polynomial::is_zero) => CheckRecord::pass(id, format!("divisible by {f}")),
                Ok(r) => CheckRecord::fail(
                    id,
                    format!("not divisible by {f}"),
                    json!({ "i": i + 1, "j": j, "form": f.to_string(), "remainder": r[0].to_string() }),
                ),
                Err(e) => CheckRecord::errored(id, &e),
            });
        }
    }

    report.checks.extend(membership_checks("minus-member", &result.minus, &shi));
    let gram = rs.gram_dual();
    for j in 0..l {
        let mut expect = Derivation::zero(l + 1, d);
        for (p, phi) in result.plus.iter().enumerate() {
            expect = expect.add_scaled(phi, gram.get(j, p)).unwrap_or(expect);
        }
        report.checks.push(residual_record(
            format!("minus-gram[{}]", j + 1),
            "phi-_j = sum_p gram(j,p) phi+_p",
            &result.minus[j],
            &expect,
        ));
        let f = shifted_simple_form(l, j + 1, -k).to_polynomial();
        let id = format!("minus-divisibility[{}]", j + 1);
        report.checks.push(match result.hat_minus[j].mul_poly(&f) {
            Ok(prod) => residual_record(id, &format!("phi-_j = ({f}) * hat phi-_j"), &result.minus[j], &prod),
            Err(e) => CheckRecord::errored(id, &e),
        });
    }

    let checks: Vec<Vec<CheckRecord>> = (1..=l)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let others: Vec<usize> = (1..=l).filter(|&j| j != i).collect();
            match b_gamma(rs, k, &others, Sign::Plus).and_then(|t| graded_derivations(&t, d, true)) {
                Ok(b) => out.push(spans_record(format!("plus-uniqueness[{i}]"), &b.derivations, &result.plus[i - 1], 1)),
                Err(e) => out.push(CheckRecord::errored(format!("plus-uniqueness[{i}]"), &e)),
            }
            match b_gamma(rs, k, &[i], Sign::Minus).and_then(|t| graded_derivations(&t, d - 1, true)) {
                Ok(b) => out.push(spans_record(
                    format!("minus-uniqueness[{i}]"),
                    &b.derivations,
                    &result.hat_minus[i - 1],
                    1,
                )),
                Err(e) => out.push(CheckRecord::errored(format!("minus-uniqueness[{i}]"), &e)),
            }
            out
        })
        .collect();
    report.checks.extend(checks.into_iter().flatten());
    report
}

pub fn verify_k_euler(result: &SrbResult) -> VerificationReport {
    let rs = &result.rs;
    let k = result.k;
    let l = rs.rank();
    let d = srb_degree(rs, k) + 1;
    let mut report = VerificationReport::new(Suite::Keuler, rs, k);

    let mut sum = Derivation::zero(l + 1, d);
    for (i, p) in result.plus.iter().enumerate() {
        if let Ok(t) = p.mul_poly(&shifted_simple_form(l, i + 1, k).to_polynomial()) {
            sum = sum.add(&t).unwrap_or(sum);
        }
    }
    report
        .checks
        .push(residual_record("eta-sum".into(), "eta = sum (alpha_i + kz) phi+_i", &result.eta, &sum));
    report.checks.push(CheckRecord::from_bool(
        "eta-kills-z",
        result.eta.kills_last_variable() && !result.eta.is_zero(),
        "eta(z) = 0 and eta != 0",
        || json!({ "derivation": lines(&result.eta) }),
    ));

    match catalan_arrangement(rs, k).map(|a| cone(&a)) {
        Ok(cat) => {
            report
                .checks
                .extend(membership_checks("eta-member", std::slice::from_ref(&result.eta), &cat));
            match graded_derivations(&cat, d, true) {
                Ok(b) => report.checks.push(spans_record("eta-spans".into(), &b.derivations, &result.eta, 1)),
                Err(e) => report.checks.push(CheckRecord::errored("eta-spans", &e)),
            }
        }
        Err(e) => report.checks.push(CheckRecord::errored("eta-member", &e)),
    }

    for i in 1..=l {
        let id = format!("eta-invariant[{i}]");
        report.checks.push(match weyl_act(rs, i, &result.eta) {
            Ok(s) => residual_record(id, "s_i(eta) = eta", &s, &result.eta),
            Err(e) => CheckRecord::errored(id, &e),
        });
    }

    // k = 0: the Catalan cone is the Coxeter cone plus z, and D_0 in degree
    // 1 should be spanned by sum x_i d/dx_i.
    let mut euler_x: Vec<Polynomial> = (0..l).map(|i| Polynomial::var(l + 1, i)).collect();
    euler_x.push(Polynomial::zero(l + 1));
    let euler_x = Derivation::new(1, euler_x).expect("homogeneous");
    match catalan_arrangement(rs, 0).and_then(|a| graded_derivations(&cone(&a), 1, true)) {
        Ok(b) => report.checks.push(spans_record("zero-euler".into(), &b.derivations, &euler_x, 1)),
        Err(e) => report.checks.push(CheckRecord::errored("zero-euler", &e)),
    }
    report
}

pub fn verify_reflections(result: &SrbResult) -> VerificationReport {
    let rs = &result.rs;
    let k = result.k;
    let l = rs.rank();
    let mut report = VerificationReport::new(Suite::Reflections, rs, k);
    let cartan = rs.cartan();
    let records: Vec<Vec<CheckRecord>> = (1..=l)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in (1..=l).filter(|&j| j != i) {
                let id = format!("plus-invariant[i={i},j={j}]");
                out.push(match weyl_act(rs, i, &result.plus[j - 1]) {
                    Ok(s) => residual_record(id, "s_i(phi+_j) = phi+_j", &s, &result.plus[j - 1]),
                    Err(e) => CheckRecord::errored(id, &e),
                });
            }
            let id = format!("hat-minus-invariant[{i}]");
            out.push(match weyl_act(rs, i, &result.hat_minus[i - 1]) {
                Ok(s) => residual_record(id, "s_i(hat phi-_i) = hat phi-_i", &s, &result.hat_minus[i - 1]),
                Err(e) => CheckRecord::errored(id, &e),
            });
            let id = format!("reflection-identity[{i}]");
            out.push(match reflection_identity_sides(rs, k, i, cartan, &result.plus) {
                Ok((lhs, rhs)) => residual_record(
                    id,
                    "(-alpha_i + kz) s_i(phi+_i) = (alpha_i + kz) phi+_i + alpha_i sum_j c_ij phi+_j",
                    &lhs,
                    &rhs,
                ),
                Err(e) => CheckRecord::errored(id, &e),
            });
            out
        })
        .collect();
    report.checks.extend(records.into_iter().flatten());
    report
}

fn reflection_identity_sides(
    rs: &RootSystem,
    k: i64,
    i: usize,
    cartan: &[Vec<i64>],
    plus: &[Derivation],
) -> Result<(Derivation, Derivation)> {
    let l = rs.rank();
    let n = l + 1;
    let phi = &plus[i - 1];
    let mut neg = vec![0i64; n];
    neg[i - 1] = -1;
    neg[l] = k;
    let lhs = weyl_act(rs, i, phi)?.mul_poly(&Polynomial::linear(&neg))?;
    let mut rhs = phi.mul_poly(&shifted_simple_form(l, i, k).to_polynomial())?;
    let mut tail = Derivation::zero(n, phi.degree());
    for j in (1..=l).filter(|&j| j != i) {
        let c = cartan[i - 1][j - 1];
        if c != 0 {
            tail = tail.add_scaled(&plus[j - 1], &Rational::from_integer(c.into()))?;
        }
    }
    rhs = rhs.add(&tail.mul_poly(&Polynomial::var(n, i - 1))?)?;
    Ok((lhs, rhs))
}

fn verdict_record(id: String, verdict: Result<FreenessVerdict>, expect_free: bool) -> CheckRecord {
    match verdict {
        Ok(v) => {
            let detail = match v.status {
                FreenessStatus::Free => format!("Free with exponents {:?}", v.exponents),
                FreenessStatus::NotFree => format!("NotFree, certificate degree {}", v.certificate_degree.unwrap_or(0)),
                FreenessStatus::Unknown => "Unknown".to_string(),
            };
            let witness = || json!({ "status": v.status, "dimensions": v.dimensions, "certificate": v.certificate });
            match (v.status, expect_free) {
                (FreenessStatus::Free, true) | (FreenessStatus::NotFree, false) => CheckRecord::pass(id, detail),
                (FreenessStatus::Unknown, _) => CheckRecord {
                    id,
                    status: CheckStatus::Unknown,
                    detail,
                    witness: Some(witness()),
                },
                _ => CheckRecord::fail(id, detail, witness()),
            }
        }
        Err(e) => CheckRecord::errored(id, &e),
    }
}

fn root_label(root: &[i64]) -> String {
    root.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Adding `alpha + kz` or deleting `alpha - kz` keeps freeness exactly when
/// `alpha` is simple.
pub fn verify_simplefree(rs: &RootSystem, k: i64, options: &FreenessOptions) -> VerificationReport {
    let mut report = VerificationReport::new(Suite::Simplefree, rs, k);
    let l = rs.rank();
    let kh = srb_degree(rs, k);
    let hyp = |top: u32| {
        let mut e = vec![1, top];
        e.extend(std::iter::repeat(kh).take(l - 1));
        e
    };
    let records: Vec<Vec<CheckRecord>> = rs
        .positive_roots()
        .par_iter()
        .map(|root| {
            let simple = rs.is_simple(root);
            let label = root_label(root);
            let added = added_root(rs, k, root).and_then(|a| decide_freeness(&a, &hyp(kh + 1), options));
            let deleted = deleted_root(rs, k, root).and_then(|a| decide_freeness(&a, &hyp(kh - 1), options));
            vec![
                verdict_record(format!("added[{label}]"), added, simple),
                verdict_record(format!("deleted[{label}]"), deleted, simple),
            ]
        })
        .collect();
    report.checks.extend(records.into_iter().flatten());
    report
}

fn gamma_label(gamma: &[usize]) -> String {
    format!("{{{}}}", gamma.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

/// Freeness of `B_Gamma^+-` and of the multiarrangements `2k +- chi_Gamma`
/// with the expected exponents.
pub fn verify_exponents(
    rs: &RootSystem,
    k: i64,
    gammas: &[Vec<usize>],
    options: &FreenessOptions,
) -> VerificationReport {
    let mut report = VerificationReport::new(Suite::Exponents, rs, k);
    let l = rs.rank();
    let kh = srb_degree(rs, k);
    let records: Vec<Vec<CheckRecord>> = gammas
        .par_iter()
        .map(|gamma| {
            let label = gamma_label(gamma);
            let mut out = Vec::new();
            for (sign, top) in [(Sign::Plus, kh + 1), (Sign::Minus, kh - 1)] {
                let mut exp0: Vec<u32> = vec![top; gamma.len()];
                exp0.extend(std::iter::repeat(kh).take(l - gamma.len()));
                let mut with_euler = vec![1];
                with_euler.extend(&exp0);
                let v = b_gamma(rs, k, gamma, sign).and_then(|a| decide_freeness(&a, &with_euler, options));
                out.push(verdict_record(format!("b-gamma{sign}[{label}]"), v, true));

                let shift: i64 = if sign == Sign::Plus { 1 } else { -1 };
                let multi = MultiArrangement::coxeter(rs, |root| {
                    let chi = rs.simple_index(root).is_some_and(|i| gamma.contains(&i));
                    (2 * k + if chi { shift } else { 0 }) as u32
                });
                let v = decide_freeness(&multi, &exp0, options);
                out.push(verdict_record(format!("multi{sign}[{label}]"), v, true));
            }
            out
        })
        .collect();
    report.checks.extend(records.into_iter().flatten());
    report
}

/// Setting `z = 0` maps `D_0(cone Shi^k)_{kh}` isomorphically onto
/// `D(A(Phi), 2k)_{kh}`.
pub fn verify_ziegler(rs: &RootSystem, k: i64) -> VerificationReport {
    let mut report = VerificationReport::new(Suite::Ziegler, rs, k);
    let l = rs.rank();
    let d = srb_degree(rs, k);
    let shi = match shi_arrangement(rs, k) {
        Ok(a) => cone(&a),
        Err(e) => {
            report.checks.push(CheckRecord::errored("setup", &e));
            return report;
        }
    };
    let multi = MultiArrangement::coxeter(rs, |_| 2 * k as u32);
    let (upper, lower) = rayon::join(|| graded_derivations(&shi, d, true), || graded_derivations(&multi, d, false));
    let (upper, lower) = match (upper, lower) {
        (Ok(u), Ok(w)) => (u, w),
        (Err(e), _) | (_, Err(e)) => {
            report.checks.push(CheckRecord::errored("setup", &e));
            return report;
        }
    };
    report
        .checks
        .push(dimension_record("cone-dimension".into(), upper.dimension(), l, "D0 of the Shi cone"));
    report
        .checks
        .push(dimension_record("multi-dimension".into(), lower.dimension(), l, "D of the Coxeter multiarrangement"));

    let restricted: Result<Vec<Derivation>> = upper.derivations.iter().map(ziegler_restrict).collect();
    match restricted {
        Ok(restricted) => {
            report.checks.extend(membership_checks("restriction-member", &restricted, &multi));
            let space = DerivationSpace::new(l, d);
            let vectors: Result<Vec<Vec<Rational>>> = restricted.iter().map(|t| space.to_vector(t)).collect();
            let rank = vectors.map(|v| rref_rows(v).len());
            report.checks.push(match rank {
                Ok(r) => CheckRecord::from_bool(
                    "restriction-injective",
                    r == upper.dimension(),
                    format!("restriction has rank {r} on a space of dimension {}", upper.dimension()),
                    || json!({ "rank": r, "dimension": upper.dimension() }),
                ),
                Err(e) => CheckRecord::errored("restriction-injective", &e),
            });
        }
        Err(e) => report.checks.push(CheckRecord::errored("restriction-member", &e)),
    }
    report
}
