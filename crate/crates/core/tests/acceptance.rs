//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! The D4 case is slow and only included when `SRBKIT_ACCEPT_D4=1`; the
//! ignored test `acceptance_with_d4` sets it explicitly.

use rayon::prelude::*;

use srbkit::arrangement::{b_gamma, catalan_arrangement, cone, shi_arrangement, shifted_simple_form, Sign};
use srbkit::exactalg::{rat, LinearForm, Polynomial, Rational};
use srbkit::logmod::{graded_derivations, weyl_act, Derivation, FreenessOptions};
use srbkit::rootsys::{build_root_system, Family, RootSystem};
use srbkit::srb::{
    compute_srb, default_gammas, membership_checks, srb_degree, verify_characterization, verify_exponents,
    verify_k_euler, verify_reflections, verify_simplefree, verify_ziegler, CheckStatus, SrbResult,
    VerificationReport,
};

fn cases(with_d4: bool) -> Vec<(Family, usize, i64)> {
    use Family::*;
    let mut v = vec![
        (A, 1, 1),
        (A, 2, 1),
        (A, 3, 1),
        (B, 2, 1),
        (B, 3, 1),
        (C, 3, 1),
        (G, 2, 1),
        (A, 2, 2),
        (B, 2, 2),
        (G, 2, 2),
    ];
    if with_d4 {
        v.push((D, 4, 1));
    }
    v
}

struct Line {
    ok: bool,
    notes: Vec<String>,
}

impl Line {
    fn new() -> Self {
        Line {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        if !ok {
            self.ok = false;
            self.notes.push(note());
        }
    }

    fn report(&self, n: usize, title: &str) -> String {
        let tag = if self.ok { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {n:>2} {tag}: {title}");
        for note in &self.notes {
            s.push_str(&format!("\n    {note}"));
        }
        s
    }
}

fn report_ok(r: &VerificationReport) -> Result<(), String> {
    match r.first_failure() {
        None => Ok(()),
        Some(c) => Err(format!("{} {:?}: {} {:?}", c.id, c.status, c.detail, c.witness)),
    }
}

/// Per-case results for the criteria that range over all cases.
struct CaseOutcome {
    name: String,
    uniqueness: Result<(), String>,
    normalization: Result<(), String>,
    minus: Result<(), String>,
    invariance: Result<(), String>,
    reflections: Result<(), String>,
    exponents: Result<(), String>,
    ziegler: Result<(), String>,
}

fn dims_are_one(rs: &RootSystem, k: i64) -> Result<(), String> {
    let l = rs.rank();
    let d = srb_degree(rs, k);
    for i in 1..=l {
        let others: Vec<usize> = (1..=l).filter(|&j| j != i).collect();
        let plus = b_gamma(rs, k, &others, Sign::Plus).map_err(|e| e.to_string())?;
        let dp = graded_derivations(&plus, d, true).map_err(|e| e.to_string())?.dimension();
        let minus = b_gamma(rs, k, &[i], Sign::Minus).map_err(|e| e.to_string())?;
        let dm = graded_derivations(&minus, d - 1, true).map_err(|e| e.to_string())?.dimension();
        if dp != 1 || dm != 1 {
            return Err(format!("i={i}: plus space dim {dp}, minus space dim {dm}"));
        }
    }
    Ok(())
}

fn normalization_ok(r: &SrbResult) -> Result<(), String> {
    if r.scalars.iter().any(|c| *c == rat(0)) {
        return Err("a normalization scalar vanishes".into());
    }
    let d = srb_degree(&r.rs, r.k) + 1;
    let cat = cone(&catalan_arrangement(&r.rs, r.k).map_err(|e| e.to_string())?);
    let b = graded_derivations(&cat, d, true).map_err(|e| e.to_string())?;
    if b.dimension() != 1 {
        return Err(format!("Catalan D0 piece has dimension {}", b.dimension()));
    }
    if !r.eta.is_member(&cat).map_err(|e| e.to_string())? || !r.eta.kills_last_variable() {
        return Err("eta is not in D0 of the Catalan cone".into());
    }
    Ok(())
}

fn minus_ok(r: &SrbResult) -> Result<(), String> {
    let l = r.rs.rank();
    for j in 0..l {
        let f = shifted_simple_form(l, j + 1, -r.k).to_polynomial();
        let back = r.hat_minus[j].mul_poly(&f).map_err(|e| e.to_string())?;
        if back != r.minus[j] || r.minus[j].divide_exact(&f).map_err(|e| e.to_string())?.is_none() {
            return Err(format!("phi-_{} is not ({f}) times hat phi-_{}", j + 1, j + 1));
        }
    }
    Ok(())
}

fn invariance_ok(r: &SrbResult) -> Result<(), String> {
    for i in 1..=r.rs.rank() {
        if weyl_act(&r.rs, i, &r.eta).map_err(|e| e.to_string())? != r.eta {
            return Err(format!("s_{i}(eta) != eta"));
        }
    }
    Ok(())
}

fn run_case(family: Family, rank: usize, k: i64, options: &FreenessOptions) -> CaseOutcome {
    let name = format!("{family}{rank} k={k}");
    let rs = build_root_system(family, rank).expect("supported");
    let srb = compute_srb(&rs, k);
    let with_srb = |f: &dyn Fn(&SrbResult) -> Result<(), String>| match &srb {
        Ok(r) => f(r),
        Err(e) => Err(e.to_string()),
    };
    CaseOutcome {
        uniqueness: dims_are_one(&rs, k).and_then(|_| with_srb(&|_| Ok(()))),
        normalization: with_srb(&normalization_ok),
        minus: with_srb(&minus_ok),
        invariance: with_srb(&invariance_ok),
        reflections: with_srb(&|r| report_ok(&verify_reflections(r))),
        exponents: report_ok(&verify_exponents(&rs, k, &default_gammas(rank), options)),
        ziegler: report_ok(&verify_ziegler(&rs, k)),
        name,
    }
}

fn criterion_over_cases(line: &mut Line, outcomes: &[CaseOutcome], pick: impl Fn(&CaseOutcome) -> &Result<(), String>) {
    for o in outcomes {
        if let Err(e) = pick(o) {
            line.check(false, || format!("{}: {e}", o.name));
        }
    }
}

fn simplefree_line(options: &FreenessOptions) -> Line {
    let mut line = Line::new();
    let picks = [(Family::A, 2), (Family::B, 2), (Family::G, 2), (Family::A, 3)];
    let reports: Vec<(RootSystem, VerificationReport)> = picks
        .par_iter()
        .map(|&(f, l)| {
            let rs = build_root_system(f, l).unwrap();
            let rep = verify_simplefree(&rs, 1, options);
            (rs, rep)
        })
        .collect();
    for (rs, rep) in &reports {
        let l = rs.rank();
        let free = rep.checks.iter().filter(|c| c.detail.starts_with("Free")).count();
        let not_free = rep.checks.iter().filter(|c| c.detail.starts_with("NotFree")).count();
        line.check(rep.passed() && !rep.has_unknown(), || format!("{}: {:?}", rs.name(), report_ok(rep)));
        line.check(free == 2 * l && not_free == 2 * (rs.num_positive_roots() - l), || {
            format!("{}: {free} Free, {not_free} NotFree", rs.name())
        });
    }
    line
}

fn hand_oracle_line() -> Line {
    let mut line = Line::new();
    let rs = build_root_system(Family::A, 1).unwrap();
    let r = compute_srb(&rs, 1).unwrap();
    let x = Polynomial::var(2, 0);
    let z = Polynomial::var(2, 1);
    let zero = Polynomial::zero(2);
    let q = &x * &(&x - &z);
    let two = rat(2);
    let expect = |c: Polynomial, d: u32| Derivation::new(d, vec![c, zero.clone()]).unwrap();
    line.check(r.plus[0] == expect(q.clone(), 2), || "phi+_1".into());
    line.check(r.minus[0] == expect(q.scale(&two), 2), || "phi-_1".into());
    line.check(r.hat_minus[0] == expect(x.scale(&two), 1), || "hat phi-_1".into());
    line.check(r.eta == expect(&(&x + &z) * &q, 3), || "eta".into());
    line
}

fn negative_controls_line(options: &FreenessOptions) -> Line {
    let mut line = Line::new();
    let rs = build_root_system(Family::A, 2).unwrap();
    let r = compute_srb(&rs, 1).unwrap();
    let has_witnessed_failure = |rep: &VerificationReport| {
        rep.checks
            .iter()
            .any(|c| c.status == CheckStatus::Fail && c.witness.is_some())
    };

    let mut mixed = r.clone();
    mixed.plus[0] = mixed.plus[0].add(&mixed.plus[1]).unwrap();
    line.check(has_witnessed_failure(&verify_characterization(&mixed)), || {
        "mixing phi+_2 into phi+_1 went unnoticed".into()
    });

    let mut perturbed = r.clone();
    let mut coeffs = perturbed.plus[0].coefficients().to_vec();
    let (m, c) = coeffs[0].leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    coeffs[0] = &coeffs[0] + &Polynomial::term(m, c);
    perturbed.plus[0] = Derivation::new(3, coeffs).unwrap();
    line.check(has_witnessed_failure(&verify_characterization(&perturbed)), || {
        "perturbed coefficient went unnoticed by characterization".into()
    });
    line.check(has_witnessed_failure(&verify_reflections(&perturbed)), || {
        "perturbed coefficient went unnoticed by reflections".into()
    });
    let mut eta_off = r.clone();
    eta_off.eta = eta_off.eta.scale(&Rational::new(3.into(), 2.into()));
    line.check(has_witnessed_failure(&verify_k_euler(&eta_off)), || "rescaled eta went unnoticed".into());

    let shi = cone(&shi_arrangement(&rs, 1).unwrap());
    let spurious = shi.with_form(LinearForm::from_ints(&[1, 1, 5]).unwrap()).unwrap();
    let recs = membership_checks("plus-member", &r.plus, &spurious);
    line.check(
        recs.iter().any(|c| c.status == CheckStatus::Fail && c.witness.is_some()),
        || "spurious hyperplane went unnoticed".into(),
    );

    // determinism: byte-identical reports and results on a rerun
    let again = compute_srb(&rs, 1).unwrap();
    line.check(
        serde_json::to_string(&r).unwrap() == serde_json::to_string(&again).unwrap(),
        || "SRB output differs between runs".into(),
    );
    let run = || {
        let reps = [
            verify_characterization(&r),
            verify_k_euler(&r),
            verify_reflections(&r),
            verify_simplefree(&rs, 1, options),
            verify_exponents(&rs, 1, &default_gammas(2), options),
            verify_ziegler(&rs, 1),
        ];
        serde_json::to_string(&reps).unwrap()
    };
    line.check(run() == run(), || "reports differ between runs".into());

    // reparsed JSON verifies identically
    let back: SrbResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    line.check(
        verify_characterization(&back) == verify_characterization(&r),
        || "reparsed result verifies differently".into(),
    );
    line
}

fn run_acceptance(with_d4: bool) {
    let options = FreenessOptions::default();
    let all = cases(with_d4);
    let (outcomes, (line6, (line9, line10))) = rayon::join(
        || {
            all.par_iter()
                .map(|&(f, l, k)| run_case(f, l, k, &options))
                .collect::<Vec<_>>()
        },
        || {
            rayon::join(
                || simplefree_line(&options),
                || rayon::join(hand_oracle_line, || negative_controls_line(&options)),
            )
        },
    );

    let over = |pick: fn(&CaseOutcome) -> &Result<(), String>| {
        let mut line = Line::new();
        criterion_over_cases(&mut line, &outcomes, pick);
        line
    };
    let mut lines: Vec<(usize, &str, Line)> = vec![
        (1, "SRB existence and uniqueness", over(|o| &o.uniqueness)),
        (2, "normalization soundness", over(|o| &o.normalization)),
        (3, "SRB- divisibility", over(|o| &o.minus)),
        (4, "W-invariance of the k-Euler derivation", over(|o| &o.invariance)),
        (5, "reflection identities", over(|o| &o.reflections)),
        (6, "simple-root freeness dichotomy", line6),
        (7, "exponents of B_Gamma and of the multiarrangements", over(|o| &o.exponents)),
        (8, "restriction bijectivity at degree kh", over(|o| &o.ziegler)),
        (9, "A1 hand-oracle regression", line9),
        (10, "negative controls and determinism", line10),
    ];
    lines.sort_by_key(|(n, _, _)| *n);

    let names: Vec<&str> = outcomes.iter().map(|o| o.name.as_str()).collect();
    println!("cases: {}", names.join(", "));
    for (n, title, line) in &lines {
        println!("{}", line.report(*n, title));
    }
    let failed: Vec<usize> = lines.iter().filter(|(_, _, l)| !l.ok).map(|(n, _, _)| *n).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn acceptance() {
    let with_d4 = std::env::var("SRBKIT_ACCEPT_D4").is_ok_and(|v| v == "1");
    run_acceptance(with_d4);
}

#[test]
#[ignore = "D4 takes several minutes; run with --ignored"]
fn acceptance_with_d4() {
    run_acceptance(true);
}
