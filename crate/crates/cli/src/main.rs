use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use srbkit::arrangement::{
    added_root, b_gamma, catalan_arrangement, cone, deleted_root, shi_arrangement, AffineArrangement,
    CentralArrangement, Sign,
};
use srbkit::logmod::{decide_freeness, FreenessOptions, FreenessStatus, DEFAULT_SEED};
use srbkit::rootsys::{build_root_system, Family, RootSystem};
use srbkit::srb::{compute_srb, run_suite, CheckStatus, SrbResult, Suite};
use srbkit::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_FALSIFIED: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "srbkit", version, about = "Simple-root bases of extended Shi arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a root system.
    Roots(Common),
    /// Print an arrangement.
    Arr(ArrArgs),
    /// Compute SRB+ and SRB-.
    Srb(KArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Decide freeness of a Shi cone or one of its edits.
    Freeness(FreenessArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    family: String,
    #[arg(long)]
    rank: usize,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized basis search.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct KArgs {
    #[command(flatten)]
    common: Common,
    #[arg(short = 'k', default_value_t = 1)]
    k: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Shi,
    Catalan,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

/// Edits of the Shi cone. At most one of them applies.
#[derive(Args, Debug)]
struct Edit {
    /// Add `alpha + k z`; simple-root coordinates, comma separated.
    #[arg(long, value_name = "COORDS", conflicts_with_all = ["delete_root", "gamma"])]
    add_root: Option<String>,
    /// Remove `alpha - k z`.
    #[arg(long, value_name = "COORDS", conflicts_with = "gamma")]
    delete_root: Option<String>,
    /// Simple-root indices (1-based, comma separated) for B_Gamma; may be empty.
    #[arg(long, value_name = "INDICES", requires = "sign", allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
}

#[derive(Args, Debug)]
struct ArrArgs {
    #[command(flatten)]
    base: KArgs,
    #[arg(long, value_enum, default_value_t = Kind::Shi)]
    kind: Kind,
    /// Print the cone instead of the affine arrangement.
    #[arg(long)]
    cone: bool,
    #[command(flatten)]
    edit: Edit,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    base: KArgs,
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Verify a previously written SRB JSON file instead of recomputing.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FreenessArgs {
    #[command(flatten)]
    base: KArgs,
    #[command(flatten)]
    edit: Edit,
    /// Hypothesized exponents, comma separated; defaults follow the edit.
    #[arg(long)]
    exponents: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TheoremFalsified { .. } => EXIT_FALSIFIED,
            Error::Unsupported { .. }
            | Error::InvalidParameter(_)
            | Error::IndexOutOfRange { .. }
            | Error::Parse(_)
            | Error::DegreeSumMismatch { .. }
            | Error::ArityMismatch { .. } => EXIT_USAGE,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Roots(c) => cmd_roots(c),
        Command::Arr(a) => cmd_arr(a),
        Command::Srb(a) => cmd_srb(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Freeness(a) => cmd_freeness(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn root_system(c: &Common) -> Result<RootSystem, Failure> {
    let family: Family = c.family.parse().map_err(|_| Error::Unsupported {
        family: c.family.clone(),
        rank: c.rank,
    })?;
    Ok(build_root_system(family, c.rank)?)
}

fn check_k(k: i64) -> Result<(), Failure> {
    if k < 1 {
        return Err(Failure::usage(format!("k must be at least 1, got {k}")));
    }
    Ok(())
}

fn emit(c: &Common, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: 1,
        message: e.to_string(),
    };
    match &c.out {
        Some(path) => fs::write(path, text).map_err(io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::usage(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn freeness_options(seed: Option<u64>) -> Result<FreenessOptions, Failure> {
    let max_degree = match std::env::var("SRBKIT_MAX_DEGREE") {
        Ok(v) => Some(
            v.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("SRBKIT_MAX_DEGREE is not a degree: {v:?}")))?,
        ),
        Err(_) => None,
    };
    Ok(FreenessOptions {
        max_degree,
        seed: seed.unwrap_or(DEFAULT_SEED),
        ..FreenessOptions::default()
    })
}

fn cmd_roots(c: &Common) -> CmdResult {
    let rs = root_system(c)?;
    let out = if c.json { to_json(&rs.to_json()) } else { rs.render_text() };
    emit(c, &out)?;
    Ok(0)
}

enum EditKind {
    None,
    Add(Vec<i64>),
    Delete(Vec<i64>),
    Gamma(Vec<usize>, Sign),
}

impl Edit {
    fn resolve(&self) -> Result<EditKind, Failure> {
        if let Some(r) = &self.add_root {
            return Ok(EditKind::Add(parse_list(r, "root coordinate")?));
        }
        if let Some(r) = &self.delete_root {
            return Ok(EditKind::Delete(parse_list(r, "root coordinate")?));
        }
        if let Some(g) = &self.gamma {
            let sign = self.sign.ok_or_else(|| Failure::usage("--gamma needs --sign"))?;
            return Ok(EditKind::Gamma(parse_list(g, "simple-root index")?, sign.into()));
        }
        if self.sign.is_some() {
            return Err(Failure::usage("--sign needs --gamma"));
        }
        Ok(EditKind::None)
    }
}

fn edited_cone(rs: &RootSystem, k: i64, edit: &EditKind) -> Result<CentralArrangement, Failure> {
    Ok(match edit {
        EditKind::None => cone(&shi_arrangement(rs, k)?),
        EditKind::Add(r) => added_root(rs, k, r)?,
        EditKind::Delete(r) => deleted_root(rs, k, r)?,
        EditKind::Gamma(g, s) => b_gamma(rs, k, g, *s)?,
    })
}

fn affine_json(a: &AffineArrangement) -> serde_json::Value {
    let hyperplanes: Vec<_> = a
        .hyperplanes()
        .iter()
        .map(|(root, level)| json!({ "root": root, "level": level }))
        .collect();
    json!({ "rank": a.rank(), "hyperplanes": hyperplanes })
}

fn cmd_arr(a: &ArrArgs) -> CmdResult {
    let c = &a.base.common;
    let k = a.base.k;
    let rs = root_system(c)?;
    let edit = a.edit.resolve()?;
    let out = match (a.kind, &edit) {
        (Kind::Catalan, EditKind::None) => {
            let aff = catalan_arrangement(&rs, k)?;
            render_arrangement(c.json, a.cone, &aff)
        }
        (Kind::Catalan, _) => return Err(Failure::usage("edits apply to the Shi cone only")),
        (Kind::Shi, EditKind::None) => {
            check_k(k)?;
            let aff = shi_arrangement(&rs, k)?;
            render_arrangement(c.json, a.cone, &aff)
        }
        (Kind::Shi, e) => {
            check_k(k)?;
            let central = edited_cone(&rs, k, e)?;
            if c.json {
                to_json(&central.to_json())
            } else {
                central.render_text()
            }
        }
    };
    emit(c, &out)?;
    Ok(0)
}

fn render_arrangement(json: bool, as_cone: bool, aff: &AffineArrangement) -> String {
    match (as_cone, json) {
        (true, true) => to_json(&cone(aff).to_json()),
        (true, false) => cone(aff).render_text(),
        (false, true) => to_json(&affine_json(aff)),
        (false, false) => aff.render_table(),
    }
}

fn cmd_srb(a: &KArgs) -> CmdResult {
    let c = &a.common;
    check_k(a.k)?;
    let rs = root_system(c)?;
    eprintln!("[srb] {} k={}: degree {}", rs.name(), a.k, srbkit::srb::srb_degree(&rs, a.k));
    let result = compute_srb(&rs, a.k)?;
    let out = if c.json { to_json(&result) } else { result.render_text() };
    emit(c, &out)?;
    Ok(0)
}

fn parse_suites(s: &str) -> Result<Vec<Suite>, Failure> {
    if s.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut suites: Vec<Suite> = Vec::new();
    for name in s.split(',').map(str::trim) {
        let suite: Suite = name.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
        if !suites.contains(&suite) {
            suites.push(suite);
        }
    }
    Ok(suites)
}

fn load_result(path: &PathBuf, rs: &RootSystem, k: i64) -> Result<SrbResult, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let r: SrbResult =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if r.rs.family() != rs.family() || r.rs.rank() != rs.rank() || r.k != k {
        return Err(Failure::usage(format!(
            "{} holds {} k={}, not {} k={k}",
            path.display(),
            r.rs.name(),
            r.k,
            rs.name()
        )));
    }
    Ok(r)
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let c = &a.base.common;
    let k = a.base.k;
    let suites = parse_suites(&a.suite)?;
    check_k(k)?;
    let rs = root_system(c)?;
    let options = freeness_options(c.seed)?;

    let result = if suites.iter().any(|s| s.needs_result()) {
        Some(match &a.input {
            Some(path) => load_result(path, &rs, k)?,
            None => {
                eprintln!("[verify] computing SRB for {} k={k}", rs.name());
                compute_srb(&rs, k)?
            }
        })
    } else {
        None
    };

    let mut reports = Vec::new();
    for suite in suites {
        eprintln!("[verify] suite {suite}");
        let report = run_suite(suite, &rs, k, result.as_ref(), &options)?;
        for check in &report.checks {
            eprintln!("[verify]   {} {:?}", check.id, check.status);
        }
        reports.push(report);
    }

    let out = if c.json {
        to_json(&reports)
    } else {
        reports.iter().map(|r| r.render_text()).collect::<Vec<_>>().join("")
    };
    emit(c, &out)?;

    let failed = reports
        .iter()
        .flat_map(|r| r.checks.iter().map(move |ch| (r, ch)))
        .find(|(_, ch)| ch.status == CheckStatus::Fail);
    if let Some((r, ch)) = failed {
        eprintln!("[verify] FAIL {}/{}: {}", r.suite, ch.id, ch.detail);
        if let Some(w) = &ch.witness {
            eprintln!("[verify] witness {w}");
        }
        return Ok(EXIT_FALSIFIED);
    }
    if reports.iter().any(|r| r.has_unknown()) {
        eprintln!("[verify] some freeness verdicts are Unknown");
        return Ok(EXIT_UNKNOWN);
    }
    Ok(0)
}

/// Hypothesized exponents: the Euler exponent 1 followed by `exp_0`.
fn default_exponents(rs: &RootSystem, k: i64, edit: &EditKind) -> Vec<u32> {
    let l = rs.rank();
    let kh = (k as u32) * rs.coxeter_number() as u32;
    let mut e = vec![1];
    match edit {
        EditKind::None => e.extend(std::iter::repeat_n(kh, l)),
        EditKind::Add(_) => {
            e.push(kh + 1);
            e.extend(std::iter::repeat_n(kh, l - 1));
        }
        EditKind::Delete(_) => {
            e.push(kh - 1);
            e.extend(std::iter::repeat_n(kh, l - 1));
        }
        EditKind::Gamma(g, s) => {
            let shifted = match s {
                Sign::Plus => kh + 1,
                Sign::Minus => kh - 1,
            };
            e.extend(std::iter::repeat_n(shifted, g.len()));
            e.extend(std::iter::repeat_n(kh, l.saturating_sub(g.len())));
        }
    }
    e.sort_unstable();
    e
}

fn cmd_freeness(a: &FreenessArgs) -> CmdResult {
    let c = &a.base.common;
    let k = a.base.k;
    check_k(k)?;
    let rs = root_system(c)?;
    let edit = a.edit.resolve()?;
    let target = edited_cone(&rs, k, &edit)?;
    let hypothesized = match &a.exponents {
        Some(s) => parse_list(s, "exponent")?,
        None => default_exponents(&rs, k, &edit),
    };
    let options = freeness_options(c.seed)?;
    eprintln!(
        "[freeness] {} k={k}: {} hyperplanes, hypothesized exponents {hypothesized:?}",
        rs.name(),
        target.len()
    );
    let verdict = decide_freeness(&target, &hypothesized, &options)?;
    emit(c, &to_json(&verdict))?;
    Ok(match verdict.status {
        FreenessStatus::Unknown => EXIT_UNKNOWN,
        _ => 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_lists() {
        assert_eq!(parse_suites("all").ok().unwrap(), Suite::ALL.to_vec());
        assert_eq!(
            parse_suites("keuler, ziegler,keuler").ok().unwrap(),
            vec![Suite::Keuler, Suite::Ziegler]
        );
        assert_eq!(parse_suites("bogus").err().unwrap().code, EXIT_USAGE);
    }

    #[test]
    fn hypothesized_exponents() {
        let rs = build_root_system(Family::B, 2).unwrap();
        assert_eq!(default_exponents(&rs, 1, &EditKind::None), vec![1, 4, 4]);
        assert_eq!(default_exponents(&rs, 1, &EditKind::Add(vec![1, 1])), vec![1, 4, 5]);
        assert_eq!(default_exponents(&rs, 2, &EditKind::Delete(vec![1, 0])), vec![1, 7, 8]);
        let gamma = EditKind::Gamma(vec![1, 2], Sign::Minus);
        assert_eq!(default_exponents(&rs, 1, &gamma), vec![1, 3, 3]);
    }

    #[test]
    fn lists_and_exit_codes() {
        assert_eq!(parse_list::<i64>("1, -2,", "x").ok().unwrap(), vec![1, -2]);
        assert!(parse_list::<usize>("a", "x").is_err());
        let f: Failure = Error::TheoremFalsified {
            statement: "s".into(),
            detail: "d".into(),
        }
        .into();
        assert_eq!(f.code, EXIT_FALSIFIED);
        let f: Failure = Error::Unsupported {
            family: "E".into(),
            rank: 6,
        }
        .into();
        assert_eq!(f.code, EXIT_USAGE);
    }
}
