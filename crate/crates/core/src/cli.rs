//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coord::{einstein_rows, induced_consistency, write_residual_csv, AmbientMetric};
use crate::error::Error;
use crate::family::{
    build_delta, build_embedding, build_lie_algebra, build_metric_lie_algebra, expected_ad_h_sym,
    expected_closed_forms, expected_killing_operator, expected_mean_curvature,
    expected_normality_commutator, expected_ric_matrix, predicted_soliton, predicted_status,
    soliton_verdicts, splitting, FamilyBasis, FamilyDerivations, FamilyParams,
};
use crate::hypersurface::{family_hypersurface_ricci, shape_operator, trace_identity_check};
use crate::linalg::Matrix;
use crate::metric::SolitonVerdict;
use crate::scalar::{Field, Rational, Surd};

type Q = Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest `n` accepted by the Einstein check.
pub const EINSTEIN_MAX_N: usize = 4;
const DEFAULT_MAX_N: usize = 8;
const EINSTEIN_SEED: u64 = 20_240_917;

#[derive(Parser, Debug)]
#[command(name = "solvsoliton", version, about = "Ricci soliton and curvature checks for the one-loop deformed family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every consistency check and compare with the predicted status.
    Verify(PointArgs),
    /// Ricci endomorphism by three independent routes.
    Ricci(PointArgs),
    /// Direct and four-condition soliton verdicts.
    Soliton(PointArgs),
    /// Shape operator eigenvalues and principal Ricci curvatures.
    Spectrum(PointArgs),
    /// Tabulate curvatures and verdicts over a parameter grid.
    Sweep(SweepArgs),
    /// Floating-point Einstein residual of the ambient metric.
    Einstein(PointArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[arg(long)]
    pub n: usize,
    /// Rational, e.g. `5/2`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub rho: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub c: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    pub rho: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    pub c: Vec<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Failure modes of a command, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) | Error::Parse(m) => CliError::Usage(m),
            other => CliError::Internal(other),
        }
    }
}

/// A rendered report and whether all of its checks passed.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    pub passed: bool,
}

impl Report {
    fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Text => Ok(self.text.clone()),
            Format::Json => Ok(canonical_json(&self.json) + "\n"),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::Usage("csv output is only available for sweep and einstein".into())),
        }
    }
}

/// Pretty-printed JSON with keys in sorted order.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is a BTreeMap, so keys serialize sorted
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

/// Decimal rendering with 12 significant digits.
pub fn approx(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn max_exact_n() -> usize {
    std::env::var("SOLV_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn parse_rational(name: &str, s: &str) -> Result<Q, CliError> {
    s.parse::<Q>()
        .map_err(|_| CliError::Usage(format!("--{name}: {s:?} is not a rational number")))
}

fn parse_params(n: usize, rho: &str, c: &str, max_n: usize) -> Result<FamilyParams<Q>, CliError> {
    if n > max_n {
        return Err(CliError::Usage(format!(
            "n = {n} exceeds the limit {max_n} (set SOLV_MAX_N to raise it)"
        )));
    }
    Ok(FamilyParams::new(n, parse_rational("rho", rho)?, parse_rational("c", c)?)?)
}

fn to_json<S: serde::Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn params_json(p: &FamilyParams<Q>) -> Value {
    json!({"n": p.n, "rho": p.rho.to_string(), "c": p.c.to_string()})
}

fn surd_json(s: &Surd<Q>) -> Value {
    json!({"exact": s.to_string(), "approx": approx(s.to_f64())})
}

fn matrix_text(m: &Matrix<Q>) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            format!("  [{}]", padded.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Writes `k` if `m = k·δ`.
fn delta_multiple(m: &Matrix<Q>, n: usize) -> Option<Q> {
    let delta: Matrix<Q> = build_delta(n);
    let k = m[(delta.rows() - 1, delta.cols() - 1)].clone() / Q::from_i64(2);
    (delta.scale(&k) == *m).then_some(k)
}

struct Check {
    name: &'static str,
    passed: bool,
}

fn check(name: &'static str, passed: bool) -> Check {
    Check { name, passed }
}

fn verdict_summary(v: &SolitonVerdict<Q>, n: usize) -> Value {
    let mut out = json!({
        "status": v.kind.as_str(),
        "lambda": v.lambda.as_ref().map(|l| l.to_string()),
    });
    if let Some(d) = &v.derivation {
        out["derivation"] = to_json(d);
        out["derivation_delta_multiple"] = to_json(&delta_multiple(d, n).map(|k| k.to_string()));
    }
    out
}

pub fn cmd_verify(p: &FamilyParams<Q>, derivations: &FamilyDerivations<Q>) -> Result<Report, CliError> {
    let n = p.n;
    let lie = build_lie_algebra::<Q>(n)?;
    let m = build_metric_lie_algebra(p)?;
    let s = splitting(n);
    let conn = m.connection_coeffs();
    let ric = m.ricci_endomorphism_koszul();
    let expected_ric = expected_ric_matrix(p);
    let embedding = build_embedding(p)?;
    let coord_ric = embedding.to_family_basis(&family_hypersurface_ricci(p)?)?;
    let (direct, lauret) = soliton_verdicts(p, derivations)?;
    let predicted = predicted_status(p);

    let mut checks = vec![
        check("jacobi", lie.check_jacobi().holds),
        check("splitting", lie.verify_splitting(&s, m.gram())?.all_hold()),
        check("torsion_free_metric_connection", m.verify_connection(&conn)),
        check("ricci_koszul_equals_closed_form", ric == expected_ric),
        check("ricci_closed_form_equals_hypersurface", expected_ric == coord_ric),
        check("ricci_self_adjoint", m.gram().try_mul(&ric)?.is_symmetric()),
        check("trace_identity", trace_identity_check(p)?),
        check("soliton_checkers_agree", direct.kind == lauret.kind),
        check("status_matches_prediction", direct.kind == predicted),
    ];
    if n > 1 {
        let terms = m.lauret_terms(&s, &ric)?;
        checks.push(check(
            "lauret_terms_match_closed_forms",
            terms.mean_curvature == expected_mean_curvature(p)
                && terms.b_op == expected_killing_operator(p)
                && terms.ad_h_sym == expected_ad_h_sym(p),
        ));
    }
    match predicted_soliton(p) {
        Some((lambda, d)) => checks.push(check(
            "lambda_and_derivation_match_prediction",
            direct.lambda.as_ref() == Some(&lambda) && direct.derivation.as_ref() == Some(&d),
        )),
        None => checks.push(check(
            "normality_witness_matches_closed_form",
            lauret.checklist.as_ref().is_some_and(|c| !c.ad_normal)
                && lauret.witness.as_ref() == Some(&expected_normality_commutator(p)),
        )),
    }
    let passed = checks.iter().all(|c| c.passed);

    let mut text = String::new();
    let status = direct.kind.as_str();
    writeln!(text, "family n = {n}, rho = {}, c = {}", p.rho, p.c).ok();
    for c in &checks {
        writeln!(text, "  {:<40} {}", c.name, if c.passed { "pass" } else { "FAIL" }).ok();
    }
    writeln!(text, "status: {status} (predicted {})", predicted.as_str()).ok();
    if let Some(l) = &direct.lambda {
        writeln!(text, "lambda: {l}").ok();
    }
    if let Some(d) = &direct.derivation {
        match delta_multiple(d, n) {
            Some(k) => writeln!(text, "D = {k}·delta").ok(),
            None => writeln!(text, "D =\n{}", matrix_text(d)).ok(),
        };
    }
    if let Some(c) = &lauret.checklist {
        writeln!(
            text,
            "lauret checklist: nilsoliton={} a_abelian={} ad_normal={} norm_condition={}",
            c.nilsoliton, c.a_abelian, c.ad_normal, c.norm_condition
        )
        .ok();
    }
    if let Some(w) = &lauret.witness {
        writeln!(text, "witness [ad B1R, (ad B1R)*] =\n{}", matrix_text(w)).ok();
    }
    writeln!(text, "result: {}", if passed { "all checks pass" } else { "CHECK FAILED" }).ok();

    let json = json!({
        "command": "verify",
        "params": params_json(p),
        "checks": checks.iter().map(|c| (c.name.to_string(), Value::Bool(c.passed))).collect::<serde_json::Map<_, _>>(),
        "predicted_status": predicted.as_str(),
        "direct": verdict_summary(&direct, n),
        "lauret": to_json(&lauret),
        "passed": passed,
    });
    Ok(Report {
        text,
        json,
        csv: None,
        passed,
    })
}

pub fn cmd_ricci(p: &FamilyParams<Q>) -> Result<Report, CliError> {
    let m = build_metric_lie_algebra(p)?;
    let koszul = m.ricci_endomorphism_koszul();
    let closed = expected_ric_matrix(p);
    let coord = family_hypersurface_ricci(p)?;
    let hyper = build_embedding(p)?.to_family_basis(&coord)?;
    let passed = koszul == closed && closed == hyper;
    let labels = FamilyBasis::new(p.n).labels();
    let mut text = String::new();
    writeln!(text, "family n = {}, rho = {}, c = {}", p.n, p.rho, p.c).ok();
    writeln!(text, "basis: {}", labels.join(" ")).ok();
    writeln!(text, "ric (Koszul) =\n{}", matrix_text(&koszul)).ok();
    writeln!(text, "ric in level-set coordinates =\n{}", matrix_text(&coord)).ok();
    writeln!(
        text,
        "Koszul = closed form = hypersurface: {}",
        if passed { "yes" } else { "NO" }
    )
    .ok();
    let json = json!({
        "command": "ricci",
        "params": params_json(p),
        "basis": labels,
        "koszul": to_json(&koszul),
        "closed_form": to_json(&closed),
        "hypersurface_coordinates": to_json(&coord),
        "hypersurface_family_basis": to_json(&hyper),
        "agree": passed,
    });
    Ok(Report {
        text,
        json,
        csv: None,
        passed,
    })
}

pub fn cmd_soliton(p: &FamilyParams<Q>, derivations: &FamilyDerivations<Q>) -> Result<Report, CliError> {
    let (direct, lauret) = soliton_verdicts(p, derivations)?;
    let passed = direct.kind == lauret.kind;
    let mut text = String::new();
    writeln!(text, "family n = {}, rho = {}, c = {}", p.n, p.rho, p.c).ok();
    writeln!(text, "direct: {}", direct.kind.as_str()).ok();
    writeln!(text, "lauret: {}", lauret.kind.as_str()).ok();
    if let Some(l) = &direct.lambda {
        writeln!(text, "lambda: {l}").ok();
    }
    if let Some(c) = &lauret.checklist {
        writeln!(
            text,
            "checklist: nilsoliton={} a_abelian={} ad_normal={} norm_condition={}",
            c.nilsoliton, c.a_abelian, c.ad_normal, c.norm_condition
        )
        .ok();
    }
    let json = json!({
        "command": "soliton",
        "params": params_json(p),
        "direct": to_json(&direct),
        "lauret": to_json(&lauret),
        "agree": passed,
    });
    Ok(Report {
        text,
        json,
        csv: None,
        passed,
    })
}

pub fn cmd_spectrum(p: &FamilyParams<Q>) -> Result<Report, CliError> {
    let cf = expected_closed_forms(p)?;
    let shape = shape_operator(p)?;
    let present: Vec<Surd<Q>> = cf.sigma.iter().flatten().cloned().collect();
    let computed: Vec<Surd<Q>> = shape.spectrum.iter().map(|(s, _)| s.clone()).collect();
    let passed = present == computed && shape.trace == cf.tr_s;
    let mut text = String::new();
    writeln!(text, "family n = {}, rho = {}, c = {}", p.n, p.rho, p.c).ok();
    writeln!(text, "shape operator eigenvalues (exact, ≈ 12 significant digits):").ok();
    for (i, (s, m)) in cf.sigma.iter().zip(cf.multiplicities).enumerate() {
        if let Some(s) = s {
            writeln!(text, "  sigma{} = {}  ≈ {}  (multiplicity {m})", i + 1, s, approx(s.to_f64())).ok();
        }
    }
    writeln!(text, "  tr S = {}  ≈ {}", cf.tr_s, approx(cf.tr_s.to_f64())).ok();
    writeln!(text, "principal Ricci curvatures:").ok();
    for (i, (r, m)) in cf.r.iter().zip(cf.multiplicities).enumerate() {
        if let Some(r) = r {
            writeln!(text, "  r{} = {}  ≈ {}  (multiplicity {m})", i + 1, r, approx(r.to_f64())).ok();
        }
    }
    let json = json!({
        "command": "spectrum",
        "params": params_json(p),
        "sigma": cf.sigma.iter().map(|s| s.as_ref().map(|s| s.to_string())).collect::<Vec<_>>(),
        "sigma_approx": cf.sigma.iter().map(|s| s.as_ref().map(|s| approx(s.to_f64()))).collect::<Vec<_>>(),
        "r": cf.r.iter().map(|r| r.as_ref().map(|r| r.to_string())).collect::<Vec<_>>(),
        "r_approx": cf.r.iter().map(|r| r.as_ref().map(|r| approx(r.to_f64()))).collect::<Vec<_>>(),
        "multiplicities": cf.multiplicities,
        "trace_s": surd_json(&cf.tr_s),
        "mean_curvature_coefficient": cf.h_coeff.to_string(),
        "lambda": cf.lambda_expected.to_string(),
        "consistent": passed,
    });
    Ok(Report {
        text,
        json,
        csv: None,
        passed,
    })
}

const SWEEP_COLUMNS: [&str; 22] = [
    "n", "rho", "c", "status", "predicted", "r1", "r2", "r3", "r4", "sigma1", "sigma2", "sigma3",
    "sigma4", "trace_s", "r1_approx", "r2_approx", "r3_approx", "r4_approx", "sigma1_approx",
    "sigma2_approx", "sigma3_approx", "sigma4_approx",
];

pub fn cmd_sweep(grid: &[FamilyParams<Q>]) -> Result<Report, CliError> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut cache: Option<FamilyDerivations<Q>> = None;
    let mut passed = true;
    for p in grid {
        if cache.as_ref().is_none_or(|c| c.n != p.n) {
            cache = Some(FamilyDerivations::compute(p.n)?);
        }
        let (direct, lauret) = soliton_verdicts(p, cache.as_ref().expect("filled above"))?;
        let predicted = predicted_status(p);
        passed &= direct.kind == lauret.kind && direct.kind == predicted;
        let cf = expected_closed_forms(p)?;
        let opt = |x: Option<String>| x.unwrap_or_default();
        let mut row = vec![
            p.n.to_string(),
            p.rho.to_string(),
            p.c.to_string(),
            direct.kind.as_str().to_string(),
            predicted.as_str().to_string(),
        ];
        row.extend(cf.r.iter().map(|r| opt(r.as_ref().map(|r| r.to_string()))));
        row.extend(cf.sigma.iter().map(|s| opt(s.as_ref().map(|s| s.to_string()))));
        row.push(cf.tr_s.to_string());
        row.extend(cf.r.iter().map(|r| opt(r.as_ref().map(|r| approx(r.to_f64())))));
        row.extend(cf.sigma.iter().map(|s| opt(s.as_ref().map(|s| approx(s.to_f64())))));
        rows.push(row);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS).map_err(|e| CliError::Internal(Error::Parse(e.to_string())))?;
    for row in &rows {
        w.write_record(row).map_err(|e| CliError::Internal(Error::Parse(e.to_string())))?;
    }
    let csv_text = String::from_utf8(w.into_inner().map_err(|e| CliError::Internal(Error::Parse(e.to_string())))?)
        .expect("csv output is UTF-8");
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            Value::Object(
                SWEEP_COLUMNS
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                    .collect(),
            )
        })
        .collect();
    let mut text = String::new();
    writeln!(text, "{:>3} {:>6} {:>6}  {:<12} r1, r2, r3, r4", "n", "rho", "c", "status").ok();
    for row in &rows {
        writeln!(
            text,
            "{:>3} {:>6} {:>6}  {:<12} {}, {}, {}, {}",
            row[0], row[1], row[2], row[3], row[5], row[6], row[7], row[8]
        )
        .ok();
    }
    Ok(Report {
        text,
        json: json!({"command": "sweep", "rows": json_rows, "passed": passed}),
        csv: Some(csv_text),
        passed,
    })
}

/// Einstein residual tolerance of the ambient metric.
pub const EINSTEIN_TOL: f64 = 1e-6;

pub fn cmd_einstein(p: &FamilyParams<Q>) -> Result<Report, CliError> {
    if p.n > EINSTEIN_MAX_N {
        return Err(CliError::Usage(format!(
            "einstein is limited to n <= {EINSTEIN_MAX_N} (got n = {})",
            p.n
        )));
    }
    let rows = einstein_rows(p, 2, EINSTEIN_SEED)?;
    let metric = AmbientMetric::new(p.n, p.c.to_f64())?;
    let induced = induced_consistency(&metric, p)?;
    let max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let passed = max < EINSTEIN_TOL && induced.passes(1e-12, 1e-8);
    let mut text = String::new();
    writeln!(text, "family n = {}, rho = {}, c = {}", p.n, p.rho, p.c).ok();
    for r in &rows {
        writeln!(text, "  {:<12} |Ric + {}g| / |g| = {:.3e}", r.point, 2 * (p.n + 2), r.residual).ok();
    }
    writeln!(text, "max relative residual: {max:.3e}").ok();
    writeln!(text, "induced Gram error at p_rho: {:.3e}", induced.gram_error).ok();
    writeln!(text, "level-set Ricci eigenvalue error: {:.3e}", induced.intrinsic_ricci_error).ok();
    writeln!(text, "result: {}", if passed { "Einstein within tolerance" } else { "RESIDUAL TOO LARGE" }).ok();
    let mut buf = Vec::new();
    write_residual_csv(&rows, &mut buf)?;
    let json = json!({
        "command": "einstein",
        "params": params_json(p),
        "rows": to_json(&rows),
        "max_residual": max,
        "induced": to_json(&induced),
        "passed": passed,
    });
    Ok(Report {
        text,
        json,
        csv: Some(String::from_utf8(buf).expect("csv output is UTF-8")),
        passed,
    })
}

fn dispatch(cmd: &Command) -> Result<(Report, &OutputArgs), CliError> {
    let max_n = max_exact_n();
    let point = |a: &PointArgs, limit: usize| parse_params(a.n, &a.rho, &a.c, limit);
    Ok(match cmd {
        Command::Verify(a) => {
            let p = point(a, max_n)?;
            (cmd_verify(&p, &FamilyDerivations::compute(p.n)?)?, &a.out)
        }
        Command::Ricci(a) => (cmd_ricci(&point(a, max_n)?)?, &a.out),
        Command::Soliton(a) => {
            let p = point(a, max_n)?;
            (cmd_soliton(&p, &FamilyDerivations::compute(p.n)?)?, &a.out)
        }
        Command::Spectrum(a) => (cmd_spectrum(&point(a, max_n)?)?, &a.out),
        Command::Einstein(a) => (cmd_einstein(&point(a, usize::MAX)?)?, &a.out),
        Command::Sweep(a) => {
            let mut grid = Vec::new();
            for &n in &a.n {
                for rho in &a.rho {
                    for c in &a.c {
                        grid.push(parse_params(n, rho, c, max_n)?);
                    }
                }
            }
            (cmd_sweep(&grid)?, &a.out)
        }
    })
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = dispatch(&cli.command).and_then(|(report, out)| {
        let rendered = report.render(out.format)?;
        match &out.output {
            Some(path) => std::fs::write(path, rendered)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{rendered}"),
        }
        Ok(report.passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_MATH,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Internal(e)) => {
            eprintln!("error: {e}");
            EXIT_MATH
        }
    }
}
