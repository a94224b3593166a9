//! Batch command-line front end.
//!
//! Subcommands: `list`, `expand`, `verify`, `verify-all`, `eval`,
//! `residual`. Data goes to stdout (JSON by default, every document
//! carrying `"schema":"1"`; CSV for coefficient tables), diagnostics to
//! stderr. Exit codes: 0 success / all PASS, 1 any FAIL, 2 any ERROR,
//! 64 usage error.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use qmock_core::catalog::{self, CatalogEntry};
use qmock_core::numerics::special as nspecial;
use qmock_core::numerics::twins;
use qmock_core::numerics::{default_grid, GridSpec, MpComplex, NumericPolicy};
use qmock_core::rational::{to_compact_string, to_frac_string};
use qmock_core::series::TruncationPolicy;
use qmock_core::verify::{
    lookup_identity, registry, report_to_json, stability_check, stability_to_json, verify,
    verify_all, Status,
};
use qmock_core::QSeries;

const SCHEMA: &str = "1";

/// Schema tag carried by every JSON document this binary prints.
pub fn report_schema_version() -> &'static str {
    SCHEMA
}

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "qmock", about = "Exact q-series identity engine and completion numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WindowArgs {
    /// zeta-cap A of the comparison window
    #[arg(long = "A", default_value_t = 12)]
    zeta_cap: i64,
    /// q-cap B of the comparison window
    #[arg(long = "B", default_value_t = 40)]
    q_cap: i64,
    /// q-floor G (window reaches down to q^-G)
    #[arg(long = "G", default_value_t = 2)]
    q_floor: i64,
    /// extra summation indices for the stability re-check
    #[arg(long, default_value_t = 5)]
    margin: i64,
}

impl WindowArgs {
    fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            zeta_cap: self.zeta_cap,
            q_cap: self.q_cap,
            q_floor: self.q_floor,
            stability_margin: self.margin,
        }
    }
}

#[derive(Args)]
struct NumericArgs {
    /// target absolute tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// working precision in decimal digits
    #[arg(long, default_value_t = 50)]
    precision: u32,
}

impl NumericArgs {
    fn policy(&self) -> NumericPolicy {
        NumericPolicy {
            target_tol: self.tol,
            precision_digits: self.precision,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the series and identity catalog
    List,
    /// Expand a named series into exact coefficients
    Expand {
        /// catalog name, e.g. nu, ds1, f1-cleared (see `list`)
        #[arg(long)]
        series: String,
        /// truncation order (inclusive)
        #[arg(long)]
        qmax: i64,
        /// zeta-cap used for policy-derived summation bounds
        #[arg(long = "zeta-cap", default_value_t = 12)]
        zeta_cap: i64,
        /// json or csv
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Verify one identity on the window
    Verify {
        /// identity id, e.g. ID-C1
        #[arg(long)]
        id: String,
        #[command(flatten)]
        window: WindowArgs,
        /// additionally re-verify with bounds raised by the margin
        #[arg(long, default_value_t = false)]
        stability: bool,
    },
    /// Verify every registered identity
    VerifyAll {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = false)]
        stability: bool,
    },
    /// Evaluate a completion-apparatus function at a point
    #[command(allow_negative_numbers = true)]
    Eval {
        /// function name: e, r, mu, m, c, r-univ, u-univ, completion-nu,
        /// completion-phi, completion-rho, f-hat-1/2/3, nu, phi, rho,
        /// m10, m17, ds1/2/3, f1/f2/f3-cleared
        #[arg(long = "fn")]
        function: String,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        z: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        z_im: f64,
        #[arg(long)]
        u_re: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        u_im: f64,
        #[arg(long)]
        v_re: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        v_im: f64,
        /// tau defaults to the point i
        #[arg(long, default_value_t = 0.0)]
        tau_re: f64,
        #[arg(long, default_value_t = 1.0)]
        tau_im: f64,
        #[arg(long)]
        alpha_re: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        alpha_im: f64,
        #[arg(long)]
        beta_re: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        beta_im: f64,
        #[arg(long)]
        q_re: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        q_im: f64,
        #[arg(long)]
        zeta_re: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        zeta_im: f64,
    },
    /// Evaluate a residual check over a sample grid
    Residual {
        /// check name: ramanujan
        #[arg(long)]
        check: String,
        /// JSON grid file {"points":[{tau_re,...}],"tol":...}; built-in
        /// grid when omitted
        #[arg(long = "grid-file")]
        grid_file: Option<String>,
        /// pass threshold (overrides the grid file's tol; default 1e-9)
        #[arg(long)]
        tol: Option<f64>,
        /// working precision in decimal digits
        #[arg(long, default_value_t = 50)]
        precision: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit)
        }
    }
}

struct CliError {
    exit: u8,
    message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { exit: EXIT_USAGE, message: message.into() }
}

fn compute_error(message: impl Into<String>) -> CliError {
    CliError { exit: EXIT_ERROR, message: message.into() }
}

fn catalog_hint() -> String {
    let names: Vec<_> = catalog::catalog().iter().map(|e| e.name).collect();
    format!("known series: {}", names.join(", "))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::List => cmd_list(),
        Command::Expand { series, qmax, zeta_cap, format } => {
            cmd_expand(&series, qmax, zeta_cap, &format)
        }
        Command::Verify { id, window, stability } => cmd_verify(&id, &window, stability),
        Command::VerifyAll { window, stability } => cmd_verify_all(&window, stability),
        Command::Eval { .. } => cmd_eval(cli.command),
        Command::Residual { check, grid_file, tol, precision } => {
            cmd_residual(&check, grid_file.as_deref(), tol, precision)
        }
    }
}

fn print_doc(mut doc: Map<String, Value>) {
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(report_schema_version().into()));
    out.append(&mut doc);
    println!("{}", serde_json::to_string_pretty(&Value::Object(out)).expect("serializable"));
}

fn cmd_list() -> Result<ExitCode, CliError> {
    let series: Vec<Value> = catalog::catalog()
        .iter()
        .map(|e: &CatalogEntry| json!({ "name": e.name, "summary": e.summary }))
        .collect();
    let identities: Vec<Value> = registry()
        .iter()
        .map(|r| json!({ "id": r.id, "citation": r.citation, "clearing": r.clearing }))
        .collect();
    let mut doc = Map::new();
    doc.insert("series".into(), Value::Array(series));
    doc.insert("identities".into(), Value::Array(identities));
    print_doc(doc);
    Ok(ExitCode::SUCCESS)
}

fn series_to_json(s: &QSeries) -> Value {
    let mut outer = Map::new();
    for (q_exp, z) in s.iter_nonzero() {
        let mut inner = Map::new();
        for (zeta_exp, r) in z.iter() {
            inner.insert(zeta_exp.to_string(), Value::String(to_frac_string(r)));
        }
        outer.insert(q_exp.to_string(), Value::Object(inner));
    }
    Value::Object(outer)
}

fn series_to_csv(s: &QSeries) -> String {
    let zeta_free = s.iter_nonzero().all(|(_, z)| z.iter().all(|(e, _)| e == 0));
    let mut out = String::new();
    if zeta_free {
        out.push_str("q_exp,coeff\n");
        for (q_exp, z) in s.iter_nonzero() {
            for (_, r) in z.iter() {
                out.push_str(&format!("{q_exp},{}\n", to_compact_string(r)));
            }
        }
    } else {
        out.push_str("q_exp,zeta_exp,coeff\n");
        for (q_exp, z) in s.iter_nonzero() {
            for (zeta_exp, r) in z.iter() {
                out.push_str(&format!("{q_exp},{zeta_exp},{}\n", to_compact_string(r)));
            }
        }
    }
    out
}

fn cmd_expand(series: &str, qmax: i64, zeta_cap: i64, format: &str) -> Result<ExitCode, CliError> {
    if qmax < 0 {
        return Err(usage("--qmax must be nonnegative"));
    }
    let entry = catalog::lookup(series)
        .map_err(|e| usage(format!("{e}; {}", catalog_hint())))?;
    let policy = TruncationPolicy { zeta_cap, ..Default::default() };
    policy.validate().map_err(|e| usage(e.to_string()))?;
    let expansion = entry.build(&policy, qmax).map_err(|e| compute_error(e.to_string()))?;
    match format {
        "json" => {
            let mut doc = Map::new();
            doc.insert("series".into(), Value::String(series.into()));
            doc.insert("qmax".into(), json!(qmax));
            doc.insert("zeta_cap".into(), json!(zeta_cap));
            doc.insert("coefficients".into(), series_to_json(&expansion));
            print_doc(doc);
        }
        "csv" => print!("{}", series_to_csv(&expansion)),
        other => return Err(usage(format!("unknown format {other:?}; use json or csv"))),
    }
    Ok(ExitCode::SUCCESS)
}

fn status_exit(worst: Status) -> ExitCode {
    match worst {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(EXIT_FAIL),
        Status::Error => ExitCode::from(EXIT_ERROR),
    }
}

fn worst_of(a: Status, b: Status) -> Status {
    use Status::*;
    match (a, b) {
        (Error, _) | (_, Error) => Error,
        (Fail, _) | (_, Fail) => Fail,
        _ => Pass,
    }
}

fn cmd_verify(id: &str, window: &WindowArgs, stability: bool) -> Result<ExitCode, CliError> {
    let record = lookup_identity(id)
        .map_err(|e| usage(format!("{e}; known ids: {}", registry().iter().map(|r| r.id).collect::<Vec<_>>().join(", "))))?;
    let policy = window.policy();
    let report = verify(&record, &policy).map_err(|e| usage(e.to_string()))?;
    eprintln!("{} {}", report.id, report.status.as_str());
    let mut worst = report.status;
    let mut doc = Map::new();
    doc.insert("report".into(), report_to_json(&report));
    if stability {
        let srep = stability_check(&record, &policy).map_err(|e| usage(e.to_string()))?;
        eprintln!("{} stability {}", srep.id, srep.status.as_str());
        worst = worst_of(worst, srep.status);
        doc.insert("stability".into(), stability_to_json(&srep));
    }
    print_doc(doc);
    Ok(status_exit(worst))
}

fn cmd_verify_all(window: &WindowArgs, stability: bool) -> Result<ExitCode, CliError> {
    let policy = window.policy();
    let reports = verify_all(&policy).map_err(|e| usage(e.to_string()))?;
    let mut worst = Status::Pass;
    for r in &reports {
        eprintln!("{} {}", r.id, r.status.as_str());
        worst = worst_of(worst, r.status);
    }
    let mut doc = Map::new();
    doc.insert(
        "policy".into(),
        json!({ "A": policy.zeta_cap, "B": policy.q_cap, "G": policy.q_floor }),
    );
    doc.insert("reports".into(), Value::Array(reports.iter().map(report_to_json).collect()));
    if stability {
        let mut stab = Vec::new();
        for record in registry() {
            let srep = stability_check(&record, &policy).map_err(|e| usage(e.to_string()))?;
            eprintln!("{} stability {}", srep.id, srep.status.as_str());
            worst = worst_of(worst, srep.status);
            stab.push(stability_to_json(&srep));
        }
        doc.insert("stability".into(), Value::Array(stab));
    }
    print_doc(doc);
    Ok(status_exit(worst))
}

fn mp(prec: u32, re: Option<f64>, im: f64, flag: &str) -> Result<MpComplex, CliError> {
    let re = re.ok_or_else(|| usage(format!("--{flag} is required for this function")))?;
    Ok(MpComplex::from_f64(prec, re, im))
}

fn cmd_eval(command: Command) -> Result<ExitCode, CliError> {
    let Command::Eval {
        function,
        numeric,
        z,
        z_im,
        u_re,
        u_im,
        v_re,
        v_im,
        tau_re,
        tau_im,
        alpha_re,
        alpha_im,
        beta_re,
        beta_im,
        q_re,
        q_im,
        zeta_re,
        zeta_im,
    } = command
    else {
        unreachable!("cmd_eval is only called on Eval");
    };
    let policy = numeric.policy();
    policy.validate().map_err(|e| usage(e.to_string()))?;

    // one evaluation at a given policy; reused for the double run
    let eval_at = |pol: &NumericPolicy| -> Result<MpComplex, CliError> {
        let p = pol.prec_bits();
        let tau = || Ok::<MpComplex, CliError>(MpComplex::from_f64(p, tau_re, tau_im));
        let q = || mp(p, q_re, q_im, "q-re");
        let zeta = || mp(p, zeta_re, zeta_im, "zeta-re");
        let value = match function.as_str() {
            "e" => {
                let zv = z.ok_or_else(|| usage("--z is required for E"))?;
                MpComplex::from_real(nspecial::e_function(zv, pol))
            }
            "r" => nspecial::zwegers_r(&mp(p, u_re, u_im, "u-re")?, &tau()?, pol)
                .map_err(|e| compute_error(e.to_string()))?,
            "mu" => nspecial::appell_mu(
                &mp(p, u_re, u_im, "u-re")?,
                &mp(p, v_re, v_im, "v-re")?,
                &tau()?,
                pol,
            )
            .map_err(|e| compute_error(e.to_string()))?,
            "m" => nspecial::choi_m(
                &mp(p, u_re, u_im, "u-re")?,
                &mp(p, v_re, v_im, "v-re")?,
                &tau()?,
                pol,
            )
            .map_err(|e| compute_error(e.to_string()))?,
            "c" => nspecial::c_completion(
                &mp(p, u_re, u_im, "u-re")?,
                &mp(p, v_re, v_im, "v-re")?,
                &tau()?,
                pol,
            )
            .map_err(|e| compute_error(e.to_string()))?,
            "r-univ" => nspecial::universal_r_num(
                &mp(p, alpha_re, alpha_im, "alpha-re")?,
                &mp(p, beta_re, beta_im, "beta-re")?,
                &q()?,
                pol,
            )
            .map_err(|e| compute_error(e.to_string()))?,
            "u-univ" => nspecial::choi_u_num(
                &mp(p, alpha_re, alpha_im, "alpha-re")?,
                &mp(p, beta_re, beta_im, "beta-re")?,
                &q()?,
                pol,
            )
            .map_err(|e| compute_error(e.to_string()))?,
            "completion-nu" => nspecial::completion_nu(&tau()?, pol)
                .map_err(|e| compute_error(e.to_string()))?,
            "completion-phi" => nspecial::completion_phi(&tau()?, pol)
                .map_err(|e| compute_error(e.to_string()))?,
            "completion-rho" => nspecial::completion_rho(&tau()?, pol)
                .map_err(|e| compute_error(e.to_string()))?,
            "f-hat-1" | "f-hat-2" | "f-hat-3" => {
                let j = function.as_bytes()[6] - b'0';
                let zv = z.ok_or_else(|| usage("--z is required for f-hat"))?;
                nspecial::f_hat(j, &MpComplex::from_f64(p, zv, z_im), &tau()?, pol)
                    .map_err(|e| compute_error(e.to_string()))?
            }
            "nu" => twins::nu_num(&q()?, pol).map_err(|e| compute_error(e.to_string()))?,
            "phi" => twins::phi_num(&q()?, pol).map_err(|e| compute_error(e.to_string()))?,
            "rho" => twins::rho_num(&q()?, pol).map_err(|e| compute_error(e.to_string()))?,
            "m10" => twins::m10_num(&q()?, pol).map_err(|e| compute_error(e.to_string()))?,
            "m17" => twins::m17_num(&q()?, pol).map_err(|e| compute_error(e.to_string()))?,
            "ds1" | "ds2" | "ds3" => {
                let j = function.as_bytes()[2] - b'0';
                twins::double_sum_num(j, &zeta()?, &q()?, pol)
                    .map_err(|e| compute_error(e.to_string()))?
            }
            "f1-cleared" | "f2-cleared" | "f3-cleared" => {
                let j = function.as_bytes()[1] - b'0';
                twins::f_cleared_num(j, &zeta()?, &q()?, pol)
                    .map_err(|e| compute_error(e.to_string()))?
            }
            other => {
                return Err(usage(format!(
                    "unknown function {other:?}; see `qmock eval --help` for the list"
                )))
            }
        };
        Ok(value)
    };

    let v1 = eval_at(&policy)?;
    let v2 = eval_at(&policy.doubled())?;
    let delta = {
        let p2 = policy.doubled().prec_bits();
        let a = MpComplex::from_f64(p2, v1.re.to_f64(), v1.im.to_f64());
        v2.sub(&a).abs().to_f64()
    };
    if !delta.is_finite() || delta > policy.target_tol {
        return Err(compute_error(format!(
            "double-run disagreement {delta:.3e} exceeds target tolerance {:.3e}",
            policy.target_tol
        )));
    }
    let digits = policy.precision_digits as usize;
    let mut doc = Map::new();
    doc.insert("fn".into(), Value::String(function));
    doc.insert(
        "value".into(),
        json!({
            "re": format!("{:.*e}", digits, v2.re),
            "im": format!("{:.*e}", digits, v2.im),
        }),
    );
    doc.insert("precision_digits".into(), json!(policy.precision_digits));
    doc.insert("target_tol".into(), json!(policy.target_tol));
    doc.insert("double_run_delta".into(), json!(delta));
    print_doc(doc);
    Ok(ExitCode::SUCCESS)
}

fn cmd_residual(
    check: &str,
    grid_file: Option<&str>,
    tol_flag: Option<f64>,
    precision: u32,
) -> Result<ExitCode, CliError> {
    if check != "ramanujan" {
        return Err(usage(format!("unknown check {check:?}; available: ramanujan")));
    }
    let policy = NumericPolicy { precision_digits: precision, ..Default::default() };
    policy.validate().map_err(|e| usage(e.to_string()))?;
    let (points, file_tol) = match grid_file {
        None => (default_grid(), None),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read grid file {path}: {e}")))?;
            let spec: GridSpec = serde_json::from_str(&text)
                .map_err(|e| usage(format!("malformed grid file {path}: {e}")))?;
            (spec.points, spec.tol)
        }
    };
    let tol = tol_flag.or(file_tol).unwrap_or(1e-9);
    let mut results = Vec::new();
    let mut all_pass = true;
    for pt in &points {
        let residual = twins::ramanujan_residual(pt, &policy)
            .map_err(|e| compute_error(e.to_string()))?
            .to_f64();
        let pass = residual < tol;
        all_pass &= pass;
        results.push(json!({
            "tau": [pt.tau_re, pt.tau_im],
            "u": [pt.u_re, pt.u_im],
            "v": [pt.v_re, pt.v_im],
            "residual": residual,
            "pass": pass,
        }));
    }
    let mut doc = Map::new();
    doc.insert("check".into(), Value::String(check.into()));
    doc.insert("tol".into(), json!(tol));
    doc.insert("points".into(), Value::Array(results));
    doc.insert("all_pass".into(), json!(all_pass));
    print_doc(doc);
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
}
