//! The `antidrazin` command line.
//!
//! Exit codes: 0 success, 1 unreadable input or bad arguments, 2 numeric
//! failure, 3 verification failure, 4 a forced method's hypotheses fail,
//! 5 `check` found no applicable representation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::anti::{
    anti_triangular_flipped, check_t23, check_t26, coupling_norm, drazin_by_method, generate_t23_instance,
    generate_t26_instance, second_order_from_block_inverse, AntiTriangularInput, ConditionReport, Method,
    T23Family, T26Family,
};
use crate::drazin::{drazin_oracle, verify_gdrazin, Residuals};
use crate::error::{Error, Result};
use crate::io::{fmt6, read_matrix, render_matrix, to_json_exact, write_matrix_json};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_HYPOTHESES: i32 = 4;
pub const EXIT_NOT_APPLICABLE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "antidrazin", version, about = "Drazin inverses of anti-triangular block matrices [[E, I], [F, 0]]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Residual tolerance for verification.
    #[arg(long, env = "ANTIDRAZIN_TOL")]
    pub tol: Option<f64>,
    /// Relative rank threshold.
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Threshold for "= 0" hypotheses, relative to (1 + |E|)(1 + |F|)^2.
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// Print one JSON object on stdout.
    #[arg(long)]
    pub json: bool,
    /// Verify inside the formulas and fail when the result differs from the oracle.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// File holding E (JSON, or CSV by extension).
    pub e: PathBuf,
    /// File holding F.
    pub f: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    T23,
    T26,
    Oracle,
}

impl MethodArg {
    fn forced(self) -> Option<Method> {
        match self {
            MethodArg::Auto => None,
            MethodArg::T23 => Some(Method::T23),
            MethodArg::T26 => Some(Method::T26),
            MethodArg::Oracle => Some(Method::Oracle),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    EfZero,
    Coupled,
    InvertibleF,
    ProjectedZero,
    EmbeddedT23,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Drazin inverse, index and spectral projector of one square matrix.
    Drazin {
        path: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Drazin inverse of [[E, I], [F, 0]].
    Anti {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[command(flatten)]
        flags: Flags,
    },
    /// Drazin inverse of [[E, F], [I, 0]] (requires the F^pi hypotheses).
    Flip {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        flags: Flags,
    },
    /// Drazin inverse of [[E, -F], [-I, 0]].
    SecondOrder {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[command(flatten)]
        flags: Flags,
    },
    /// Report which hypothesis sets hold.
    Check {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        flags: Flags,
    },
    /// Write random instances as E/F JSON files.
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        /// Block size of E and F.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Serialize, Debug)]
pub struct InputDigest {
    pub rows: usize,
    pub cols: usize,
    /// Frobenius norms of the input matrices, by name.
    pub norms: Vec<(&'static str, f64)>,
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub command: &'static str,
    pub input: InputDigest,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    pub result: ComplexMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projector: Option<ComplexMatrix>,
    pub residuals: Residuals,
    /// `|result - oracle|_F / (1 + |oracle|_F)`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_distance: Option<f64>,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Serialize, Debug)]
struct CheckReport {
    command: &'static str,
    conditions: Vec<ConditionReport>,
    t23_applies: bool,
    t26_applies: bool,
    coupling_norm: f64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error that aborted a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::Empty { .. }
        | Error::EntryCount { .. }
        | Error::NonFinite { .. }
        | Error::InvalidTolerance { .. }
        | Error::InvalidArgument { .. } => EXIT_INPUT,
        Error::Decomposition { .. } | Error::Singular { .. } | Error::NumericInstability { .. } => EXIT_NUMERIC,
        Error::Verification { .. } => EXIT_VERIFICATION,
        Error::ConditionViolation { .. } => EXIT_HYPOTHESES,
    }
}

fn tolerances(flags: &Flags) -> Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = flags.tol {
        cfg.residual_tol = t;
    }
    if let Some(t) = flags.rank_tol {
        cfg.rank_rel_tol = t;
    }
    if let Some(t) = flags.zero_tol {
        cfg.zero_abs_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_pair(pair: &PairArgs, flags: &Flags) -> Result<AntiTriangularInput> {
    let cfg = tolerances(flags)?;
    let e = read_matrix(&pair.e)?;
    let f = read_matrix(&pair.f)?;
    Ok(AntiTriangularInput::new(e, f, cfg)?.with_verification(flags.verify))
}

fn digest(input: &AntiTriangularInput) -> InputDigest {
    InputDigest {
        rows: input.n(),
        cols: input.n(),
        norms: vec![("E", input.e().frobenius_norm()), ("F", input.f().frobenius_norm())],
    }
}

fn all_conditions(input: &AntiTriangularInput) -> Result<Vec<ConditionReport>> {
    let mut reports = check_t23(input).to_vec();
    reports.extend(check_t26(input)?);
    Ok(reports)
}

fn relative_distance(a: &ComplexMatrix, oracle: &ComplexMatrix) -> f64 {
    a.distance(oracle) / (1.0 + oracle.frobenius_norm())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Drazin { path, flags } => cmd_drazin(&path, &flags, out),
        Command::Anti { pair, method, flags } => cmd_anti(&pair, method, &flags, out, err),
        Command::Flip { pair, flags } => cmd_flip(&pair, &flags, out, err),
        Command::SecondOrder { pair, method, flags } => cmd_second_order(&pair, method, &flags, out, err),
        Command::Check { pair, flags } => cmd_check(&pair, &flags, out),
        Command::Gen {
            family,
            n,
            seed,
            count,
            out_dir,
        } => cmd_gen(family, n, seed, count, &out_dir, out),
    }
}

pub fn cmd_drazin(path: &Path, flags: &Flags, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let cfg = tolerances(flags)?;
    let a = read_matrix(path)?;
    a.require_square("drazin")?;
    let r = drazin_oracle(&a, &cfg)?;
    let report = RunReport {
        command: "drazin",
        input: InputDigest {
            rows: a.rows(),
            cols: a.cols(),
            norms: vec![("A", a.frobenius_norm())],
        },
        conditions: Vec::new(),
        coupling_norm: None,
        method: Some(Method::Oracle),
        result: r.inverse,
        index: Some(r.index),
        projector: Some(r.projector),
        residuals: r.residuals,
        oracle_distance: None,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        warnings: Vec::new(),
    };
    emit(&report, flags, out)?;
    Ok(EXIT_OK)
}

/// Shared tail of `anti` and `second-order`: residuals against `target`, the
/// oracle cross-check, and the exit decision.
fn finish(
    mut report: RunReport,
    target: &ComplexMatrix,
    cfg: &ToleranceConfig,
    flags: &Flags,
    start: Instant,
    out: &mut dyn Write,
) -> Result<i32> {
    report.residuals = verify_gdrazin(target, &report.result, cfg)?;
    let oracle = drazin_oracle(target, cfg)?.inverse;
    let dist = relative_distance(&report.result, &oracle);
    report.oracle_distance = Some(dist);
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&report, flags, out)?;
    if !report.residuals.passed || (flags.verify && dist > cfg.residual_tol) {
        return Ok(EXIT_VERIFICATION);
    }
    Ok(EXIT_OK)
}

fn placeholder(command: &'static str, input: &AntiTriangularInput, conditions: Vec<ConditionReport>) -> RunReport {
    RunReport {
        command,
        input: digest(input),
        conditions,
        coupling_norm: Some(coupling_norm(input)),
        method: None,
        result: ComplexMatrix::zeros(0, 0),
        index: None,
        projector: None,
        residuals: Residuals {
            reflexive: 0.0,
            commutator: 0.0,
            nilpotent: 0.0,
            passed: true,
        },
        oracle_distance: None,
        wall_time_ms: 0.0,
        warnings: Vec::new(),
    }
}

fn oracle_warning(method: Method, report: &mut RunReport, err: &mut dyn Write) {
    if method == Method::Oracle {
        let msg = "neither hypothesis set holds; no closed form applies, result is from the oracle".to_string();
        let _ = writeln!(err, "warning: {msg}");
        report.warnings.push(msg);
    }
}

pub fn cmd_anti(
    pair: &PairArgs,
    method: MethodArg,
    flags: &Flags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let start = Instant::now();
    let input = load_pair(pair, flags)?;
    let mut report = placeholder("anti", &input, all_conditions(&input)?);
    let r = match drazin_by_method(&input, method.forced()) {
        Err(Error::ConditionViolation { context, reports }) => {
            report_violation(context, &reports, flags, out, err)?;
            return Ok(EXIT_HYPOTHESES);
        }
        other => other?,
    };
    if method == MethodArg::Auto {
        oracle_warning(r.method, &mut report, err);
    }
    report.method = Some(r.method);
    report.result = r.inverse;
    finish(report, &input.block_matrix(), input.cfg(), flags, start, out)
}

pub fn cmd_flip(pair: &PairArgs, flags: &Flags, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let input = load_pair(pair, flags)?;
    let mut report = placeholder("flip", &input, check_t26(&input)?.to_vec());
    let result = match anti_triangular_flipped(&input) {
        Err(Error::ConditionViolation { context, reports }) => {
            report_violation(context, &reports, flags, out, err)?;
            return Ok(EXIT_HYPOTHESES);
        }
        other => other?,
    };
    report.method = Some(Method::T26);
    report.result = result;
    finish(report, &input.flipped_matrix(), input.cfg(), flags, start, out)
}

pub fn cmd_second_order(
    pair: &PairArgs,
    method: MethodArg,
    flags: &Flags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let start = Instant::now();
    let input = load_pair(pair, flags)?;
    let mut report = placeholder("second-order", &input, all_conditions(&input)?);
    let inner = match drazin_by_method(&input, method.forced()) {
        Err(Error::ConditionViolation { context, reports }) => {
            report_violation(context, &reports, flags, out, err)?;
            return Ok(EXIT_HYPOTHESES);
        }
        other => other?,
    };
    if method == MethodArg::Auto {
        oracle_warning(inner.method, &mut report, err);
    }
    report.method = Some(inner.method);
    report.result = second_order_from_block_inverse(&input, &inner.inverse);
    finish(report, &input.second_order_matrix(), input.cfg(), flags, start, out)
}

pub fn cmd_check(pair: &PairArgs, flags: &Flags, out: &mut dyn Write) -> Result<i32> {
    let input = load_pair(pair, flags)?;
    let t23 = check_t23(&input);
    let t26 = check_t26(&input)?;
    let t23_applies = t23.iter().all(|r| r.holds);
    let t26_applies = t26.iter().all(|r| r.holds);
    let report = CheckReport {
        command: "check",
        conditions: t23.iter().chain(t26.iter()).cloned().collect(),
        t23_applies,
        t26_applies,
        coupling_norm: coupling_norm(&input),
    };
    if flags.json {
        writeln!(out, "{}", to_json_exact(&report)?)?;
    } else {
        write_conditions(&report.conditions, out)?;
        let mark = |b: bool| if b { "yes" } else { "no" };
        writeln!(out, "|EF| = {}", fmt6(report.coupling_norm))?;
        writeln!(out, "t23 applies: {}", mark(t23_applies))?;
        writeln!(out, "t26 applies: {}", mark(t26_applies))?;
    }
    Ok(if t23_applies || t26_applies { EXIT_OK } else { EXIT_NOT_APPLICABLE })
}

pub fn cmd_gen(family: GenFamily, n: usize, seed: u64, count: u64, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    std::fs::create_dir_all(dir)?;
    let name = family.to_possible_value().expect("no skipped variants").get_name().to_string();
    for s in seed..seed + count {
        let input = match family {
            GenFamily::EfZero => generate_t23_instance(n, T23Family::EfZero, s)?,
            GenFamily::Coupled => generate_t23_instance(n, T23Family::Coupled, s)?,
            GenFamily::InvertibleF => generate_t26_instance(n, T26Family::InvertibleF, s)?,
            GenFamily::ProjectedZero => generate_t26_instance(n, T26Family::ProjectedZero, s)?,
            GenFamily::EmbeddedT23 => generate_t26_instance(n, T26Family::EmbeddedT23, s)?,
        };
        for (tag, m) in [("E", input.e()), ("F", input.f())] {
            let path = dir.join(format!("{name}_n{n}_s{s}_{tag}.json"));
            write_matrix_json(&path, m)?;
            writeln!(out, "{}", path.display())?;
        }
    }
    Ok(EXIT_OK)
}

fn report_violation(
    context: &str,
    reports: &[ConditionReport],
    flags: &Flags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    writeln!(err, "error: {context}: hypotheses do not hold")?;
    if flags.json {
        #[derive(Serialize)]
        struct Violation<'a> {
            error: &'a str,
            context: &'a str,
            conditions: &'a [ConditionReport],
        }
        let v = Violation {
            error: "hypotheses do not hold",
            context,
            conditions: reports,
        };
        writeln!(out, "{}", to_json_exact(&v)?)?;
    } else {
        write_conditions(reports, out)?;
    }
    Ok(())
}

fn write_conditions(reports: &[ConditionReport], out: &mut dyn Write) -> Result<()> {
    let width = reports.iter().map(|r| r.condition_name.len()).max().unwrap_or(0);
    writeln!(out, "{:<width$}  {:>12}  {:>12}  verdict", "condition", "defect", "threshold")?;
    for r in reports {
        writeln!(
            out,
            "{:<width$}  {:>12}  {:>12}  {}",
            r.condition_name,
            fmt6(r.defect_norm),
            fmt6(r.threshold),
            if r.holds { "holds" } else { "fails" }
        )?;
    }
    Ok(())
}

fn emit(report: &RunReport, flags: &Flags, out: &mut dyn Write) -> Result<()> {
    if flags.json {
        writeln!(out, "{}", to_json_exact(report)?)?;
        return Ok(());
    }
    let inp = &report.input;
    write!(out, "input: {}x{}", inp.rows, inp.cols)?;
    for (name, norm) in &inp.norms {
        write!(out, ", |{name}| = {}", fmt6(*norm))?;
    }
    writeln!(out)?;
    if !report.conditions.is_empty() {
        write_conditions(&report.conditions, out)?;
    }
    if let Some(m) = report.method {
        writeln!(out, "method: {}", m.as_str())?;
    }
    if let Some(k) = report.index {
        writeln!(out, "index: {k}")?;
    }
    writeln!(out, "result:\n{}", render_matrix(&report.result))?;
    if let Some(p) = &report.projector {
        writeln!(out, "projector:\n{}", render_matrix(p))?;
    }
    let r = &report.residuals;
    writeln!(
        out,
        "residuals: |BAB-B| = {}, |AB-BA| = {}, |(A-A^2B)^n| = {} ({})",
        fmt6(r.reflexive),
        fmt6(r.commutator),
        fmt6(r.nilpotent),
        if r.passed { "pass" } else { "FAIL" }
    )?;
    if let Some(d) = report.oracle_distance {
        writeln!(out, "distance to oracle: {}", fmt6(d))?;
    }
    writeln!(out, "wall time: {} ms", fmt6(report.wall_time_ms))?;
    Ok(())
}
