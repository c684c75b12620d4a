//! Command-line dispatch with JSON reports.
//!
//! Exit codes: 0 success / Proved / all match; 1 verified mismatch or
//! Unknown verdict; 2 input or usage error. Reports carry a stable schema
//! version and provenance (seed, mode, crate version); maps are emitted
//! with sorted keys, so identical argv + seed yield byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::catalog;
use crate::charclasses as cc;
use crate::hochschild;
use crate::locale;
use crate::operators as ops;
use crate::scalar::{format_rational, parse_rational};
use crate::series::{MultiSeries, SeriesRepr};
use crate::weierstrass as wp;

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "rroch", version, about = "Exact Riemann-Roch verifier and analysis kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to a file as well as stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed recorded in the report and used by randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// chi(X, V) via ch * Td against the enumeration oracle where available.
    Hrr(HrrArgs),
    /// Pushforward comparison for a supported projection.
    Grr(GrrArgs),
    /// Sweep hrr against the oracle over a twist range on P^n.
    ChiTable(ChiTableArgs),
    /// Weierstrass preparation of a series germ.
    Weierstrass(WeierstrassArgs),
    /// Division with remainder by a monic divisor.
    Divide(DivideArgs),
    /// Fredholm reduction of 1 - f for trace-class f.
    Fredholm(FredholmArgs),
    /// Singular values and Schatten sums.
    Schatten(SchattenArgs),
    /// Finite spectrum of a square matrix.
    Spectrum(SpectrumArgs),
    /// Hochschild homology dimensions and the HKR comparison.
    Hh(HhArgs),
    /// Containment and emptiness for formal closed subsets.
    #[command(subcommand)]
    Locale(LocaleCommand),
}

#[derive(Args)]
struct HrrArgs {
    /// Space: pt, P0..P3, or a product like P1xP1.
    #[arg(long)]
    space: String,
    /// Bundle: O(k) on P^n, O(a,b) on a product.
    #[arg(long)]
    bundle: String,
}

#[derive(Args)]
struct GrrArgs {
    /// Supported projections: "PnxPm->Pn" or "P(O+O(k))->P1".
    #[arg(long)]
    map: String,
    /// Bundle on the total space: O(a,b) for products (with -a/-b),
    /// O(m) for the relative twist on a bundle (with -m).
    #[arg(long)]
    bundle: String,
    #[arg(short = 'a', long, default_value_t = 0)]
    a: i64,
    #[arg(short = 'b', long, default_value_t = 0)]
    b: i64,
    #[arg(short = 'm', long, default_value_t = 0)]
    m: i64,
}

#[derive(Args)]
struct ChiTableArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    kmin: i64,
    #[arg(long, allow_hyphen_values = true)]
    kmax: i64,
}

#[derive(Args)]
struct WeierstrassArgs {
    /// Series JSON file ({"nvars", "trunc", "terms": [...]}).
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,
    /// Series in human syntax (needs --nvars; --trunc or RROCH_TRUNC).
    #[arg(long)]
    expr: Option<String>,
    #[arg(long)]
    nvars: Option<usize>,
    #[arg(long)]
    trunc: Option<u32>,
    /// Working order M: computations modulo (X_2..X_n)^M.
    #[arg(long)]
    order: u32,
    /// Retry cap for the randomized coordinate change.
    #[arg(long, default_value_t = 16)]
    retries: u32,
}

#[derive(Args)]
struct DivideArgs {
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,
    #[arg(long)]
    expr: Option<String>,
    /// Divisor series (JSON file with --input, human syntax with --expr).
    #[arg(long, conflicts_with = "divisor_expr")]
    divisor: Option<PathBuf>,
    #[arg(long)]
    divisor_expr: Option<String>,
    #[arg(long)]
    nvars: Option<usize>,
    #[arg(long)]
    trunc: Option<u32>,
    #[arg(long)]
    order: u32,
}

#[derive(Args)]
struct FredholmArgs {
    /// Trace-class data: {"p", "dim", "rows": [{"lambda", "v": [...]}]}.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "float")]
    mode: ScalarMode,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct SchattenArgs {
    /// Matrix JSON: nested arrays of numbers.
    #[arg(long)]
    input: PathBuf,
    /// Schatten exponents to report.
    #[arg(short = 'p', long = "p", default_values_t = vec![1.0])]
    exponents: Vec<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    /// Also report eigenpair residuals from inverse iteration.
    #[arg(long)]
    residuals: bool,
}

#[derive(Args)]
struct HhArgs {
    #[arg(long)]
    vars: u32,
    #[arg(long)]
    deg: u32,
    /// Run the HKR comparison and the resolution acyclicity checks.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum LocaleCommand {
    /// Decide lhs \subseteq rhs and print the trace.
    Prove(LocaleProveArgs),
    /// Decide emptiness of an intersection.
    Empty(LocaleEmptyArgs),
}

#[derive(Args)]
struct LocaleProveArgs {
    #[arg(long)]
    lhs: String,
    #[arg(long)]
    rhs: String,
    #[arg(long, default_value_t = 3)]
    depth: u32,
}

#[derive(Args)]
struct LocaleEmptyArgs {
    #[arg(long)]
    expr: String,
    #[arg(long, default_value_t = 3)]
    depth: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ScalarMode {
    Float,
    Exact,
}

impl ScalarMode {
    fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Float => "float",
            ScalarMode::Exact => "exact",
        }
    }
}

/// Outcome of one dispatch: the report plus the exit code contract.
enum Outcome {
    Match(Value),
    Mismatch(Value),
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let seed = cli.seed;
    let result = dispatch(&cli.command, seed);
    match result {
        Ok(outcome) => {
            let (body, code) = match outcome {
                Outcome::Match(v) => (v, 0),
                Outcome::Mismatch(v) => (v, 1),
            };
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "report": body,
                "provenance": {
                    "seed": seed,
                    "version": env!("CARGO_PKG_VERSION"),
                },
            });
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            println!("{text}");
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            code
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(command: &Command, seed: u64) -> Result<Outcome, InputError> {
    match command {
        Command::Hrr(args) => run_hrr(args),
        Command::Grr(args) => run_grr(args),
        Command::ChiTable(args) => run_chi_table(args),
        Command::Weierstrass(args) => run_weierstrass(args, seed),
        Command::Divide(args) => run_divide(args),
        Command::Fredholm(args) => run_fredholm(args),
        Command::Schatten(args) => run_schatten(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Hh(args) => run_hh(args),
        Command::Locale(LocaleCommand::Prove(args)) => run_locale_prove(args),
        Command::Locale(LocaleCommand::Empty(args)) => run_locale_empty(args),
    }
}

fn run_hrr(args: &HrrArgs) -> Result<Outcome, InputError> {
    let space = catalog::parse_space(&args.space).map_err(|e| InputError(e.to_string()))?;
    let bundle =
        catalog::parse_line_bundle(&space, &args.bundle).map_err(|e| InputError(e.to_string()))?;
    let chi = cc::hrr(&space, &bundle).map_err(|e| InputError(e.to_string()))?;
    let mut body = json!({
        "command": "hrr",
        "inputs": { "space": args.space, "bundle": args.bundle },
        "outputs": { "chi": format_rational(&chi), "integer": cc::is_integer(&chi) },
    });
    // The oracle covers plain projective spaces; report the comparison there.
    if let cc::SpaceKind::Proj(n) = space.kind {
        if let Some(k) = catalog::single_twist(&args.bundle) {
            let oracle = cc::oracle_chi_proj(n, k);
            let matched = chi == BigRational::from_integer(oracle.into());
            body["outputs"]["oracle"] = json!(oracle);
            body["outputs"]["match"] = json!(matched);
            return Ok(if matched {
                Outcome::Match(body)
            } else {
                Outcome::Mismatch(body)
            });
        }
    }
    Ok(Outcome::Match(body))
}

fn run_grr(args: &GrrArgs) -> Result<Outcome, InputError> {
    let case = catalog::grr_case_from_map(&args.map, args.a, args.b, args.m)
        .map_err(|e| InputError(e.to_string()))?;
    let report = case.check().map_err(|e| InputError(e.to_string()))?;
    let body = json!({
        "command": "grr",
        "inputs": { "map": args.map, "bundle": args.bundle, "a": args.a, "b": args.b, "m": args.m },
        "outputs": {
            "lhs": report.lhs.to_string(),
            "rhs": report.rhs.to_string(),
            "equal": report.equal,
        },
    });
    Ok(if report.equal {
        Outcome::Match(body)
    } else {
        Outcome::Mismatch(body)
    })
}

fn run_chi_table(args: &ChiTableArgs) -> Result<Outcome, InputError> {
    if args.kmin > args.kmax {
        return Err(InputError("kmin must be <= kmax".into()));
    }
    let space = cc::proj_space(args.n);
    let mut rows = Vec::new();
    let mut all_match = true;
    for k in args.kmin..=args.kmax {
        let v = cc::twist_line(&space, k).map_err(|e| InputError(e.to_string()))?;
        let chi = cc::hrr(&space, &v).map_err(|e| InputError(e.to_string()))?;
        let oracle = cc::oracle_chi_proj(args.n, k);
        let matched = chi == BigRational::from_integer(oracle.into());
        all_match &= matched;
        rows.push(json!({
            "n": args.n,
            "k": k,
            "hrr": format_rational(&chi),
            "oracle": oracle,
            "match": matched,
        }));
    }
    let body = json!({
        "command": "chi-table",
        "inputs": { "n": args.n, "kmin": args.kmin, "kmax": args.kmax },
        "outputs": { "rows": rows, "all_match": all_match },
    });
    Ok(if all_match {
        Outcome::Match(body)
    } else {
        Outcome::Mismatch(body)
    })
}

fn env_trunc() -> Option<u32> {
    std::env::var("RROCH_TRUNC").ok()?.parse().ok()
}

fn load_series(
    input: &Option<PathBuf>,
    expr: &Option<String>,
    nvars: Option<usize>,
    trunc: Option<u32>,
) -> Result<MultiSeries, InputError> {
    match (input, expr) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            let repr: SeriesRepr = serde_json::from_str(&text)?;
            Ok(MultiSeries::try_from(&repr)?)
        }
        (None, Some(expr)) => {
            let nvars =
                nvars.ok_or_else(|| InputError("--nvars is required with --expr".into()))?;
            let trunc = trunc
                .or_else(env_trunc)
                .ok_or_else(|| InputError("--trunc or RROCH_TRUNC is required".into()))?;
            Ok(crate::series::parse_series(expr, nvars, trunc)?)
        }
        _ => Err(InputError("provide exactly one of --input or --expr".into())),
    }
}

fn series_json(s: &MultiSeries) -> Value {
    serde_json::to_value(SeriesRepr::from(s)).expect("series serializes")
}

fn run_weierstrass(args: &WeierstrassArgs, seed: u64) -> Result<Outcome, InputError> {
    let f = load_series(&args.input, &args.expr, args.nvars, args.trunc)?;
    let (f, change, retries) = match wp::x1_vanishing_order(&f) {
        Ok(_) => (f, None, 0),
        Err(wp::WeierstrassError::NotRegular) => {
            let (changed, matrix, used) = wp::generic_coordinate_change(&f, seed, args.retries)
                .map_err(|e| InputError(e.to_string()))?;
            (changed, Some(matrix), used)
        }
        Err(e) => return Err(InputError(e.to_string())),
    };
    let prepared = wp::prepare(&f, args.order).map_err(|e| InputError(e.to_string()))?;
    let mut outputs = json!({
        "k": prepared.k,
        "g": series_json(&prepared.g),
        "u": series_json(&prepared.u),
        "working_order": prepared.working_order,
    });
    if let Some(matrix) = change {
        outputs["change"] = json!(matrix);
        outputs["change_retries"] = json!(retries);
    }
    let body = json!({
        "command": "weierstrass",
        "inputs": { "order": args.order },
        "outputs": outputs,
    });
    Ok(Outcome::Match(body))
}

fn run_divide(args: &DivideArgs) -> Result<Outcome, InputError> {
    let f = load_series(&args.input, &args.expr, args.nvars, args.trunc)?;
    let g = load_series(&args.divisor, &args.divisor_expr, args.nvars, args.trunc)?;
    let (q, r) = wp::divide(&f, &g, args.order).map_err(|e| InputError(e.to_string()))?;
    let body = json!({
        "command": "divide",
        "inputs": { "order": args.order },
        "outputs": { "q": series_json(&q), "r": series_json(&r) },
    });
    Ok(Outcome::Match(body))
}

#[derive(serde::Deserialize)]
struct TraceClassJson {
    p: f64,
    dim: usize,
    rows: Vec<TraceRowJson>,
}

#[derive(serde::Deserialize)]
struct TraceRowJson {
    lambda: Value,
    v: Vec<Value>,
}

fn value_to_f64(v: &Value) -> Result<f64, InputError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| InputError("number out of f64 range".into())),
        Value::String(s) => {
            let r = parse_rational(s)?;
            Ok(crate::scalar::rational_to_f64(&r))
        }
        _ => Err(InputError("expected a number".into())),
    }
}

fn value_to_rational(v: &Value) -> Result<BigRational, InputError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => {
            Ok(BigRational::from_integer(n.as_i64().unwrap().into()))
        }
        _ => Err(InputError(
            "exact mode expects integers or \"p/q\" strings".into(),
        )),
    }
}

fn run_fredholm(args: &FredholmArgs) -> Result<Outcome, InputError> {
    let text = fs::read_to_string(&args.input)?;
    let data: TraceClassJson = serde_json::from_str(&text)?;
    let (outputs, matched) = match args.mode {
        ScalarMode::Float => {
            let rows = data
                .rows
                .iter()
                .map(|row| {
                    Ok((
                        value_to_f64(&row.lambda)?,
                        row.v.iter().map(value_to_f64).collect::<Result<Vec<_>, _>>()?,
                    ))
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            let t = ops::TraceClassDecomposition::new(data.p, rows, data.dim)
                .map_err(|e| InputError(e.to_string()))?;
            let red = ops::fredholm_reduce(&t, args.tol).map_err(|e| InputError(e.to_string()))?;
            let (ker, coker) = red.kernel_cokernel(Some(1e-8));
            let (dker, dcoker) = ops::dense_kernel_cokernel(&t, Some(1e-8));
            let matched = (ker, coker) == (dker, dcoker);
            (
                json!({
                    "split": red.split,
                    "tail_sum": red.tail_sum,
                    "neumann_depth": red.neumann_depth,
                    "neumann_error": red.neumann_error,
                    "ker": ker,
                    "coker": coker,
                    "index": red.index(Some(1e-8)),
                    "dense_ker": dker,
                    "dense_coker": dcoker,
                    "match": matched,
                }),
                matched,
            )
        }
        ScalarMode::Exact => {
            let rows = data
                .rows
                .iter()
                .map(|row| {
                    Ok((
                        value_to_rational(&row.lambda)?,
                        row.v
                            .iter()
                            .map(value_to_rational)
                            .collect::<Result<Vec<_>, _>>()?,
                    ))
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            let t = ops::TraceClassDecomposition::new(data.p, rows, data.dim)
                .map_err(|e| InputError(e.to_string()))?;
            let red = ops::fredholm_reduce_exact(&t).map_err(|e| InputError(e.to_string()))?;
            let (ker, coker) = red.kernel_cokernel(None);
            let (dker, dcoker) = ops::dense_kernel_cokernel(&t, None);
            let matched = (ker, coker) == (dker, dcoker);
            (
                json!({
                    "split": red.split,
                    "tail_sum": format_rational(&red.tail_sum),
                    "ker": ker,
                    "coker": coker,
                    "index": red.index(None),
                    "dense_ker": dker,
                    "dense_coker": dcoker,
                    "match": matched,
                }),
                matched,
            )
        }
    };
    let body = json!({
        "command": "fredholm",
        "inputs": { "dim": data.dim, "p": data.p, "mode": args.mode.as_str(), "tol": args.tol },
        "outputs": outputs,
    });
    Ok(if matched {
        Outcome::Match(body)
    } else {
        Outcome::Mismatch(body)
    })
}

fn load_matrix(path: &PathBuf) -> Result<DMatrix<f64>, InputError> {
    let text = fs::read_to_string(path)?;
    let rows: Vec<Vec<Value>> = serde_json::from_str(&text)?;
    if rows.is_empty() {
        return Err(InputError("matrix must have at least one row".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(InputError("ragged matrix rows".into()));
    }
    let mut data = Vec::with_capacity(rows.len() * ncols);
    for row in &rows {
        for v in row {
            data.push(value_to_f64(v)?);
        }
    }
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &data))
}

fn run_schatten(args: &SchattenArgs) -> Result<Outcome, InputError> {
    let a = load_matrix(&args.input)?;
    let spectrum = ops::singular_values(&a).map_err(|e| InputError(e.to_string()))?;
    let mut sums = BTreeMap::new();
    for &p in &args.exponents {
        if p <= 0.0 {
            return Err(InputError("Schatten exponent must be positive".into()));
        }
        sums.insert(format!("{p}"), spectrum.schatten(p));
    }
    let body = json!({
        "command": "schatten",
        "inputs": { "shape": [a.nrows(), a.ncols()], "p": args.exponents },
        "outputs": { "sigma": spectrum.sigma, "schatten": sums },
    });
    Ok(Outcome::Match(body))
}

fn run_spectrum(args: &SpectrumArgs) -> Result<Outcome, InputError> {
    let a = load_matrix(&args.input)?;
    let eigenvalues = ops::spectrum_finite(&a).map_err(|e| InputError(e.to_string()))?;
    let eig_json: Vec<Value> = eigenvalues
        .iter()
        .map(|l| json!({ "re": l.re, "im": l.im }))
        .collect();
    let mut outputs = json!({ "eigenvalues": eig_json });
    if args.residuals {
        outputs["residuals"] = json!(ops::eigen_residuals(&a, &eigenvalues));
    }
    let body = json!({
        "command": "spectrum",
        "inputs": { "shape": [a.nrows(), a.ncols()] },
        "outputs": outputs,
    });
    Ok(Outcome::Match(body))
}

fn run_hh(args: &HhArgs) -> Result<Outcome, InputError> {
    let dims =
        hochschild::hochschild_homology(args.vars, args.deg).map_err(|e| InputError(e.to_string()))?;
    let table: Vec<Value> = dims
        .iter()
        .map(|g| json!({ "level": g.level, "dims": g.dims }))
        .collect();
    let mut outputs = json!({ "hh": table });
    let mut ok = true;
    if args.check {
        let hkr = hochschild::hkr_check(args.vars, args.deg)
            .map_err(|e| InputError(e.to_string()))?;
        let acyclic = hochschild::resolution_acyclicity_check(args.vars, args.deg)
            .map_err(|e| InputError(e.to_string()))?;
        ok = hkr.pass && acyclic.passed();
        outputs["hkr_pass"] = json!(hkr.pass);
        outputs["acyclicity"] = json!({
            "d_squared_zero": acyclic.d_squared_zero,
            "positive_homology_vanishes": acyclic.positive_homology_vanishes,
            "h0_matches_polynomial_ring": acyclic.h0_matches_polynomial_ring,
            "checked_up_to_degree": acyclic.checked_up_to,
        });
    }
    let body = json!({
        "command": "hh",
        "inputs": { "vars": args.vars, "deg": args.deg, "check": args.check },
        "outputs": outputs,
    });
    Ok(if ok {
        Outcome::Match(body)
    } else {
        Outcome::Mismatch(body)
    })
}

fn trace_json(trace: &[locale::TraceStep]) -> Value {
    let steps: Vec<Value> = trace
        .iter()
        .map(|s| {
            json!({
                "rule": s.rule,
                "premises": s.premises.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "conclusion": s.conclusion.to_string(),
            })
        })
        .collect();
    json!(steps)
}

fn run_locale_prove(args: &LocaleProveArgs) -> Result<Outcome, InputError> {
    let lhs = locale::parse_expr(&args.lhs)?;
    let rhs = locale::parse_expr(&args.rhs)?;
    match locale::decide_containment(&lhs, &rhs, args.depth) {
        locale::Decision::Proved(trace) => {
            let replayed = locale::replay_trace(&lhs, &trace);
            let body = json!({
                "command": "locale-prove",
                "inputs": { "lhs": args.lhs, "rhs": args.rhs, "depth": args.depth },
                "outputs": { "verdict": "Proved", "trace": trace_json(&trace), "replay_ok": replayed },
            });
            Ok(if replayed {
                Outcome::Match(body)
            } else {
                Outcome::Mismatch(body)
            })
        }
        locale::Decision::Unknown => Ok(Outcome::Mismatch(json!({
            "command": "locale-prove",
            "inputs": { "lhs": args.lhs, "rhs": args.rhs, "depth": args.depth },
            "outputs": { "verdict": "Unknown" },
        }))),
    }
}

fn run_locale_empty(args: &LocaleEmptyArgs) -> Result<Outcome, InputError> {
    let expr = locale::parse_expr(&args.expr)?;
    match locale::decide_empty(&expr, args.depth) {
        locale::EmptyDecision::Empty(trace) => {
            let replayed = locale::replay_trace(&expr, &trace);
            let body = json!({
                "command": "locale-empty",
                "inputs": { "expr": args.expr, "depth": args.depth },
                "outputs": { "verdict": "Empty", "trace": trace_json(&trace), "replay_ok": replayed },
            });
            Ok(if replayed {
                Outcome::Match(body)
            } else {
                Outcome::Mismatch(body)
            })
        }
        locale::EmptyDecision::Unknown => Ok(Outcome::Mismatch(json!({
            "command": "locale-empty",
            "inputs": { "expr": args.expr, "depth": args.depth },
            "outputs": { "verdict": "Unknown" },
        }))),
    }
}
