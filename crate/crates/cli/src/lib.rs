//! Command-line front end: subcommand dispatch, file input with digests,
//! and run reports.

pub mod report;
pub mod suite;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use horncode::contact::{estimate_contact, geometric_grid, ContactOptions, ContactValue};
use horncode::mesh::{growth_exponent, marks_path, Mesh};
use horncode::normal_forms::{build_normal_form, normal_form_code, verify_against, NormalFormSpec};
use horncode::{canonicalize, code_equiv, code_from_strata, CurveSampler, InnerLipschitzCode, Rational, StratifiedSurface, Theta};
use serde_json::{json, Value};

pub use report::{InputDigest, RunReport};

pub const DEFAULT_SEED: u64 = horncode::DEFAULT_SEED;
pub const THREADS_ENV: &str = "HORNCODE_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "horncode", version, about = "Inner Lipschitz codes of surfaces: exact codes, contact and growth estimates")]
struct Cli {
    /// Seed for every sampled quantity (decimal or 0x-prefixed hex).
    #[arg(long, global = true, default_value = "0x5EED", value_parser = parse_seed)]
    seed: u64,
    /// Rendering written to standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Also write the JSON-lines report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Horn,
    Tube,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical code of a stratified surface.
    Code { strata: PathBuf },
    /// Decide equivalence of two codes (code or strata JSON).
    Equiv { a: PathBuf, b: PathBuf },
    /// Contact exponent at infinity of two curves.
    Contact {
        curve_a: String,
        curve_b: String,
        /// Annulus ratios.
        #[arg(long = "K", value_delimiter = ',', default_values_t = [2.0, 3.0, 4.0])]
        k: Vec<f64>,
        /// Radius grid `start:factor:count`.
        #[arg(long, default_value = "10:2:12")]
        grid: Grid,
    },
    /// Growth exponent of link lengths on a mesh.
    Estimate {
        #[arg(long)]
        mesh: PathBuf,
        /// Centre `x,y,z`; required for horns, the origin for tubes by default.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<Point>,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Radius grid `start:factor:count`.
        #[arg(long)]
        radii: Grid,
    },
    /// Build and verify the normal-form surface for `(θ, g, β)`.
    NormalForm {
        #[arg(long, allow_negative_numbers = true)]
        theta: i64,
        #[arg(long)]
        genus: u32,
        /// Comma-separated end exponents; empty for a closed surface.
        #[arg(long, default_value = "")]
        beta: String,
        /// Write the mesh as OFF (with a marks sidecar).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the code JSON.
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Run the reference surfaces and the full acceptance suite.
    Corpus,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed '{s}': {e}"))
}

/// Geometric grid `start:factor:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub factor: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, f, n] = parts[..] else {
            return Err(format!("expected start:factor:count, got '{s}'"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let grid = Grid {
            start: num(a)?,
            factor: num(f)?,
            count: n.trim().parse().map_err(|e| format!("'{n}': {e}"))?,
        };
        if !(grid.start > 0.0 && grid.factor > 0.0 && grid.factor != 1.0 && grid.count > 0) {
            return Err(format!("grid '{s}' needs positive start, positive factor other than 1, and count ≥ 1"));
        }
        Ok(grid)
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        geometric_grid(self.start, self.factor, self.count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl FromStr for Point {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"))).collect::<Result<_, _>>().map(Point)
    }
}

/// An error that maps to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn read_input(path: &Path, report: &mut RunReport) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    report.inputs.push(InputDigest::of(&path.display().to_string(), &bytes));
    String::from_utf8(bytes).map_err(|e| input_error(format!("{}: not UTF-8 ({e})", path.display())))
}

/// Read a code file; strata files are accepted too and turned into codes.
fn read_code(path: &Path, report: &mut RunReport) -> Result<InnerLipschitzCode, Failure> {
    let text = read_input(path, report)?;
    match InnerLipschitzCode::from_json(&text) {
        Ok(c) => Ok(c),
        Err(code_err) => match StratifiedSurface::from_json(&text) {
            Ok(s) => code_from_strata(&s).map_err(|e| input_error(format!("{}: {e}", path.display()))),
            Err(_) => Err(input_error(format!("{}: {code_err}", path.display()))),
        },
    }
}

fn parse_curve(label: &str, text: &str) -> Result<CurveSampler, Failure> {
    CurveSampler::parse(text).map_err(|e| input_error(format!("curve {label} '{text}': {e}")))
}

fn to_value<S: serde::Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn run_code(path: &Path, report: &mut RunReport) -> Result<i32, Failure> {
    let text = read_input(path, report)?;
    let surface = StratifiedSurface::from_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let code = code_from_strata(&surface).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    report.result = Some(to_value(&canonicalize(&code)));
    Ok(EXIT_OK)
}

fn run_equiv(a: &Path, b: &Path, report: &mut RunReport) -> Result<i32, Failure> {
    let (ca, cb) = (read_code(a, report)?, read_code(b, report)?);
    match code_equiv(&ca, &cb) {
        Some(w) => {
            report.result = Some(to_value(&w));
            report.message = Some("EQUIVALENT".into());
            Ok(EXIT_OK)
        }
        None => {
            report.message = Some("NOT EQUIVALENT".into());
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn run_contact(a: &str, b: &str, ks: &[f64], grid: Grid, report: &mut RunReport) -> Result<i32, Failure> {
    let (ca, cb) = (parse_curve("A", a)?, parse_curve("B", b)?);
    let est = estimate_contact(&ca, &cb, ks, &grid.values(), &ContactOptions::default()).map_err(|e| input_error(e.to_string()))?;
    let rounded = match &est.rounded {
        Some(ContactValue::Finite(r)) => json!(r.to_string()),
        Some(ContactValue::NegInfinity) => json!("-inf"),
        None => Value::Null,
    };
    let slope = if est.slope.is_finite() { json!(est.slope) } else { json!("-inf") };
    let per_k: Vec<Value> = est
        .per_k
        .iter()
        .map(|&(k, s)| json!({ "K": k, "slope": if s.is_finite() { json!(s) } else { json!(s.to_string()) } }))
        .collect();
    report.result = Some(json!({ "slope": slope, "rounded": rounded, "residual": est.residual, "per_k": per_k }));
    Ok(EXIT_OK)
}

fn run_estimate(path: &Path, at: Option<Point>, mode: Mode, grid: Grid, report: &mut RunReport) -> Result<i32, Failure> {
    let text = read_input(path, report)?;
    let ctx = |e: horncode::mesh::MeshError| input_error(format!("{}: {e}", path.display()));
    let mut mesh: Mesh<f64> = Mesh::from_off(&text).map_err(ctx)?;
    let side = marks_path(path);
    if side.exists() {
        let marks_text = read_input(&side, report)?;
        let marks = mesh.marks_from_json(&marks_text).map_err(|e| input_error(format!("{}: {e}", side.display())))?;
        mesh = mesh.with_marks(marks).map_err(ctx)?;
    }
    let centre = match (mode, at) {
        (_, Some(p)) => p.0,
        (Mode::Tube, None) => vec![0.0; mesh.dim()],
        (Mode::Horn, None) => return Err(Failure { code: EXIT_USAGE, message: "--mode horn needs --at".into() }),
    };
    if centre.len() != mesh.dim() {
        return Err(input_error(format!("--at has {} coordinates, the mesh has dimension {}", centre.len(), mesh.dim())));
    }
    let radii = grid.values();
    let est = growth_exponent(&mesh, &centre, &radii).map_err(ctx)?;
    report.result = Some(to_value(&est));
    Ok(EXIT_OK)
}

fn parse_beta(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Rational>().map_err(|e| input_error(format!("--beta '{s}': {e}"))))
        .collect()
}

fn run_normal_form(
    theta: i64,
    genus: u32,
    beta: &str,
    out: Option<&Path>,
    code_out: Option<&Path>,
    report: &mut RunReport,
) -> Result<i32, Failure> {
    let theta = Theta::from_sign(theta).map_err(|e| Failure { code: EXIT_USAGE, message: format!("--theta: {e}") })?;
    let spec = NormalFormSpec::new(theta, genus, parse_beta(beta)?).map_err(|e| input_error(e.to_string()))?;
    let nf = build_normal_form::<f64>(&spec).map_err(|e| input_error(e.to_string()))?;
    let verdict = verify_against(&spec, &nf).map_err(|e| input_error(e.to_string()))?;
    if let Some(path) = out {
        nf.mesh.write_off(path).map_err(|e| input_error(e.to_string()))?;
    }
    let code = normal_form_code(&spec);
    if let Some(path) = code_out {
        std::fs::write(path, code.to_json_pretty() + "\n").map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    let slopes: Vec<f64> = verdict.ends.iter().map(|e| e.slope).collect();
    report.result = Some(json!({
        "code": to_value(&code),
        "topology": to_value(&verdict.topology),
        "end_slopes": slopes,
        "vertices": nf.mesh.vertex_count(),
        "ambient_dimension": nf.mesh.dim(),
    }));
    let pass = verdict.passed();
    report.checks = verdict.checks;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn run_corpus(seed: u64, report: &mut RunReport) -> i32 {
    report.checks = suite::run_all(seed);
    if report.checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn dispatch(cli: &Cli, report: &mut RunReport) -> Result<i32, Failure> {
    match &cli.command {
        Command::Code { strata } => run_code(strata, report),
        Command::Equiv { a, b } => run_equiv(a, b, report),
        Command::Contact { curve_a, curve_b, k, grid } => run_contact(curve_a, curve_b, k, *grid, report),
        Command::Estimate { mesh, at, mode, radii } => run_estimate(mesh, at.clone(), *mode, *radii, report),
        Command::NormalForm { theta, genus, beta, out, code } => {
            run_normal_form(*theta, *genus, beta, out.as_deref(), code.as_deref(), report)
        }
        Command::Corpus => Ok(run_corpus(cli.seed, report)),
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// What a run should print, apart from the report itself.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: RunReport,
    pub format: Format,
    pub report_path: Option<PathBuf>,
}

impl Outcome {
    pub fn stdout(&self) -> String {
        match self.format {
            Format::Human => self.report.to_human(),
            Format::Jsonl => self.report.to_json_lines(),
        }
    }
}

/// Parse `argv` (program name first) and run the subcommand. Usage errors,
/// including `--help`, come back with exit code 2 and the clap text as the
/// message, except that help and version requests exit 0.
pub fn run(argv: &[String]) -> Outcome {
    let mut report = RunReport { command: argv.to_vec(), seed: DEFAULT_SEED, ..Default::default() };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            report.message = Some(e.render().to_string());
            report.exit_code = code;
            return Outcome { exit_code: code, report, format: Format::Human, report_path: None };
        }
    };
    report.seed = cli.seed;
    let go = |report: &mut RunReport| match dispatch(&cli, report) {
        Ok(code) => code,
        Err(f) => {
            report.message = Some(format!("error: {}", f.message));
            f.code
        }
    };
    let code = match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(|| go(&mut report)),
        None => go(&mut report),
    };
    report.exit_code = code;
    Outcome { exit_code: code, report, format: cli.format, report_path: cli.report.clone() }
}

/// Exit code and report for `argv`.
pub fn run_command(argv: &[String]) -> (i32, RunReport) {
    let o = run(argv);
    (o.exit_code, o.report)
}

/// Checks grouped by the criterion number that prefixes their names.
pub fn checks_by_criterion(report: &RunReport) -> BTreeMap<u8, Vec<&horncode::normal_forms::Check>> {
    let mut out: BTreeMap<u8, Vec<_>> = BTreeMap::new();
    for c in &report.checks {
        if let Some(id) = c.name.split('.').next().and_then(|p| p.parse().ok()) {
            out.entry(id).or_default().push(c);
        }
    }
    out
}
