//! `fqsp` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical failure
//! (search ceiling, failed verification, non-convergence). Log verbosity is
//! read from `RUST_LOG`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::approx::compare::{compare_methods, crossover_beta, to_csv};
use crate::approx::linear::linear_extension_series;
use crate::approx::taylor::taylor_fourier_series;
use crate::approx::{analytic_extension_series, ApproxOptions, ApproxResult, ChiRule, Method, TargetFunction};
use crate::complement::{complement_pair, laurent_roots, build_g, roots_csv, unitarity_error, ComplementPair};
use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, DEFAULT_GRID_POINTS};
use crate::pulses::{synthesize_pulses, verify_complement, verify_pulses, PulseSequence};
use crate::qsim::{eigendecompose, parse_hamiltonian, run_pipeline, HermitianOperator, MatrixFile, PipelineOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fqsp", version, about = "Fourier-series quantum signal processing toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier approximation of a target function
    Approx(ApproxArgs),
    /// Complementary series h with |g|^2 + |h|^2 = 1
    Complement(ComplementArgs),
    /// Pulse sequence realizing a complement pair
    Pulses(PulsesArgs),
    /// End-to-end block encoding of f[H] on a dense simulator
    Simulate(SimulateArgs),
    /// Query-count table of the three approximation routes
    Compare(CompareArgs),
    /// Check a pulse sequence against a series
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Taylor,
    Linear,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Analytic => Method::AnalyticExtension,
            MethodArg::Taylor => Method::TaylorFourier,
            MethodArg::Linear => Method::LinearExtension,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    /// exp(-beta (x + 1))
    Exp,
    /// power series with --coefficients
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiRuleArg {
    Optimal,
    Normalized,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output path; standard output when absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    #[arg(long, default_value_t = crate::approx::DEFAULT_Q_MAX)]
    pub q_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    #[arg(long, value_enum, default_value = "exp")]
    pub function: FunctionKind,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Real power-series coefficients a_0,a_1,... for --function poly
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coefficients: Vec<f64>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "analytic")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "optimal")]
    pub chi_rule: ChiRuleArg,
}

impl FunctionArgs {
    fn target(&self) -> Result<TargetFunction> {
        match self.function {
            FunctionKind::Exp => TargetFunction::exponential(self.beta),
            FunctionKind::Poly => {
                TargetFunction::power_series(self.coefficients.iter().map(|&a| Complex64::new(a, 0.0)).collect())
            }
        }
    }

    fn options(&self, common: &Common) -> ApproxOptions {
        ApproxOptions {
            grid_points: common.grid_points,
            q_max: common.q_max,
            chi_rule: match self.chi_rule {
                ChiRuleArg::Optimal => ChiRule::QueryOptimal,
                ChiRuleArg::Normalized => ChiRule::Normalized,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Margin of the Taylor route (default: balanced for the exponential)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Faithful half-width of the linear extension
    #[arg(long, default_value_t = crate::approx::linear::DEFAULT_X0)]
    pub x0: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ComplementArgs {
    /// Approximation result or bare series (JSON)
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    pub margin: f64,
    /// Also write the roots of 1 - |g|^2 as CSV
    #[arg(long)]
    pub roots: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct PulsesArgs {
    /// Complement pair (JSON with g and h)
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Built-in operator: diag:l1,l2,..., random_hermitian:d or tfim:n
    #[arg(long, conflicts_with = "matrix")]
    pub hamiltonian: Option<String>,
    /// Matrix file {"dim", "entries"}
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Map a spectral interval onto the faithful window: `auto` or `lo,hi`
    #[arg(long, allow_hyphen_values = true)]
    pub remap: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub margin: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub betas: Vec<f64>,
    #[arg(long = "eps", value_delimiter = ',', required = true)]
    pub eps_list: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub pulses: PathBuf,
    /// Series, approximation result or complement pair (JSON)
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[command(flatten)]
    pub common: Common,
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = hint(&e) {
                eprintln!("{hint}");
            }
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::NormTooLarge(_) => Some(
            "hint: pass --remap auto (or --remap lo,hi) to map the spectrum onto the faithful window \
             with t = x0 / half_width and Lambda = -x0 * center / half_width",
        ),
        Error::Stage { source, .. } => hint(source),
        _ => None,
    }
}

fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Approx(a) => cmd_approx(a),
        Command::Complement(a) => cmd_complement(a),
        Command::Pulses(a) => cmd_pulses(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Accepts a bare series, an approximation result (`series`) or a pair (`g`).
fn read_series(path: &Path) -> Result<FourierSeries> {
    let value = read_json(path)?;
    let inner = match (value.get("series"), value.get("g")) {
        (Some(s), _) => s.clone(),
        (None, Some(g)) => g.clone(),
        _ => value,
    };
    serde_json::from_value(inner).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("--eps must lie in (0, 1), got {eps}")))
    }
}

fn cmd_approx(a: &ApproxArgs) -> Result<i32> {
    check_eps(a.function.eps)?;
    let f = a.function.target()?;
    let opts = a.function.options(&a.common);
    let eps = a.function.eps;
    let result: ApproxResult = match a.function.method {
        MethodArg::Analytic => analytic_extension_series(&f, eps, &opts)?,
        MethodArg::Taylor => taylor_fourier_series(&f, eps, a.delta, &opts)?,
        MethodArg::Linear => linear_extension_series(&f, a.x0, eps, &opts)?,
    };
    emit_json(&a.common.output, &result)?;
    if result.eps_measured <= eps {
        Ok(EXIT_OK)
    } else {
        eprintln!("measured error {:e} exceeds eps = {eps:e}", result.eps_measured);
        Ok(EXIT_NUMERICAL)
    }
}

fn cmd_complement(a: &ComplementArgs) -> Result<i32> {
    let g = read_series(&a.input)?;
    let pair = complement_pair(&g, a.margin)?;
    if let Some(path) = &a.roots {
        let roots = laurent_roots(&build_g(&pair.g))?;
        fs::write(path, roots_csv(&roots))?;
    }
    emit_json(&a.common.output, &pair)?;
    let defect = unitarity_error(&pair.g, &pair.h, a.common.grid_points);
    if defect <= 1e-8 {
        Ok(EXIT_OK)
    } else {
        eprintln!("unitarity defect {defect:e} exceeds 1e-8");
        Ok(EXIT_NUMERICAL)
    }
}

fn cmd_pulses(a: &PulsesArgs) -> Result<i32> {
    let pair: ComplementPair = serde_json::from_value(read_json(&a.input)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", a.input.display())))?;
    let pulses = synthesize_pulses(&pair.g, &pair.h)?;
    emit_json(&a.common.output, &pulses)?;
    let g_err = verify_pulses(&pulses, &pair.g, a.common.grid_points).max_abs_error;
    let h_err = verify_complement(&pulses, &pair.h, a.common.grid_points).max_abs_error;
    if g_err.max(h_err) <= 1e-8 {
        Ok(EXIT_OK)
    } else {
        eprintln!("reconstruction error {:e} exceeds 1e-8", g_err.max(h_err));
        Ok(EXIT_NUMERICAL)
    }
}

fn parse_remap(text: &str, h: &HermitianOperator) -> Result<(f64, f64)> {
    if text == "auto" {
        let e = eigendecompose(h);
        let (lo, hi) = (e.lambdas[0], e.lambdas[e.dim() - 1]);
        if lo == hi {
            return Err(Error::InvalidInput("degenerate spectrum; give --remap lo,hi explicitly".into()));
        }
        return Ok((lo, hi));
    }
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [lo, hi] => {
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad --remap bound '{s}'")))
            };
            Ok((parse(lo)?, parse(hi)?))
        }
        _ => Err(Error::InvalidInput(format!("--remap expects auto or lo,hi, got '{text}'"))),
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<i32> {
    check_eps(a.function.eps)?;
    let h = match (&a.hamiltonian, &a.matrix) {
        (Some(text), None) => parse_hamiltonian(text, a.seed)?,
        (None, Some(path)) => {
            let file: MatrixFile = serde_json::from_value(read_json(path)?)?;
            HermitianOperator::new(file.to_matrix()?)?
        }
        _ => return Err(Error::InvalidInput("give exactly one of --hamiltonian or --matrix".into())),
    };
    let f = a.function.target()?;
    let opts = PipelineOptions {
        approx: a.function.options(&a.common),
        remap: a.remap.as_deref().map(|s| parse_remap(s, &h)).transpose()?,
        margin: a.margin,
    };
    let result = run_pipeline(&h, &f, a.function.eps, a.function.method.into(), &opts)?;
    emit_json(&a.common.output, &result)?;
    if result.passed() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "block misses tolerance: err_vs_series = {:e}, err_vs_target = {:e}",
            result.err_vs_series, result.err_vs_target
        );
        Ok(EXIT_NUMERICAL)
    }
}

fn cmd_compare(a: &CompareArgs) -> Result<i32> {
    for &eps in &a.eps_list {
        check_eps(eps)?;
    }
    if let Some(b) = a.betas.iter().find(|b| !(**b > 0.0)) {
        return Err(Error::InvalidInput(format!("betas must be positive, got {b}")));
    }
    let opts = ApproxOptions {
        grid_points: a.common.grid_points,
        q_max: a.common.q_max,
        chi_rule: ChiRule::QueryOptimal,
    };
    let rows = compare_methods(&a.betas, &a.eps_list, &opts);
    emit(&a.common.output, &to_csv(&rows))?;
    for note in rows.iter().flat_map(|r| r.notes()) {
        eprintln!("note: {note}");
    }
    for &eps in &a.eps_list {
        match crossover_beta(&rows, eps) {
            Some(b) => eprintln!("crossover at eps = {eps}: beta* = {b}"),
            None => eprintln!("crossover at eps = {eps}: none in range"),
        }
    }
    if rows.iter().any(|r| r.is_complete()) {
        Ok(EXIT_OK)
    } else {
        eprintln!("no row completed for all methods");
        Ok(EXIT_NUMERICAL)
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let pulses: PulseSequence = serde_json::from_value(read_json(&a.pulses)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", a.pulses.display())))?;
    let g = read_series(&a.series)?;
    if 2 * g.half_order() != pulses.q() {
        return Err(Error::InvalidInput(format!(
            "series has q = {} but the pulse sequence has q = {}",
            g.q(),
            pulses.q()
        )));
    }
    let report = verify_pulses(&pulses, &g, a.common.grid_points);
    emit_json(&a.common.output, &report)?;
    if report.max_abs_error <= a.tolerance {
        Ok(EXIT_OK)
    } else {
        eprintln!("max error {:e} exceeds {:e}", report.max_abs_error, a.tolerance);
        Ok(EXIT_NUMERICAL)
    }
}
