//! `hermcount`: exact counting of integral representations by indefinite
//! hermitian forms, local densities, and asymptotic coefficient checks.
//!
//! Subcommands: `count`, `density`, `coefficient`, `verify`, `sweep`.
//! Machine output (JSON/CSV) goes to stdout or `--out`; short human
//! summaries go to stderr. Exit codes: 0 success, 2 input error, 3 budget
//! or overflow guard, 4 non-stabilized density.

mod descriptor;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use hermcount_core::asymptotics::{self, AsymptoticPrediction};
use hermcount_core::counting::{self, CountMode, CountResult};
use hermcount_core::density;
use hermcount_core::forms::HermitianForm;
use hermcount_core::numeric::{decimal_string, Precision};
use hermcount_core::{Budget, Error as CoreError};

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { message, code: 2 }
    }

    fn internal(message: String) -> Self {
        CliError { message, code: 1 }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::BudgetExceeded { .. } | CoreError::Overflow(_) => 3,
            CoreError::NotStabilized { .. } => 4,
            _ => 2,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "hermcount",
    version,
    about = "Exact representation counts, local densities and asymptotics for hermitian forms of signature (n,1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Globals {
    /// Worker threads (default: all cores; env HERMCOUNT_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Element budget for enumerations (env HERMCOUNT_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Decimal digits of working precision (env HERMCOUNT_DIGITS)
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Write the JSON/CSV document to this file as well as stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Slab,
    Ball,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact N_t (slab) or N~_s (ball) with per-shell breakdown
    Count {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        k: u64,
        /// Bound t (slab) or s (ball); integer, decimal or p/q rational
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "slab")]
        mode: ModeArg,
        /// Include the per-shell breakdown in the JSON output
        #[arg(long)]
        shells: bool,
        /// Write the per-shell breakdown as CSV to this path
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Also run the independent brute-force oracle and compare
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        globals: Globals,
    },
    /// p-adic density at one prime, or the truncated Euler product
    Density {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        k: u64,
        /// Single prime; omit for the product over all p <= pmax
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        #[command(flatten)]
        globals: Globals,
    },
    /// The asymptotic main coefficient C and its ingredients
    Coefficient {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        /// Spectral parameter nu1 (optional; 0 < nu1 < rho)
        #[arg(long)]
        nu1: Option<f64>,
        /// Error-exponent epsilon (default 0 over R, 1/100 over C)
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        globals: Globals,
    },
    /// Count at several bounds, fit the growth law, compare to prediction
    Verify {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        k: u64,
        /// Comma-separated ascending bounds, e.g. 50,100,200
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "slab")]
        mode: ModeArg,
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        #[arg(long)]
        nu1: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        /// Write the series as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        globals: Globals,
    },
    /// Emit the (bound, count, prediction, ratio) series as CSV or JSON
    Sweep {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        k: u64,
        /// Comma-separated ascending bounds
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "slab")]
        mode: ModeArg,
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        globals: Globals,
    },
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

struct Settings {
    budget: Budget,
    precision: Precision,
}

fn apply_globals(globals: &Globals) -> Result<Settings, CliError> {
    let threads = globals
        .threads
        .or_else(|| env_u64("HERMCOUNT_THREADS").map(|v| v as usize));
    if let Some(n) = threads {
        // ignore failure when a pool is already installed (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let budget = globals
        .budget
        .or_else(|| env_u64("HERMCOUNT_BUDGET"))
        .map(Budget::new)
        .unwrap_or_default();
    let precision = globals
        .digits
        .or_else(|| env_u64("HERMCOUNT_DIGITS").map(|v| v as u32))
        .map(Precision::new)
        .unwrap_or_default();
    Ok(Settings { budget, precision })
}

/// Parses "200", "1.5" or "7/4" as an exact nonnegative rational.
fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let value = if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .parse()
            .map_err(|_| CliError::input(format!("invalid rational {s:?}")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| CliError::input(format!("invalid rational {s:?}")))?;
        if d.is_zero() {
            return Err(CliError::input(format!("zero denominator in {s:?}")));
        }
        BigRational::new(n, d)
    } else if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let joined: BigInt = format!("{int}{frac}")
            .parse()
            .map_err(|_| CliError::input(format!("invalid decimal {s:?}")))?;
        BigRational::new(joined, BigInt::from(10u32).pow(digits))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|_| CliError::input(format!("invalid number {s:?}")))?;
        BigRational::from_integer(n)
    };
    if value.is_negative() {
        return Err(CliError::input(format!("bound must be nonnegative: {s:?}")));
    }
    Ok(value)
}

fn parse_bound_list(s: &str) -> Result<Vec<BigRational>, CliError> {
    let parts: Vec<&str> = s.split(',').filter(|p| !p.trim().is_empty()).collect();
    if parts.is_empty() {
        return Err(CliError::input("the bound list is empty".into()));
    }
    let bounds: Vec<BigRational> = parts
        .iter()
        .map(|p| parse_rational(p))
        .collect::<Result<_, _>>()?;
    for w in bounds.windows(2) {
        if w[0] >= w[1] {
            return Err(CliError::input(
                "the bound list must be strictly ascending".into(),
            ));
        }
    }
    Ok(bounds)
}

fn emit_document(globals: &Globals, doc: &str) -> Result<(), CliError> {
    println!("{doc}");
    if let Some(path) = &globals.out {
        std::fs::write(path, format!("{doc}\n"))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable outputs")
}

fn run_count_mode(
    q: &HermitianForm,
    k: u64,
    bound: &BigRational,
    mode: ModeArg,
    budget: Budget,
) -> Result<CountResult, CliError> {
    Ok(match mode {
        ModeArg::Slab => counting::count_slab(q, k, bound, budget)?,
        ModeArg::Ball => counting::count_ball(q, k, bound, budget)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_count(
    form: &Path,
    k: u64,
    t: &str,
    mode: ModeArg,
    shells: bool,
    emit: &Option<PathBuf>,
    oracle: bool,
    globals: &Globals,
) -> Result<(), CliError> {
    let settings = apply_globals(globals)?;
    let q = descriptor::load_form(form)?;
    let bound = parse_rational(t)?;
    let result = run_count_mode(&q, k, &bound, mode, settings.budget)?;
    let mut out = output::CountOutput::new(&result, shells);
    if oracle {
        let oracle_result = match mode {
            ModeArg::Slab => counting::count_slab_oracle(&q, k, &bound, settings.budget)?,
            ModeArg::Ball => counting::count_ball_oracle(&q, k, &bound, settings.budget)?,
        };
        out.oracle_total = Some(output::count_value(oracle_result.total));
        out.oracle_matches = Some(oracle_result.total == result.total);
        if oracle_result.total != result.total {
            eprintln!(
                "oracle mismatch: grouped {} vs direct {}",
                result.total, oracle_result.total
            );
            return Err(CliError::internal(
                "count_slab and count_slab_oracle disagree".into(),
            ));
        }
    }
    if let Some(path) = emit {
        std::fs::write(path, output::shells_csv(&result))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    eprintln!(
        "{} count at bound {}: {} solutions (norm bound {})",
        if mode == ModeArg::Slab { "slab" } else { "ball" },
        bound,
        result.total,
        result.norm_bound
    );
    emit_document(globals, &to_json(&out))
}

fn run_density(
    form: &Path,
    k: u64,
    p: Option<u64>,
    pmax: u64,
    jmax: u32,
    globals: &Globals,
) -> Result<(), CliError> {
    let settings = apply_globals(globals)?;
    let q = descriptor::load_form(form)?;
    let digits = settings.precision.digits;
    match p {
        Some(p) => {
            let r = density::local_density(&q, k, p, jmax, settings.budget)?;
            if !r.stabilized {
                eprintln!("density at p = {p} did not stabilize by j_max = {jmax}");
                let doc = to_json(&output::PrimeFactorOutput::new(&r, digits));
                emit_document(globals, &doc)?;
                return Err(CliError {
                    message: format!("local density at p = {p} did not stabilize"),
                    code: 4,
                });
            }
            eprintln!(
                "delta_{p} = {} (stabilized, trace depth {})",
                decimal_string(r.value.as_ref().unwrap(), 12),
                r.trace.len()
            );
            emit_document(globals, &to_json(&output::PrimeFactorOutput::new(&r, digits)))
        }
        None => {
            let prod = density::local_density_product(&q, k, pmax, jmax, settings.budget)?;
            eprintln!(
                "delta(Q,-{k}) truncated at {pmax}: {}",
                decimal_string(&prod.value, 12)
            );
            emit_document(globals, &to_json(&output::DensityProductOutput::new(&prod, digits)))
        }
    }
}

fn build_prediction(
    q: &HermitianForm,
    k: u64,
    pmax: u64,
    jmax: u32,
    nu1: Option<f64>,
    eps: Option<f64>,
    settings: &Settings,
) -> Result<(AsymptoticPrediction, density::LocalDensityProduct), CliError> {
    let delta = density::local_density_product(q, k, pmax, jmax, settings.budget)?;
    let pred = asymptotics::main_coefficient(q, k, &delta, nu1, eps, settings.precision)?;
    Ok((pred, delta))
}

fn run_coefficient(
    form: &Path,
    k: u64,
    pmax: u64,
    jmax: u32,
    nu1: Option<f64>,
    eps: Option<f64>,
    globals: &Globals,
) -> Result<(), CliError> {
    let settings = apply_globals(globals)?;
    let q = descriptor::load_form(form)?;
    let (pred, delta) = build_prediction(&q, k, pmax, jmax, nu1, eps, &settings)?;
    let ball = asymptotics::ball_coefficient(&pred, settings.precision)?;
    let out = output::CoefficientOutput::new(&pred, &ball, &delta, k, settings.precision.digits);
    eprintln!(
        "C = {} (2 rho = {}, tau = {:.4})",
        decimal_string(&pred.coefficient, 8),
        pred.two_rho,
        pred.tau
    );
    emit_document(globals, &to_json(&out))
}

type SeriesData = (Vec<output::SeriesRow>, Vec<(BigRational, u128)>);

fn series_rows(
    q: &HermitianForm,
    k: u64,
    bounds: &[BigRational],
    mode: ModeArg,
    pred: &AsymptoticPrediction,
    ball_coeff: &BigRational,
    budget: Budget,
) -> Result<SeriesData, CliError> {
    let mut rows = Vec::new();
    let mut observations = Vec::new();
    for bound in bounds {
        let result = run_count_mode(q, k, bound, mode, budget)?;
        let predicted = match mode {
            ModeArg::Slab => asymptotics::predicted_count(pred, bound),
            ModeArg::Ball => ball_coeff * bound.pow(pred.two_rho as i32),
        };
        let count_rat = BigRational::from_integer(BigInt::from(result.total));
        // empirical coefficient N / bound^(2 rho); converges to C (slab)
        // or to the ball coefficient
        let power = bound.pow(pred.two_rho as i32);
        let ratio = if power.is_zero() {
            BigRational::zero()
        } else {
            &count_rat / &power
        };
        rows.push(output::SeriesRow {
            bound: format!("{bound}"),
            count: output::count_value(result.total),
            prediction: decimal_string(&predicted, 6),
            ratio: decimal_string(&ratio, 6),
        });
        observations.push((bound.clone(), result.total));
    }
    Ok((rows, observations))
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    form: &Path,
    k: u64,
    t: &str,
    mode: ModeArg,
    pmax: u64,
    jmax: u32,
    nu1: Option<f64>,
    eps: Option<f64>,
    csv: &Option<PathBuf>,
    globals: &Globals,
) -> Result<(), CliError> {
    let settings = apply_globals(globals)?;
    let q = descriptor::load_form(form)?;
    let bounds = parse_bound_list(t)?;
    let (pred, delta) = build_prediction(&q, k, pmax, jmax, nu1, eps, &settings)?;
    let ball = asymptotics::ball_coefficient(&pred, settings.precision)?;
    let (rows, observations) =
        series_rows(&q, k, &bounds, mode, &pred, &ball, settings.budget)?;
    // residual statistics compare against the leading term of the chosen
    // mode: C t^(2 rho) for slabs, C (2a)^(-rho) s^(2 rho) for balls
    let fit_pred = match mode {
        ModeArg::Slab => pred.clone(),
        ModeArg::Ball => {
            let mut p = pred.clone();
            p.coefficient = ball.clone();
            p
        }
    };
    let fit = asymptotics::fit(&observations, Some(&fit_pred))?;
    let mode_tag = match mode {
        ModeArg::Slab => CountMode::Slab,
        ModeArg::Ball => CountMode::Ball,
    };
    if let Some(path) = csv {
        std::fs::write(path, output::series_csv(&rows, mode_tag))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    eprintln!(
        "fitted exponent {:.4} (expected {}), coefficient {:.6}",
        fit.exponent, pred.two_rho, fit.coefficient
    );
    let out = output::VerifyOutput {
        mode: if mode == ModeArg::Slab { "slab" } else { "ball" },
        fit: output::FitOutput::new(&fit),
        prediction: output::CoefficientOutput::new(
            &pred,
            &ball,
            &delta,
            k,
            settings.precision.digits,
        ),
        rows,
    };
    emit_document(globals, &to_json(&out))
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    form: &Path,
    k: u64,
    t: &str,
    mode: ModeArg,
    pmax: u64,
    jmax: u32,
    format: FormatArg,
    globals: &Globals,
) -> Result<(), CliError> {
    let settings = apply_globals(globals)?;
    let q = descriptor::load_form(form)?;
    let bounds = parse_bound_list(t)?;
    let (pred, _delta) = build_prediction(&q, k, pmax, jmax, None, None, &settings)?;
    let ball = asymptotics::ball_coefficient(&pred, settings.precision)?;
    let (rows, _) = series_rows(&q, k, &bounds, mode, &pred, &ball, settings.budget)?;
    let mode_tag = match mode {
        ModeArg::Slab => CountMode::Slab,
        ModeArg::Ball => CountMode::Ball,
    };
    eprintln!("sweep over {} bounds", rows.len());
    match format {
        FormatArg::Csv => {
            let doc = output::series_csv(&rows, mode_tag);
            print!("{doc}");
            if let Some(path) = &globals.out {
                std::fs::write(path, &doc).map_err(|e| {
                    CliError::input(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(())
        }
        FormatArg::Json => {
            let out = output::SweepOutput {
                mode: if mode == ModeArg::Slab { "slab" } else { "ball" },
                rows,
            };
            emit_document(globals, &to_json(&out))
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Count {
            form,
            k,
            t,
            mode,
            shells,
            emit,
            oracle,
            globals,
        } => run_count(form, *k, t, *mode, *shells, emit, *oracle, globals),
        Command::Density {
            form,
            k,
            p,
            pmax,
            jmax,
            globals,
        } => run_density(form, *k, *p, *pmax, *jmax, globals),
        Command::Coefficient {
            form,
            k,
            pmax,
            jmax,
            nu1,
            eps,
            globals,
        } => run_coefficient(form, *k, *pmax, *jmax, *nu1, *eps, globals),
        Command::Verify {
            form,
            k,
            t,
            mode,
            pmax,
            jmax,
            nu1,
            eps,
            csv,
            globals,
        } => run_verify(form, *k, t, *mode, *pmax, *jmax, *nu1, *eps, csv, globals),
        Command::Sweep {
            form,
            k,
            t,
            mode,
            pmax,
            jmax,
            format,
            globals,
        } => run_sweep(form, *k, t, *mode, *pmax, *jmax, *format, globals),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
