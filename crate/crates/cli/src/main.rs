use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use loewner::choquet::{caratheodory_decompose, concave_envelope, GridFunction, Polytope};
use loewner::hermitian::Interval;
use loewner::io::{pairs_to_csv, read_json, read_matrix, read_pairs};
use loewner::kubo_ando::{evaluate_connection, ConnectionSpec};
use loewner::lab::{check, CheckOptions, Property};
use loewner::representation::{default_lambda_grid, fit_measure, log_spaced, synthesize, MeasureInf, RadonMeasure01};
use loewner::suite::{run_report, validate_config, RunConfig, DEFAULT_SEED};
use loewner::{func, Error};

#[derive(Parser)]
#[command(name = "loewner", version, about = "Operator monotone functions, Löwner matrices and Kubo-Ando means")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// PSD tolerance relative to max(1, ‖M‖).
    #[arg(long, global = true, default_value_t = loewner::hermitian::DEFAULT_PSD_TOL)]
    tol: f64,
    /// Trial count override.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized Löwner-matrix / matrix-inequality check of a catalog function.
    Check {
        /// Catalog name, e.g. sqrt, power:0.25, kernel:0.5.
        function: String,
        /// monotone | convex | direct | concave
        #[arg(long, default_value = "monotone")]
        property: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Open interval as lo,hi.
        #[arg(long, default_value = "0.1,10")]
        interval: String,
    },
    /// Fit a measure on [0,1] to samples (CSV t,f(t)).
    Fit {
        samples: PathBuf,
        /// Grid size: {0,1} plus log-spaced interior points.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Enforce total mass.
        #[arg(long)]
        mass: Option<f64>,
    },
    /// Sample the function of a measure (JSON) on a log-spaced grid.
    Synth {
        measure: PathBuf,
        /// Sample range and count as lo,hi,n.
        #[arg(long, default_value = "0.001,1000,100")]
        points: String,
    },
    /// Evaluate a Kubo-Ando connection on two positive definite matrices.
    Mean {
        a: PathBuf,
        b: PathBuf,
        /// arithmetic | harmonic | geometric:N | path to a measure JSON
        #[arg(long, default_value = "geometric:200")]
        spec: String,
    },
    /// Least concave majorant of CSV samples x,y.
    Envelope { input: PathBuf },
    /// Convex decomposition of a point over polytope vertices.
    Caratheodory {
        polytope: PathBuf,
        /// Comma-separated coordinates or a JSON file holding an array.
        point: String,
    },
    /// Run the full verification suite.
    Report,
}

fn parse_reals(text: &str, what: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::usage(format!("{what}: '{s}': {e}"))))
        .collect()
}

fn parse_interval(text: &str) -> Result<Interval, Error> {
    match parse_reals(text, "--interval")?.as_slice() {
        [lo, hi] => Interval::new(*lo, *hi),
        _ => Err(Error::usage("--interval expects lo,hi")),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::usage(format!("{}: cannot write: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            let newline = if text.ends_with('\n') { "" } else { "\n" };
            match write!(stdout, "{text}{newline}").and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::usage(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialise")
}

fn read_measure(path: &Path) -> Result<RadonMeasure01, Error> {
    let m: RadonMeasure01 = read_json(path)?;
    m.validate()?;
    Ok(m)
}

fn resolve_spec(name: &str) -> Result<ConnectionSpec, Error> {
    match name {
        "arithmetic" => Ok(ConnectionSpec::arithmetic()),
        "harmonic" => Ok(ConnectionSpec::harmonic()),
        _ if name.starts_with("geometric:") => {
            let n = name["geometric:".len()..]
                .parse::<usize>()
                .map_err(|e| Error::usage(format!("spec '{name}': {e}")))?;
            ConnectionSpec::geometric_quadrature(n)
        }
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(Error::usage(format!(
                    "unknown spec '{path}'; expected arithmetic, harmonic, geometric:N or a measure file"
                )));
            }
            let v: Value = read_json(p)?;
            if v.get("alpha").is_some() || v.get("beta").is_some() {
                let spec: ConnectionSpec = serde_json::from_value(v).map_err(|e| Error::usage(format!("{path}: {e}")))?;
                spec.validate()?;
                Ok(spec)
            } else {
                let m: MeasureInf = serde_json::from_value(v).map_err(|e| Error::usage(format!("{path}: {e}")))?;
                ConnectionSpec::try_from(m)
            }
        }
    }
}

fn config(common: &Common) -> RunConfig {
    RunConfig { seed: common.seed, tol: common.tol, trials: common.trials }
}

/// Runs the command, returning the exit code for a completed run.
fn run(cli: &Cli) -> Result<u8, Error> {
    let c = &cli.common;
    let format = |default: Format| c.format.unwrap_or(default);
    match &cli.command {
        Command::Check { function, property, order, interval } => {
            let cfg = config(c);
            validate_config(&cfg)?;
            let f = func::lookup(function)?;
            let prop = Property::parse(property)?;
            let iv = parse_interval(interval)?;
            let opts = CheckOptions { tol: c.tol, ..CheckOptions::default() };
            let v = check(prop, &f, *order, iv, c.trials.unwrap_or(100), c.seed, &opts)?;
            let body = json!({
                "tool": "loewner",
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg,
                "function": f.name(),
                "interval": [iv.lo(), iv.hi()],
                "verdict": v,
            });
            emit(&c.out, &pretty(&body))?;
            Ok(if v.passed() { 0 } else { 1 })
        }
        Command::Fit { samples, grid, mass } => {
            let data = read_pairs(samples)?;
            if *grid < 3 {
                return Err(Error::usage("--grid must be at least 3"));
            }
            let fit = fit_measure(&data, &default_lambda_grid(*grid), *mass)?;
            let text = match format(Format::Json) {
                Format::Json => pretty(&json!({
                    "atoms": fit.measure.atoms,
                    "residual": fit.residual,
                })),
                Format::Csv => {
                    let pairs: Vec<(f64, f64)> = fit.measure.atoms.iter().map(|a| (a.lambda, a.w)).collect();
                    pairs_to_csv(("lambda", "w"), &pairs)
                }
            };
            emit(&c.out, &text)?;
            Ok(0)
        }
        Command::Synth { measure, points } => {
            let mu = read_measure(measure)?;
            let spec = parse_reals(points, "--points")?;
            let (lo, hi, n) = match spec.as_slice() {
                [lo, hi, n] if *n >= 2.0 && n.fract() == 0.0 && *lo > 0.0 && hi > lo => (*lo, *hi, *n as usize),
                _ => return Err(Error::usage("--points expects lo,hi,n with 0 < lo < hi and n ≥ 2")),
            };
            let f = synthesize(&mu);
            let pairs: Vec<(f64, f64)> = log_spaced(lo, hi, n).into_iter().map(|t| (t, f.eval(t))).collect();
            let text = match format(Format::Csv) {
                Format::Csv => pairs_to_csv(("t", "f"), &pairs),
                Format::Json => pretty(&json!({ "samples": pairs })),
            };
            emit(&c.out, &text)?;
            Ok(0)
        }
        Command::Mean { a, b, spec } => {
            let spec = resolve_spec(spec)?;
            let (a, b) = (read_matrix(a)?, read_matrix(b)?);
            let m = evaluate_connection(&spec, &a, &b)?;
            if format(Format::Json) == Format::Csv {
                return Err(Error::usage("mean writes JSON only"));
            }
            emit(&c.out, &loewner::io::matrix_to_json(&m))?;
            Ok(0)
        }
        Command::Envelope { input } => {
            let g = GridFunction::from_pairs(&read_pairs(input)?)?;
            let env = concave_envelope(&g);
            let text = match format(Format::Csv) {
                Format::Csv => pairs_to_csv(("x", "y"), &env.pairs()),
                Format::Json => pretty(&json!({ "xs": env.xs(), "ys": env.ys() })),
            };
            emit(&c.out, &text)?;
            Ok(0)
        }
        Command::Caratheodory { polytope, point } => {
            let poly: Polytope = read_json(polytope)?;
            poly.validate()?;
            let x: Vec<f64> = if Path::new(point).exists() {
                read_json(Path::new(point))?
            } else {
                parse_reals(point, "point")?
            };
            match caratheodory_decompose(&x, &poly, c.tol) {
                Ok(w) => {
                    let weights: Vec<Value> = w.iter().map(|(i, w)| json!({ "vertex": i, "weight": w })).collect();
                    emit(&c.out, &pretty(&json!({ "weights": weights })))?;
                    Ok(0)
                }
                Err(Error::Infeasible { message, normal, offset }) => {
                    let cert = json!({ "infeasible": message, "normal": normal, "offset": offset });
                    emit(&c.out, &pretty(&cert))?;
                    Err(Error::usage(message))
                }
                Err(e) => Err(e),
            }
        }
        Command::Report => {
            let cfg = config(c);
            validate_config(&cfg)?;
            let report = run_report(&cfg);
            if format(Format::Json) == Format::Csv {
                return Err(Error::usage("report writes JSON only"));
            }
            emit(&c.out, &report.to_json())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("loewner: {e}");
            if let Error::Numerical { diagnostics, .. } = &e {
                for (k, v) in diagnostics {
                    eprintln!("  {k} = {v:e}");
                }
            }
            ExitCode::from(match e {
                Error::Usage(_) | Error::Infeasible { .. } => 2,
                Error::Numerical { .. } => 3,
            })
        }
    }
}
