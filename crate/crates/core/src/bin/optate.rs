use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use optate::costmodel::cycles::{CycleModel, Profile};
use optate::costmodel::report::cost_report;
use optate::curve::G1Point;
use optate::error::Error;
use optate::pairing::{check_inputs, miller_loop, optimal_ate};
use optate::params::{derive_params_with, reference_params, BnParams, DeriveOptions, ParamsJson, PointJson};
use optate::selftest::{run_selftest, Level};
use optate::tower::Fp12;
use optate::vectors::{self, fp12_to_hex, VectorFile};

const PARAMS_ENV: &str = "PAIRING_PARAMS";

#[derive(Parser)]
#[command(name = "optate", version, about = "Optimal Ate pairing on BN curves, with a cost model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive, validate and print curve parameters as JSON.
    Params {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "reference", required_unless_present = "reference")]
        t: Option<i64>,
        /// Curve constant b; searched when omitted.
        #[arg(long, allow_hyphen_values = true, requires = "t")]
        b: Option<i64>,
        /// The 254-bit reference curve.
        #[arg(long, alias = "paper")]
        reference: bool,
    },
    /// Compute e(Q, P) for hex-encoded points.
    Pair {
        #[command(flatten)]
        curve: CurveArgs,
        /// G1 point: x y.
        #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
        p: Vec<String>,
        /// G2 point: x0 x1 y0 y1.
        #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], required = true)]
        q: Vec<String>,
        /// Print the Miller loop output before final exponentiation.
        #[arg(long)]
        miller_only: bool,
        /// Check that the result is a nontrivial r-th root of unity.
        #[arg(long, conflicts_with = "miller_only")]
        verify: bool,
    },
    /// Run the built-in consistency checks.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
    /// Generate or replay a seeded test-vector file.
    Vectors {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 10, conflicts_with = "replay")]
        count: usize,
        #[arg(long, default_value_t = 0, conflicts_with = "replay")]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long, conflicts_with = "replay")]
        out: Option<PathBuf>,
        /// Recompute every entry of an existing file.
        #[arg(long, value_name = "FILE")]
        replay: Option<PathBuf>,
    },
    /// Operation counts and predicted cost of one function on one architecture.
    Cost {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        arch: Profile,
        /// Function id, e.g. fp6_mul or pairing.
        #[arg(long, default_value = "pairing")]
        function: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Cycle model JSON replacing the built-in constants.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed for the (count-irrelevant) random operands.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Curve selection shared by the computing commands. `PAIRING_PARAMS`, when
/// set, names a params.json that takes precedence.
#[derive(Args)]
struct CurveArgs {
    /// Derive the curve from t instead of using the reference curve.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    /// Exit code 1.
    Validation(String),
    /// Exit code 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unknown { .. } | Error::MalformedHex(_) => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_params(curve: &CurveArgs) -> Result<BnParams, Failure> {
    if let Some(path) = std::env::var_os(PARAMS_ENV) {
        let path = PathBuf::from(path);
        eprintln!("using parameters from {}", path.display());
        let j: ParamsJson = read_json(&path)?;
        return Ok(BnParams::from_json(&j)?);
    }
    Ok(match curve.t {
        Some(t) => derive_params_with(t, DeriveOptions::default())?,
        None => reference_params()?,
    })
}

fn print_json<T: serde::Serialize>(value: &T) {
    emit(&serde_json::to_string_pretty(value).expect("value serializes"));
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn cmd_params(t: Option<i64>, b: Option<i64>, reference: bool) -> CliResult {
    let params = if reference {
        reference_params()
    } else {
        derive_params_with(t.expect("clap requires t"), DeriveOptions { b, ..Default::default() })
    };
    let params = match params {
        Ok(p) => p,
        Err(Error::Validation(checks)) => {
            for c in &checks {
                eprintln!("FAIL {c}");
            }
            return Err(Failure::Validation("parameter derivation failed".into()));
        }
        Err(e) => return Err(e.into()),
    };
    for w in &params.warnings {
        eprintln!("warning: {w}");
    }
    let failed = params.validate();
    print_json(&params.to_json());
    if failed.is_empty() {
        Ok(())
    } else {
        for c in &failed {
            eprintln!("FAIL {c}");
        }
        Err(Failure::Validation(format!("{} parameter checks failed", failed.len())))
    }
}

fn cmd_pair(curve: &CurveArgs, p: Vec<String>, q: Vec<String>, miller_only: bool, verify: bool) -> CliResult {
    let params = load_params(curve)?;
    let p: G1Point = PointJson { infinity: false, x: vec![p[0].clone()], y: vec![p[1].clone()] }.to_g1(&params)?;
    let q = PointJson { infinity: false, x: q[..2].to_vec(), y: q[2..].to_vec() }.to_g2(&params)?;
    let value = if miller_only {
        check_inputs(&params, &p, &q)?;
        miller_loop(&params.ctx(), &params, &p, &q)?
    } else {
        optimal_ate(&params, &p, &q)?.value
    };
    print_json(&fp12_to_hex(params.modulus(), &value));
    if verify {
        let c = params.ctx();
        let one = Fp12::one(&params.tower);
        if value == one {
            return Err(Failure::Validation("pairing value is 1".into()));
        }
        if c.fp12_pow(&value, &params.r) != one {
            return Err(Failure::Validation("pairing value is not an r-th root of unity".into()));
        }
        eprintln!("verified: value^r = 1, value != 1");
    }
    Ok(())
}

fn cmd_selftest(level: LevelArg) -> CliResult {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let report = run_selftest(level)?;
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        emit(&format!("{tag} {} ({:.2}s): {}", c.name, c.seconds, c.detail));
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation("selftest failed".into()))
    }
}

fn cmd_vectors(curve: &CurveArgs, count: usize, seed: u64, out: Option<PathBuf>, replay: Option<PathBuf>) -> CliResult {
    let params = load_params(curve)?;
    if let Some(path) = replay {
        let file: VectorFile = read_json(&path)?;
        let problems = vectors::verify(&params, &file)?;
        for p in &problems {
            eprintln!("FAIL {p}");
        }
        if !problems.is_empty() {
            return Err(Failure::Validation(format!("{} mismatches", problems.len())));
        }
        eprintln!("{} entries verified", file.entries.len());
        return Ok(());
    }
    let file = vectors::generate(&params, count, seed)?;
    let text = serde_json::to_string_pretty(&file).expect("vector file serializes");
    match out {
        Some(path) => fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?,
        None => emit(&text),
    }
    Ok(())
}

fn cmd_cost(curve: &CurveArgs, arch: Profile, function: &str, format: Format, config: Option<PathBuf>, seed: u64) -> CliResult {
    let params = load_params(curve)?;
    let model = match config {
        Some(path) => {
            let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
            CycleModel::from_json(&text)?
        }
        None => CycleModel::default(),
    };
    let report = cost_report(&params, &model, arch, function, seed)?;
    match format {
        Format::Json => emit(&report.to_json()),
        Format::Csv => emit(report.to_csv()?.trim_end()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Params { t, b, reference } => cmd_params(t, b, reference),
        Command::Pair { curve, p, q, miller_only, verify } => cmd_pair(&curve, p, q, miller_only, verify),
        Command::Selftest { level } => cmd_selftest(level),
        Command::Vectors { curve, count, seed, out, replay } => cmd_vectors(&curve, count, seed, out, replay),
        Command::Cost { curve, arch, function, format, config, seed } => {
            cmd_cost(&curve, arch, &function, format, config, seed)
        }
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
