//! Command-line front end: every library pipeline behind one binary with
//! stable JSON/CSV file formats.
//!
//! Exit codes: 0 success (including ordinary negative results such as "no
//! witness found"); 2 recovery aborted with a certificate; 3 bad arguments,
//! unreadable files, or violated preconditions.

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sparseperm::analysis::threshold_report;
use sparseperm::files::{load_function, load_marginal, save_function, save_marginal};
use sparseperm::marginals::{fixtures, fourier_coefficient, SparseSupportFunction};
use sparseperm::oracle::{l0_oracle, l1_witness};
use sparseperm::randmodel::{
    run_sweep, sample_function, CheckMode, Schedule, ShapeFamily, SweepSpec, ValueModel,
};
use sparseperm::rng::stream;
use sparseperm::sparsest_fit::{
    check_condition1, recover, LiVerdict, RecoverOptions, RecoveryResult, EXACT_LI_CAP,
};
use sparseperm::symgroup::{LambdaShape, DEFAULT_DLAMBDA_CAP};
use sparseperm::{Error, Result, Tolerance, ValueMode};

#[derive(Parser)]
#[command(
    name = "sparseperm",
    version,
    about = "Sparse function recovery over permutations from one marginal",
    after_help = "Exit codes: 0 success, 2 recovery aborted (certificate on stdout), \
                  3 argument/file/precondition error."
)]
struct Cli {
    /// Print errors as JSON on stderr instead of plain text.
    #[arg(long, global = true)]
    json_errors: bool,

    /// Refuse shapes whose partition count D exceeds this bound.
    #[arg(long, global = true, default_value_t = DEFAULT_DLAMBDA_CAP)]
    cap_dlambda: u64,

    /// Worker threads for the parallel engines (default: single-threaded).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for ValueMode {
    fn from(m: ModeArg) -> ValueMode {
        match m {
            ModeArg::Exact => ValueMode::Exact,
            ModeArg::Float => ValueMode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepModeArg {
    /// Cell-ownership check only (fast, drives the phase-transition plots).
    Condition1,
    /// Sample, marginalize, recover, and compare.
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the marginal of a function file at a shape.
    Marginal {
        /// Function JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated parts, e.g. 3,1.
        #[arg(long)]
        shape: String,
        /// Marginal JSON file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Report the recoverability conditions for a function at a shape.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        shape: String,
    },
    /// Recover the sparsest non-negative explanation of a marginal.
    Recover {
        /// Marginal JSON file.
        #[arg(long)]
        marginal: PathBuf,
        /// How to read the marginal's values.
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Absolute tolerance for float-mode value grouping.
        #[arg(long)]
        abs_tol: Option<f64>,
        /// Relative tolerance for float-mode value grouping.
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Function JSON file to write on success.
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive small-n ground-truth oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Draw a seeded random sparse function, or emit a named fixture.
    Sample {
        #[arg(long)]
        n: u32,
        /// Support draws (with replacement; colliding draws merge).
        #[arg(long, required_unless_present = "builtin")]
        k: Option<u64>,
        /// Continuous values: lower endpoint (pairs with --b).
        #[arg(long, conflicts_with = "t")]
        a: Option<f64>,
        /// Continuous values: upper endpoint (pairs with --a).
        #[arg(long, conflicts_with = "t")]
        b: Option<f64>,
        /// Integer values: uniform on {1..t}.
        #[arg(long)]
        t: Option<u64>,
        /// Emit a named builtin fixture instead of sampling.
        #[arg(long, value_parser = fixtures::BUILTIN_NAMES.to_vec())]
        builtin: Option<String>,
        #[arg(long, required_unless_present = "builtin")]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo success rates over an (n, K) grid, written as CSV.
    Sweep {
        /// Shape family: n-1,1 / n-2,2 / explicit parts like 3,1.
        #[arg(long)]
        shape: String,
        /// Comma-separated n values, e.g. 50,100,200.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// K schedule: "0.5*n*log(n)", "(0.5/2!)*n^2*log(n)",
        /// "0.9*D*loglog(D)", "2*D^0.5", or an explicit list "100,200".
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        trials: u32,
        #[arg(long, value_enum, default_value_t = SweepModeArg::Condition1)]
        mode: SweepModeArg,
        #[arg(long, conflicts_with = "t")]
        a: Option<f64>,
        #[arg(long, conflicts_with = "t")]
        b: Option<f64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        seed: u64,
        /// CSV file to write.
        #[arg(long)]
        out: PathBuf,
        /// Record wall-clock seconds per grid point (off by default so
        /// outputs are byte-identical across machines and worker counts).
        #[arg(long)]
        timing: bool,
    },
    /// Threshold formulas and the converse bound for one shape.
    Analyze {
        #[arg(long)]
        shape: String,
        /// Cross-check: must equal the shape's part sum.
        #[arg(long)]
        n: Option<u32>,
        /// Slack in the achievable thresholds, in (0, 1).
        #[arg(long)]
        epsilon: f64,
        /// Integer value range {1..T} assumed by the converse bound.
        #[arg(long = "T")]
        t: u64,
        /// Leading constant of the converse bound (3 stated, 4 derived).
        #[arg(long, default_value_t = 3.0)]
        constant: f64,
        /// Analysis constant in the general-shape exponent.
        #[arg(long, default_value_t = 1.0)]
        c_prime: f64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Every sparsest exact explanation of a marginal, by exhaustive search.
    L0 {
        #[arg(long)]
        marginal: PathBuf,
        /// Largest support size to try.
        #[arg(long)]
        kmax: usize,
    },
    /// A distinct equal-mass function with the same marginal, if one is
    /// reachable by a cycle-split rewrite of a support pair.
    L1Witness {
        /// Function JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        shape: String,
        /// Write the witness as a function file when found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_shape(text: &str) -> Result<LambdaShape> {
    let parts: Result<Vec<u32>> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidShape(format!("bad part {p:?} in shape {text:?}")))
        })
        .collect();
    LambdaShape::new(parts?)
}

fn entries_json(f: &SparseSupportFunction) -> Value {
    Value::Array(
        f.entries()
            .iter()
            .map(|(perm, value)| json!({ "perm": perm.images(), "value": value.render() }))
            .collect(),
    )
}

fn value_model(a: Option<f64>, b: Option<f64>, t: Option<u64>) -> Result<ValueModel> {
    let model = match (a, b, t) {
        (None, None, Some(t)) => ValueModel::Integer { t },
        (a, b, None) => ValueModel::Continuous {
            a: a.unwrap_or(1.0),
            b: b.unwrap_or(2.0),
        },
        _ => unreachable!("clap rejects --a/--b with --t"),
    };
    model.validate()?;
    Ok(model)
}

fn run(command: Command, cap: u64) -> Result<ExitCode> {
    match command {
        Command::Marginal { input, shape, out } => {
            let f = load_function(&input)?;
            let shape = parse_shape(&shape)?;
            let m = fourier_coefficient(&f, &shape, cap)?;
            save_marginal(&out, &m)?;
            println!(
                "{}",
                json!({
                    "out": out,
                    "n": f.n(),
                    "shape": shape.parts(),
                    "d": m.d(),
                    "cells": m.num_cells(),
                })
            );
        }
        Command::Check { input, shape } => {
            let f = load_function(&input)?;
            let shape = parse_shape(&shape)?;
            let report = check_condition1(&f, &shape, cap, EXACT_LI_CAP)?;
            let per_sigma: Vec<Value> = report
                .unique_witness
                .per_sigma
                .iter()
                .zip(f.entries())
                .map(|(witness, (perm, _))| {
                    json!({
                        "perm": perm.images(),
                        "witness": witness.map(|(row, col)| [row + 1, col + 1]),
                    })
                })
                .collect();
            let li = match &report.linear_independence {
                LiVerdict::Verified => json!({ "verdict": "verified" }),
                LiVerdict::Refuted { coefficients } => {
                    json!({ "verdict": "refuted", "coefficients": coefficients })
                }
                LiVerdict::Skipped { reason } => {
                    json!({ "verdict": "skipped", "reason": reason })
                }
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "n": f.n(),
                    "shape": shape.parts(),
                    "sparsity": f.sparsity(),
                    "unique_witness": {
                        "all_witnessed": report.unique_witness.all_witnessed(),
                        "per_sigma": per_sigma,
                    },
                    "linear_independence": li,
                    "holds": report.holds(),
                }))?
            );
        }
        Command::Recover {
            marginal,
            mode,
            abs_tol,
            rel_tol,
            out,
        } => {
            let m = load_marginal(&marginal, mode.into(), cap)?;
            let default_tol = Tolerance::default();
            let opts = RecoverOptions {
                tol: Tolerance {
                    abs: abs_tol.unwrap_or(default_tol.abs),
                    rel: rel_tol.unwrap_or(default_tol.rel),
                },
                cap,
                ..RecoverOptions::default()
            };
            match recover(&m, &opts)? {
                RecoveryResult::Recovered { function, .. } => {
                    save_function(&out, &function)?;
                    println!(
                        "{}",
                        json!({
                            "status": "recovered",
                            "sparsity": function.sparsity(),
                            "out": out,
                        })
                    );
                }
                RecoveryResult::Aborted(certificate) => {
                    println!("{}", serde_json::to_string_pretty(&certificate)?);
                    return Ok(ExitCode::from(2));
                }
            }
        }
        Command::Oracle { which } => match which {
            OracleCommand::L0 { marginal, kmax } => {
                let m = load_marginal(&marginal, ValueMode::Exact, cap)?;
                let solutions = l0_oracle(&m, kmax)?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "count": solutions.len(),
                        "sparsity": solutions.first().map(SparseSupportFunction::sparsity),
                        "solutions": solutions.iter().map(entries_json).collect::<Vec<_>>(),
                    }))?
                );
            }
            OracleCommand::L1Witness { input, shape, out } => {
                let f = load_function(&input)?;
                let shape = parse_shape(&shape)?;
                match l1_witness(&f, &shape, cap)? {
                    Some(witness) => {
                        if let Some(out) = &out {
                            save_function(out, &witness)?;
                        }
                        println!(
                            "{}",
                            json!({ "found": true, "witness": entries_json(&witness), "out": out })
                        );
                    }
                    None => println!("{}", json!({ "found": false })),
                }
            }
        },
        Command::Sample {
            n,
            k,
            a,
            b,
            t,
            builtin,
            seed,
            out,
        } => {
            let f = match builtin {
                Some(name) => fixtures::builtin(&name, n)?,
                None => {
                    let model = value_model(a, b, t)?;
                    let mut rng = stream(seed.expect("clap enforces --seed"));
                    sample_function(n, k.expect("clap enforces --k"), &model, &mut rng)?
                }
            };
            save_function(&out, &f)?;
            println!(
                "{}",
                json!({ "out": out, "n": f.n(), "sparsity": f.sparsity(), "mode": f.mode() })
            );
        }
        Command::Sweep {
            shape,
            n,
            schedule,
            trials,
            mode,
            a,
            b,
            t,
            seed,
            out,
            timing,
        } => {
            let spec = SweepSpec {
                family: ShapeFamily::parse(&shape)?,
                ns: n,
                schedule: Schedule::parse(&schedule)?,
                trials,
                mode: match mode {
                    SweepModeArg::Condition1 => CheckMode::Condition1Only,
                    SweepModeArg::Full => CheckMode::FullRecovery,
                },
                value_model: value_model(a, b, t)?,
                seed,
                cap,
            };
            let result = run_sweep(&spec)?;
            let file =
                File::create(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            result.write_csv(file, timing)?;
            println!("{}", json!({ "out": out, "points": result.points.len() }));
        }
        Command::Analyze {
            shape,
            n,
            epsilon,
            t,
            constant,
            c_prime,
        } => {
            let shape = parse_shape(&shape)?;
            if let Some(n) = n {
                if n != shape.n() {
                    return Err(Error::DimensionMismatch(format!(
                        "--n {n} but the shape sums to {}",
                        shape.n()
                    )));
                }
            }
            let report = threshold_report(&shape, epsilon, t, constant, c_prime)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidPermutation(_) => "invalid-permutation",
        Error::InvalidShape(_) => "invalid-shape",
        Error::InvalidWord(_) => "invalid-word",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::Overflow(_) => "overflow",
        Error::CapExceeded { .. } => "cap-exceeded",
        Error::ModeMismatch(_) => "mode-mismatch",
        Error::InvalidValue(_) => "invalid-value",
        Error::DimensionMismatch(_) => "dimension-mismatch",
        Error::Precondition(_) => "precondition",
        Error::MalformedFile(_) => "malformed-file",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        Error::Csv(_) => "csv",
    }
}

fn main() -> ExitCode {
    // Argument errors must exit 3 (clap's default of 2 is reserved for
    // certificate aborts); --help and --version still exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(3);
    }
    match run(cli.command, cli.cap_dlambda) {
        Ok(code) => code,
        Err(e) => {
            if cli.json_errors {
                eprintln!(
                    "{}",
                    json!({ "error": { "kind": error_kind(&e), "detail": e.to_string() } })
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(3)
        }
    }
}
