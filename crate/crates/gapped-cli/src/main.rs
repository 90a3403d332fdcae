//! Command-line front end: parse JSON inputs, dispatch to the library,
//! emit machine-readable reports.
//!
//! Exit codes: `0` success, `1` verified negative result (an obstructed
//! Maurer-Cartan problem, a failed relation or hypothesis check, a
//! residual above tolerance), `2` malformed input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod commands;

use commands::{ainfty_cmd, dehn_cmd, fixture_cmd, index_cmd, novikov_cmd, spectral_cmd, triangle_cmd};

#[derive(Parser)]
#[command(name = "gapped", version, about = "Filtered homological algebra over Novikov rings")]
struct Cli {
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Energy cap override (rational `p/q`).
    #[arg(long, global = true)]
    cap: Option<String>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Tolerance profile for the numeric commands.
    #[arg(long, global = true, value_enum, default_value_t = ToleranceProfile::Default)]
    tolerance_profile: ToleranceProfile,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ToleranceProfile {
    Strict,
    Default,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Novikov ring expression from JSON input.
    NovikovEval {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compute spectral pages, stabilization and the vanishing criterion.
    Spectral {
        #[arg(long)]
        input: PathBuf,
        /// Filtration step (rational); defaults to the lattice divisor at
        /// or below half the gap.
        #[arg(long)]
        step: Option<String>,
        /// Number of pages to compute.
        #[arg(long, default_value_t = 6)]
        rmax: usize,
    },
    /// Assemble the cone, check the hypotheses and extract the long exact
    /// sequence of a triangle.
    Triangle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check the defining relation of a truncated algebra.
    AinftyCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Solve the Maurer-Cartan equation by energy induction.
    McSolve {
        #[arg(long)]
        input: PathBuf,
    },
    /// Deform the operations by a candidate bounding cochain.
    Deform {
        #[arg(long)]
        input: PathBuf,
        /// JSON file with the cochain coordinates per generator name.
        #[arg(long)]
        cochain: PathBuf,
    },
    /// Index computations on sampled Lagrangian paths and the dimension
    /// formulas.
    Index {
        #[arg(long, value_enum)]
        mode: IndexMode,
        /// JSON input describing paths or formula arguments.
        #[arg(long)]
        input: PathBuf,
    },
    /// Residual report for the model twist on the cotangent bundle.
    Dehn {
        /// Sphere dimension.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Twist scale in (0, 1].
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Wobble threshold.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Number of sample points per check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Write a reproducible fixture to the output.
    GenerateFixture {
        #[arg(long, value_enum)]
        kind: FixtureKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum IndexMode {
    Loop,
    Rs,
    Mm,
    Dim,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FixtureKind {
    GappedComplex,
    AcyclicComplex,
    Triangle,
    AinftyAssoc,
    AinftySolvable,
    AinftyObstructed,
}

/// Verdict of a command: the report plus the exit classification.
pub enum Outcome {
    Success(Value),
    /// Mathematically negative but well-formed result.
    Negative(Value),
    /// Bad input with a JSON-pointer-ish path.
    InputError(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::NovikovEval { input } => novikov_cmd::run(input, cli.cap.as_deref()),
        Command::Spectral { input, step, rmax } => {
            spectral_cmd::run(input, step.as_deref(), *rmax)
        }
        Command::Triangle { input } => triangle_cmd::run(input),
        Command::AinftyCheck { input } => ainfty_cmd::check(input),
        Command::McSolve { input } => ainfty_cmd::solve(input),
        Command::Deform { input, cochain } => ainfty_cmd::deform(input, cochain),
        Command::Index { mode, input } => index_cmd::run(*mode, input),
        Command::Dehn { n, lambda, delta, samples } => {
            dehn_cmd::run(*n, *lambda, *delta, *samples, cli.seed, cli.tolerance_profile)
        }
        Command::GenerateFixture { kind } => fixture_cmd::run(*kind, cli.seed),
    };
    match outcome {
        Outcome::Success(report) => {
            emit(&cli.out, &report);
            ExitCode::from(0)
        }
        Outcome::Negative(report) => {
            emit(&cli.out, &report);
            ExitCode::from(1)
        }
        Outcome::InputError(path) => {
            let report = json!({ "error": path });
            emit(&cli.out, &report);
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, report: &Value) {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match out {
        Some(path) => std::fs::write(path, text + "\n").expect("write report"),
        None => println!("{text}"),
    }
}

/// Rounds to 12 significant digits for deterministic float reporting.
pub fn sig12(x: f64) -> Value {
    let rounded: f64 = format!("{x:.11e}").parse().expect("rounded float");
    json!(rounded)
}
