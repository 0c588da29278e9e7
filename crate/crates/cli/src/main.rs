mod commands;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use ursc::codes::CodesError;
use ursc::contention::ContentionError;
use ursc::{parse_rational, Rational};

/// Construct, verify and simulate ultra-resilient superimposed codes.
///
/// Exit status: 0 pass, 1 property violation, 2 input error, 3 budget
/// exceeded.
#[derive(Debug, Parser)]
#[command(name = "ursc", version)]
struct Cli {
    /// Worker threads for parallel commands; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    parallelism: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample matrices until one satisfies the pairwise condition.
    Construct(ConstructArgs),
    /// Check the pairwise weight and collision inequalities of a code file.
    Check(CheckArgs),
    /// Exhaustively verify shift and flip resilience (small codes only).
    VerifyOracle(OracleArgs),
    /// Exhaustively verify the unshifted k-cover-free property.
    VerifyClassic(ClassicArgs),
    /// Simulate neighborhood learning or local broadcast in a beeping network.
    SimBeep(SimBeepArgs),
    /// Simulate non-adaptive contention resolution.
    SimCr(SimCrArgs),
    /// Monte-Carlo segment weights of freshly sampled columns.
    Stats(StatsArgs),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = rational, default_value = "1/1")]
    alpha: Rational,
    #[arg(long, value_parser = rational, default_value = "1/2")]
    eps: Rational,
    #[arg(long, value_parser = rational)]
    c: Rational,
    #[arg(long, env = "URSC_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 20)]
    max_iters: usize,
    /// Fix the code length instead of deriving it from the parameters.
    #[arg(long)]
    t: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    file: PathBuf,
    /// Override the header's alpha.
    #[arg(long, value_parser = rational)]
    alpha: Option<Rational>,
    /// Largest number of simultaneous codewords to check.
    #[arg(long)]
    k_max: Option<usize>,
    /// Stop at the first violation.
    #[arg(long)]
    fail_fast: bool,
    /// Write the violation list here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    file: PathBuf,
    #[arg(long, value_parser = rational)]
    alpha: Option<Rational>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Use the prefix `[0, tau]` for every k instead of the header's tau2(k).
    #[arg(long)]
    tau: Option<usize>,
    /// Largest number of shift configurations to enumerate.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u128,
}

#[derive(Debug, Args)]
pub struct ClassicArgs {
    file: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u128,
}

#[derive(Debug, Args)]
pub struct SimBeepArgs {
    scenario: PathBuf,
    /// Oracle budget used to certify the code's capacity.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u128,
    /// Also verify Safety and Inclusion over every wake-up schedule.
    #[arg(long)]
    sweep: bool,
    /// Write the event log here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimCrArgs {
    scenario: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    shift: i64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

/// How a command ended when it ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violation,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CodesError>() {
            match e {
                CodesError::BudgetExceeded { .. } => return 3,
                CodesError::IterationsExhausted { .. } => return 1,
                _ => {}
            }
        }
        if let Some(ContentionError::BudgetExceeded { .. }) =
            cause.downcast_ref::<ContentionError>()
        {
            return 3;
        }
        if let Some(ursc::beeping::BeepError::SafetyViolation { .. }) = cause.downcast_ref() {
            return 1;
        }
    }
    2
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.parallelism.max(1))
        .build_global()
        .context("starting the worker pool")?;
    match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Check(a) => commands::check(a),
        Command::VerifyOracle(a) => commands::verify_oracle(a),
        Command::VerifyClassic(a) => commands::verify_classic(a),
        Command::SimBeep(a) => commands::sim_beep(a),
        Command::SimCr(a) => commands::sim_cr(a),
        Command::Stats(a) => commands::stats(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
