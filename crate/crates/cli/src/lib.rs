//! The `gmetric` command line. Subcommands mirror the library modules.
//!
//! Exit codes: 0 when the checked property holds or the computation
//! succeeded, 1 when the property fails (a witness is printed), 2 on input or
//! usage errors.

use std::ffi::OsString;
use std::time::Instant;

use clap::{Parser, Subcommand};

pub mod cmd;
pub mod formats;
pub mod report;

pub use report::{Inputs, Outcome, RunReport};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "gmetric", version, about = "Generalized metric spaces, congruences and semirigid systems")]
pub struct Cli {
    /// Print the run report as JSON instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed recorded in the report and passed to randomized searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Include wall-clock time in the report. Reports are otherwise
    /// byte-identical across runs.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zigzag distances on reflexive digraphs.
    #[command(subcommand)]
    Zigzag(cmd::zigzag::ZigzagCmd),
    /// Finite generalized metric spaces.
    #[command(subcommand)]
    Gms(cmd::gms::GmsCmd),
    /// Lattices of equivalence relations.
    #[command(subcommand)]
    Eqv(cmd::eqv::EqvCmd),
    /// Congruence-preserving maps on the integers.
    #[command(subcommand)]
    Zcong(cmd::zcong::ZcongCmd),
    /// Semirigid systems of equivalence relations.
    #[command(subcommand)]
    Semirigid(cmd::semirigid::SemirigidCmd),
    /// Factorization of final segments of the free monoid.
    #[command(subcommand)]
    Freemon(cmd::freemon::FreemonCmd),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "cannot read {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Runs a parsed command line and builds its report.
pub fn execute(cli: &Cli) -> Result<(Outcome, RunReport), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let (outcome, inputs) = pool.install(|| match &cli.command {
        Command::Zigzag(c) => cmd::zigzag::run(c),
        Command::Gms(c) => cmd::gms::run(c),
        Command::Eqv(c) => cmd::eqv::run(c),
        Command::Zcong(c) => cmd::zcong::run(c),
        Command::Semirigid(c) => cmd::semirigid::run(c),
        Command::Freemon(c) => cmd::freemon::run(c),
    })?;
    let elapsed = start.elapsed().as_millis();
    let mut inputs = inputs;
    inputs.arg("seed", cli.seed);
    let report = RunReport {
        command: inputs.command(),
        inputs: inputs.digest(),
        seed: cli.seed,
        holds: outcome.holds,
        result: outcome.result.clone(),
        witnesses: outcome.witnesses.clone(),
        timing_ms: cli.timing.then_some(elapsed),
    };
    Ok((outcome, report))
}

/// What the binary prints to stdout and stderr, with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Rendered
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Rendered { code: 2, stdout: String::new(), stderr: text }
            } else {
                Rendered { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Err(e) => Rendered { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
        Ok((outcome, report)) => {
            let mut stdout = if cli.json {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                let mut s = outcome.text.clone();
                if let Some(t) = report.timing_ms {
                    s.push_str(&format!("\ntime: {t} ms"));
                }
                s
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Rendered { code: outcome.exit_code(), stdout, stderr: String::new() }
        }
    }
}
