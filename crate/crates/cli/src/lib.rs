//! `gradenorm`: run the graded-norm analyzers from JSON experiment configs.
//!
//! ```text
//! gradenorm <command> [--config <path>] [--seed n] [--out dir] [--threads k] [--key=value ...]
//! ```
//!
//! Exit codes: 0 when every assertion holds, 1 when a certified inequality
//! is violated (the report carries the witness), 2 on configuration errors.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use config::{ConfigError, ExperimentConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "GRADENORM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Witness,
    AuditWeights,
    SampleRatios,
    BestConstant,
    GammaCheck,
    ViolationSearch,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Witness => "witness",
            Command::AuditWeights => "audit-weights",
            Command::SampleRatios => "sample-ratios",
            Command::BestConstant => "best-constant",
            Command::GammaCheck => "gamma-check",
            Command::ViolationSearch => "violation-search",
            Command::Suite => "suite",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gradenorm", version, about = "Submultiplicativity analyzers for weighted norms on graded algebras")]
#[command(after_help = "Any other `--key=value` (dotted keys allowed, e.g. --algebra.generators=6) overrides the config file.")]
struct Cli {
    command: Command,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for `<command>.json`, `<command>.meta.json` and CSV output.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

const FLAGS: [&str; 4] = ["config", "seed", "out", "threads"];

/// Splits `--key=value` overrides from the flags clap understands.
fn split_overrides(args: Vec<OsString>) -> Result<(Vec<OsString>, Vec<(String, String)>), ConfigError> {
    let mut keep = Vec::new();
    let mut overrides = Vec::new();
    for arg in args {
        match arg.to_str().and_then(|s| s.strip_prefix("--")).and_then(|s| s.split_once('=')) {
            Some((key, value)) if !FLAGS.contains(&key) => {
                if key.is_empty() {
                    return Err(ConfigError::Override(arg.to_string_lossy().into_owned()));
                }
                overrides.push((key.to_string(), value.to_string()));
            }
            _ => keep.push(arg),
        }
    }
    Ok((keep, overrides))
}

/// Runs one command; `args` includes the program name. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let (args, overrides) = match split_overrides(args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &overrides) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, ConfigError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| ConfigError::Invalid(format!("{THREADS_ENV}={v} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn execute(cli: &Cli, overrides: &[(String, String)]) -> Result<i32, ConfigError> {
    let mut overrides = overrides.to_vec();
    if let Some(seed) = cli.seed {
        overrides.push(("seed".into(), seed.to_string()));
    }
    let value = config::load(cli.config.as_deref(), &overrides)?;
    let cfg = config::resolve(cli.command, value)?;
    let threads = thread_count(cli.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        if k == 0 {
            return Err(ConfigError::Invalid("--threads must be positive".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| ConfigError::Invalid(e.to_string()))?;

    let started = std::time::SystemTime::now();
    let outcome = pool.install(|| match cli.command {
        Command::Witness => commands::witness(&cfg),
        Command::AuditWeights => commands::audit_weights(&cfg),
        Command::SampleRatios => commands::sample_ratios(&cfg),
        Command::BestConstant => commands::best(&cfg),
        Command::GammaCheck => commands::gamma_check(&cfg),
        Command::ViolationSearch => commands::violation_search(&cfg),
        Command::Suite => commands::suite(&cfg),
    })?;
    let written = report::write(cli.command, &cfg, &outcome, &cli.out, started, pool.current_num_threads())?;
    println!("{}", written.display());
    Ok(if outcome.pass { EXIT_PASS } else { EXIT_VIOLATION })
}
