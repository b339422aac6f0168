//! `curlwave`: decompose, propagate and validate periodic Maxwell fields.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or config error,
//! 3 I/O or malformed input.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;
use config::{OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "curlwave",
    version,
    about = "Closed-form plane-wave Maxwell solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration file (`[section]` headers, `key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker thread cap.
    #[arg(long, global = true, env = "CURLWAVE_THREADS", value_name = "N")]
    threads: Option<usize>,

    /// Output directory; same as `--output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    output: Option<PathBuf>,

    /// Comma-separated evaluation times; same as `--output.times`.
    #[arg(long, global = true, value_name = "T1,T2,...")]
    times: Option<String>,

    /// Output file kind; same as `--output.format`.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// `section.key=value` override; `--section.key=value` is shorthand.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose the input field into curl eigen-modes and write a mode list.
    Decompose,
    /// Evaluate the analytic solution at the requested times.
    Propagate,
    /// Run the golden, conservation and FDTD convergence checks.
    Validate,
    /// Run the two reference problems only.
    Golden,
}

fn configure(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("--config {}: {e}", path.display())))?;
        cfg.apply_text(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    cfg.apply_overrides(cli.set.iter().map(String::as_str))?;
    if let Some(dir) = &cli.output {
        cfg.output_dir = Some(dir.clone());
    }
    if let Some(t) = &cli.times {
        cfg.times = Some(config::parse_times("--times", t)?);
    }
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--threads: {e}")))?;
    }
    let cfg = configure(cli)?;
    match cli.command {
        Command::Decompose => commands::decompose(&cfg),
        Command::Propagate => commands::propagate(&cfg),
        Command::Validate => commands::validate(&cfg),
        Command::Golden => commands::golden(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(config::rewrite_overrides(std::env::args()));
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Validation => {}
            }
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
