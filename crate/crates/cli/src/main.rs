use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tclaser::{exit_code, parse_config, run, Command};

/// Tavis-Cummings spectra, Dicke thermal tables and pumped condensation runs.
#[derive(Debug, Parser)]
#[command(name = "tclaser", version)]
struct Cli {
    command: Command,
    /// Plain-text `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides `workers`.
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(1);
        }
    };
    let mut config = match parse_config(&text, Some(cli.command)) {
        Ok(c) => c,
        Err(e) => {
            eprint!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(dir) = cli.out {
        config.output_dir = dir;
    }
    match cli.workers {
        Some(0) => {
            eprintln!("error: --workers must be >= 1");
            return ExitCode::from(1);
        }
        Some(w) => config.workers = w,
        None => {}
    }

    let result = run(&config);
    match &result {
        Ok(outcome) => {
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            println!("wrote {}", outcome.manifest.display());
            for flag in &outcome.flags {
                eprintln!("flag: {flag}");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
