//! `plurispec <command> --config <path> [--set key=value]... [--jobs N]`

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use plurispec_core::Error;

mod commands;
mod config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Assemble,
    Blocks,
    Berezin,
    QuantizeNorm,
    QuantizeSemicomm,
    QuantizeThird,
    BerezinConverge,
    Spectrum,
    Compactness,
    PhhCheck,
    PhhFredholm,
    Selftest,
}

#[derive(Debug, Parser)]
#[command(
    name = "plurispec",
    version,
    about = "Toeplitz quantization experiments on Bergman and Fock spaces"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set space.lambda=4` or `--set lambdas.0=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_config() => 2,
        Error::Numeric(_) | Error::Range(_) => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<commands::Outcome, Error> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("--jobs: {e}")))?;
    }
    if cli.config.is_none() && cli.command != Command::Selftest {
        return Err(Error::Config("--config is required".into()));
    }
    let name = cli
        .command
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let doc = config::load(cli.config.as_deref(), &cli.overrides)?;
    commands::run(&name, doc)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            if out.failed_checks > 0 {
                eprintln!("{} check(s) failed", out.failed_checks);
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
