use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use extmfs_cli::commands;
use extmfs_cli::config::{ConfigError, RunConfig};

/// Exterior Dirichlet Laplace solvers (MFS, modified Trefftz, modified MFS)
/// and their conditioning studies.
#[derive(Debug, Parser)]
#[command(name = "extmfs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// CSV output path; overrides `output.path`. Without either, CSV goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write each system matrix as CSV next to the output.
    #[arg(long, global = true)]
    dump_matrices: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one method, or all five, and tabulate values and errors.
    Solve,
    /// Condition-number sweeps.
    Sweep,
    /// Check the closed-form identities and print a pass/fail table.
    Verify,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Command::Verify = cli.command {
        let (table, passed) = commands::verify();
        print!("{table}");
        return Ok(passed);
    }
    let path = cli.config.as_deref().ok_or_else(|| ConfigError::Invalid {
        field: "--config",
        message: "a configuration file is required".into(),
    })?;
    let cfg = RunConfig::load(path)?;
    let output = match cli.command {
        Command::Solve => commands::solve(&cfg, cli.dump_matrices)?,
        Command::Sweep => commands::sweep(&cfg)?,
        Command::Verify => unreachable!(),
    };
    let out_path = cli.out.clone().or_else(|| cfg.output().path);
    emit(out_path.as_deref(), &output)?;
    Ok(true)
}

fn emit(out: Option<&Path>, output: &commands::Output) -> Result<()> {
    for (method, text) in &output.matrices {
        let path = commands::matrix_path(out, method);
        std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    match out {
        Some(path) => {
            std::fs::write(path, &output.csv).with_context(|| format!("cannot write {}", path.display()))?;
            for line in &output.summary {
                println!("{line}");
            }
        }
        None => {
            std::io::stdout().lock().write_all(output.csv.as_bytes())?;
            for line in &output.summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}
