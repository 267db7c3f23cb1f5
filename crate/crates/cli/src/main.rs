use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qproc_cli::commands::{self, DEFAULT_SEED};
use qproc_cli::doc::ExperimentDoc;
use qproc_cli::verify::run_suite;
use qproc_cli::CliError;

#[derive(Debug, Parser)]
#[command(name = "qproc", version, about = "Programmable quantum processor simulator")]
struct Cli {
    /// Seed for Monte Carlo sampling and the verification suite.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file. Defaults to stdout, or to a file in `QPROC_OUT_DIR` when set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Grid size M for continuous program variables.
    #[arg(long, global = true)]
    momentum_resolution: Option<usize>,

    #[arg(long, env = "QPROC_OUT_DIR", hide_env_values = true, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a conditional or network document and print a JSON report.
    Simulate { doc: PathBuf },
    /// Run a stochastic-sweep document and print CSV.
    Sweep { doc: PathBuf },
    /// Run the built-in invariant suite.
    Verify {
        /// Perturb every theta gate so that the suite must fail.
        #[arg(long)]
        fault_inject: bool,
    },
    /// Compile a 2x2 unitary into three theta parameters.
    Compile {
        /// Row-major entries as re/im pairs: re00 im00 re01 im01 re10 im10 re11 im11.
        #[arg(long, num_args = 8, allow_negative_numbers = true, required_unless_present = "doc")]
        matrix: Option<Vec<f64>>,
        /// A compile document instead of --matrix.
        #[arg(long, conflicts_with = "matrix")]
        doc: Option<PathBuf>,
    },
}

impl Command {
    fn default_file(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate.json",
            Command::Sweep { .. } => "sweep.csv",
            Command::Verify { .. } => "verify.txt",
            Command::Compile { .. } => "compile.json",
        }
    }
}

fn read_doc(path: &Path) -> Result<ExperimentDoc, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    ExperimentDoc::parse(&text)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut failures = 0;
    let output = match &cli.command {
        Command::Simulate { doc } => {
            let report = commands::simulate(&read_doc(doc)?, cli.momentum_resolution)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            to_json(&report)
        }
        Command::Sweep { doc } => commands::sweep(&read_doc(doc)?, cli.seed)?,
        Command::Verify { fault_inject } => {
            let report = run_suite(*fault_inject, cli.seed.unwrap_or(DEFAULT_SEED));
            failures = report.failures();
            report.render()
        }
        Command::Compile { matrix, doc } => {
            let report = match (matrix, doc) {
                (Some(values), _) => commands::compile(&commands::matrix_from_reals(values)?)?,
                (None, Some(path)) => commands::compile_doc(&read_doc(path)?)?,
                (None, None) => return Err(CliError::input("matrix", "missing")),
            };
            to_json(&report)
        }
    };

    let target = cli
        .out
        .clone()
        .or_else(|| cli.out_dir.as_ref().map(|d| d.join(cli.command.default_file())));
    match target {
        Some(path) => fs::write(&path, &output)?,
        None => print!("{output}"),
    }
    if failures > 0 {
        return Err(CliError::Verification(failures));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
