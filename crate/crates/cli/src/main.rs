use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tensorconc_cli::{run, summarize, summarize_records, write_csv, Command, ExperimentConfig, HarnessError, Result};

#[derive(Parser)]
#[command(name = "tensorconc", version, about = "Concentration experiments on sparse random tensors")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Spectral sandwich of a centered Bernoulli tensor.
    Concentration(RunArgs),
    /// Degree regularization, then the sandwich.
    Regularize(RunArgs),
    /// Bounded-degree hypergraph expander and its mixing statistics.
    Expander(RunArgs),
    /// Uniform sparsification of the all-ones tensor.
    Sparsify(RunArgs),
    /// Degree and discrepancy lemma checks.
    Diagnostics(RunArgs),
    /// Aggregate a result CSV into a JSON summary.
    Summarize {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; omitted keys take the command's defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set estimator.restarts=8`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// CSV destination; the JSON summary goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| HarnessError::Io { path: path.display().to_string(), source: e })
}

fn execute(command: Command, args: RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path, command)?,
        None => ExperimentConfig::for_command(command),
    };
    for s in &args.set {
        config.apply_override(s)?;
    }
    let records = run(&config, args.jobs)?;
    let summary = serde_json::to_string_pretty(&summarize_records(&records)).expect("summary serializes");
    let out = args.out.or(config.out.map(PathBuf::from));
    match out {
        Some(path) => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &records)?;
            write_file(&path, &buf)?;
            write_file(&path.with_extension("summary.json"), summary.as_bytes())?;
        }
        None => {
            write_csv(std::io::stdout().lock(), &records)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Sub::Concentration(a) => execute(Command::Concentration, a),
        Sub::Regularize(a) => execute(Command::Regularize, a),
        Sub::Expander(a) => execute(Command::Expander, a),
        Sub::Sparsify(a) => execute(Command::Sparsify, a),
        Sub::Diagnostics(a) => execute(Command::Diagnostics, a),
        Sub::Summarize { csv, out } => summarize(&csv).and_then(|s| {
            let json = serde_json::to_string_pretty(&s).expect("summary serializes");
            match out {
                Some(path) => write_file(&path, json.as_bytes()),
                None => writeln!(std::io::stdout(), "{json}").map_err(|e| HarnessError::Io { path: "stdout".into(), source: e }),
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tensorconc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
