//! Command-line front end: `run`, `report-conditions`, `catalog`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trunclab::config::ExperimentConfig;
use trunclab::runner::{as_condition_config, run, RunReport};
use trunclab::series::list_catalog;
use trunclab::Result;

#[derive(Parser)]
#[command(name = "trunclab", version, about = "Zeros of truncated power series over C and Q_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run(RunArgs),
    /// Evaluate the convergence hypotheses for the config's series and place.
    ReportConditions(RunArgs),
    /// List the built-in series.
    Catalog,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed (overrides `seed`).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Print result lines and written files.
    #[arg(long)]
    verbose: bool,
}

fn execute(args: &RunArgs, conditions: bool) -> Result<RunReport> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if conditions {
        cfg = as_condition_config(&cfg)?;
    }
    run(&cfg, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, conditions) = match &cli.command {
        Command::Catalog => {
            print!("{}", list_catalog());
            return ExitCode::SUCCESS;
        }
        Command::Run(a) => (a, false),
        Command::ReportConditions(a) => (a, true),
    };
    match execute(args, conditions) {
        Ok(report) => {
            for l in &report.lines {
                println!("{l}");
            }
            if args.verbose {
                for f in &report.files {
                    println!("wrote {}", f.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("trunclab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
