use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use opuclab::experiment::{run, write_outputs, ExperimentConfig, ExperimentReport, Status};
use opuclab::families::BUILTINS;

#[derive(Parser)]
#[command(name = "opuclab", version, about = "OPUC identity and asymptotics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and write CSV tables plus report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (defaults to the config's output_path, then ".").
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin measure families.
    Families,
    /// Run the invariant suite only and print verdicts.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

fn print_verdicts(report: &ExperimentReport) {
    for v in &report.verdicts {
        let status = match v.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        let residual = v.residual.map(|r| format!(" {r:.3e}")).unwrap_or_default();
        let tol = v.tolerance.map(|t| format!(" (tol {t:.1e})")).unwrap_or_default();
        println!("{status:4} {}{residual}{tol} {}", v.invariant, v.detail);
    }
    println!(
        "{} passed, {} failed, {} skipped",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped)
    );
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Families => {
            for (name, description) in BUILTINS {
                println!("{name:<28} {description}");
            }
            Ok(true)
        }
        Command::Run { config, out } => {
            let config = ExperimentConfig::from_path(&config)?;
            let dir = out.or_else(|| config.output_path.clone()).unwrap_or_else(|| PathBuf::from("."));
            let output = run(&config).with_context(|| format!("running {}", config.family))?;
            write_outputs(&output, &dir).with_context(|| format!("writing {}", dir.display()))?;
            print_verdicts(&output.report);
            Ok(output.report.passed())
        }
        Command::Verify { config } => {
            let mut config = ExperimentConfig::from_path(&config)?;
            config.experiment = opuclab::experiment::Experiment::All;
            let output = run(&config).with_context(|| format!("running {}", config.family))?;
            print_verdicts(&output.report);
            Ok(output.report.passed())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
