use std::io::{ErrorKind, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cfdt::rational::parse_rational;
use cfdt::scenario::{
    builtin, builtin_names, load, render, run_with, serialize_scenario, Command, Format, RunOptions,
};
use cfdt::{Error, Result};

#[derive(Parser)]
#[command(
    name = "cfdt",
    version,
    about = "Counterfactual decision scenarios with exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    /// List the built-in scenarios.
    List,
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run one command on a built-in scenario or a scenario file.
    Run {
        /// Built-in name or path to a JSON scenario file.
        target: String,
        #[arg(long, value_enum)]
        command: Command,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Show rationals as decimals with this many digits.
        #[arg(long)]
        decimal: Option<usize>,
        #[arg(long, default_value = "1/16")]
        grid_step: String,
        /// Regret parameter for scenarios with a generated regret utility.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Print a scenario in the JSON file format.
    Export { target: String },
}

fn resolve(target: &str) -> Result<cfdt::scenario::Scenario> {
    if builtin_names().contains(&target) {
        return builtin(target);
    }
    let path = Path::new(target);
    if path.exists() {
        return load(path);
    }
    Err(Error::UnknownScenario(target.to_string()))
}

/// Writes to stdout; a closed pipe (`cfdt list | head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when an expected result does not match.
fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Top::List => {
            emit(
                &builtin_names()
                    .iter()
                    .map(|n| format!("{n}\n"))
                    .collect::<String>(),
            )?;
            Ok(true)
        }
        Top::Scenario {
            action: ScenarioAction::Export { target },
        } => {
            emit(&format!("{}\n", serialize_scenario(&resolve(&target)?)?))?;
            Ok(true)
        }
        Top::Scenario {
            action:
                ScenarioAction::Run {
                    target,
                    command,
                    format,
                    decimal,
                    grid_step,
                    lambda,
                },
        } => {
            let scenario = resolve(&target)?;
            let options = RunOptions {
                grid_step: parse_rational(&grid_step)?,
                lambda,
                ..RunOptions::default()
            };
            let report = run_with(&scenario, command, &options)?;
            emit(&render(&report, format, decimal)?)?;
            Ok(report.passed())
        }
    }
}
