use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rmab::scenario::ScenarioName;
use rmab_cli::{gap_report_for, run_config_file, run_scenario, CliError, Overrides};

#[derive(Parser)]
#[command(
    name = "rmab",
    version,
    about = "Restless multi-armed bandit policies and a deterministic Monte Carlo regret harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunFlags {
    /// Override the number of independent runs
    #[arg(long)]
    runs: Option<u32>,
    /// Override the episode horizon (total decisions)
    #[arg(long)]
    horizon: Option<u64>,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files and the manifest
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl RunFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            runs: self.runs,
            horizon: self.horizon,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a JSON config file
    Simulate {
        /// Path to the config document
        config: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run a built-in scenario preset
    Scenario {
        /// One of: fig2_markov_slope, fig3_markov_regret, fig4_bernoulli_regret
        name: String,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Print per-band gap diagnostics (CSV) for a config file or preset name
    Gaps {
        /// Path to a config document, or a preset name
        config: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, flags } => {
            let (_, files) = run_config_file(&config, &flags.out, &flags.overrides())?;
            for file in files {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
        Command::Scenario { name, flags } => {
            let name =
                ScenarioName::parse(&name).ok_or(CliError::UnknownScenario(name))?;
            let (_, files) = run_scenario(name, &flags.out, &flags.overrides())?;
            for file in files {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
        Command::Gaps { config } => {
            print!("{}", gap_report_for(&config)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
