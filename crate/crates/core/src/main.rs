use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use chronofrac::cli::{self, Outcome, RunConfig, SweepRange, EXIT_CONFIG};

#[derive(Parser)]
#[command(version, about = "Fractional nonlocal thermistor problem on time scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem by Picard iteration
    Solve(Common),
    /// Report the uniqueness threshold and contraction constant
    Threshold(Common),
    /// Solve over a range of lambda values
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda_min: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        lambda_step: Option<f64>,
    },
    /// Run the oracle case suites and composition studies
    Verify {
        #[command(flatten)]
        common: Common,
        /// Directory of *.json case suites (overrides the config)
        #[arg(long)]
        cases: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Exit with status 3 when the solver does not converge
    #[arg(long)]
    strict: bool,
}

impl Common {
    fn load(&self) -> anyhow::Result<RunConfig> {
        match &self.config {
            Some(path) => cli::load_config(path),
            None => Ok(RunConfig::default()),
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Solve(c) => cli::cmd_solve(&c.load()?, &c.out, c.strict),
        Command::Threshold(c) => cli::cmd_threshold(&c.load()?, &c.out),
        Command::Sweep { common, lambda_min, lambda_max, lambda_step } => {
            let config = common.load()?;
            let base = config.sweep;
            let pick = |flag: Option<f64>, from: fn(&SweepRange) -> f64, name: &str| {
                flag.or(base.as_ref().map(from))
                    .with_context(|| format!("sweep needs --{name} or sweep.{} in the config", name.replace('-', "_")))
            };
            let range = SweepRange {
                lambda_min: pick(lambda_min, |r| r.lambda_min, "lambda-min")?,
                lambda_max: pick(lambda_max, |r| r.lambda_max, "lambda-max")?,
                lambda_step: pick(lambda_step, |r| r.lambda_step, "lambda-step")?,
            };
            cli::cmd_sweep(&config, &common.out, range, common.strict)
        }
        Command::Verify { common, cases } => {
            let config = common.load()?;
            let verify = config.verify.unwrap_or_default();
            let dir = cases.or(verify.cases_dir).unwrap_or_else(|| PathBuf::from("cases"));
            let out = common.config.is_some().then_some(common.out.as_path());
            cli::cmd_verify(&dir, verify.suites.as_deref(), out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
