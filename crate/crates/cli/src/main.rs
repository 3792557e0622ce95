//! `rugged` — experiment runner for the weighted-l1 range models.
//!
//! Exit status: 0 on success, 1 when a check or certification fails, 2 on
//! usage or configuration errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{pick, EffectiveConfig, FileConfig};

#[derive(Debug)]
pub enum AppError {
    /// Bad flags or configuration: exit 2.
    Usage(String),
    /// Operational failure: exit 1.
    Run(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Run(m) => write!(f, "{m}"),
        }
    }
}

/// Numerically explore perturbed ranges of skew operators on weighted-l1
/// model spaces: bound tables, invariant suites, nonconvexity witnesses, and
/// the rugged-space interval pattern.
#[derive(Parser)]
#[command(name = "rugged", version, about, long_about = None)]
#[command(after_help = "\
Defaults: seed 0; lambda 0.5,1,2,4,8; output $RUGGED_OUT or ./runs.
head-dim: 50 (verify), 16 (explore), 8 (rugged-check l1), 9 (rugged-check l1-grid).
Config files are single JSON documents; unknown keys are rejected and flags
override file values. Each invocation writes <out>/<command>/ with config.json,
results.csv and summary.json (explore adds witnesses.json).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the distance floor, quadratic roots, threshold and identity
    /// residuals per lambda.
    BoundsTable(CommonArgs),
    /// Run a named invariant suite (space, skew, operators, bounds, whs,
    /// rugged, all) and write per-check residuals.
    Verify(VerifyArgs),
    /// Search for nonconvexity witnesses and emit the convexity gap table.
    Explore(ExploreArgs),
    /// Verify the rugged-space interval pattern for a preset.
    RuggedCheck(RuggedArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags given here override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed; fully determines all stochastic output.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Comma-separated lambda list, e.g. 0.5,1,2.
    #[arg(long, value_delimiter = ',', value_name = "CSVLIST")]
    lambda: Option<Vec<f64>>,
    /// Head dimension K of the model space.
    #[arg(long, value_name = "K")]
    head_dim: Option<usize>,
    /// Output directory root.
    #[arg(long, env = "RUGGED_OUT", value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Suite to run: space, skew, operators, bounds, whs, rugged, or all.
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,
}

#[derive(Args)]
struct ExploreArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Operator: gossez, neg-gossez, fp-grid, or neg-fp-grid.
    #[arg(long, value_name = "KIND")]
    op: Option<String>,
    /// Search restarts per lambda.
    #[arg(long, value_name = "N")]
    restarts: Option<usize>,
    /// Poll iterations per restart.
    #[arg(long, value_name = "N")]
    budget: Option<usize>,
}

#[derive(Args)]
struct RuggedArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Space preset: l1 or l1-grid.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

fn effective(
    command: &str,
    common: &CommonArgs,
    file: &FileConfig,
    default_head_dim: usize,
) -> EffectiveConfig {
    EffectiveConfig {
        command: command.to_string(),
        seed: pick(common.seed, file.seed, 0),
        lambdas: pick(
            common.lambda.clone(),
            file.lambdas.clone(),
            commands::default_lambdas(),
        ),
        head_dim: pick(common.head_dim, file.head_dim, default_head_dim),
        op: None,
        restarts: None,
        budget: None,
        initial_step: None,
        shrink: None,
        suite: None,
        preset: None,
        samples: None,
        out: pick(common.out.clone(), file.out.clone(), PathBuf::from("runs")),
    }
}

fn run(cli: Cli) -> Result<bool, AppError> {
    match cli.command {
        Command::BoundsTable(args) => {
            let file = FileConfig::load(args.config.as_deref())?;
            let cfg = effective("bounds-table", &args, &file, 50);
            commands::bounds_table(&cfg)
        }
        Command::Verify(args) => {
            let file = FileConfig::load(args.common.config.as_deref())?;
            let mut cfg = effective("verify", &args.common, &file, 50);
            cfg.suite = Some(pick(args.suite, file.suite.clone(), "all".into()));
            cfg.samples = Some(pick(None, file.samples, 2000));
            commands::verify(&cfg)
        }
        Command::Explore(args) => {
            let file = FileConfig::load(args.common.config.as_deref())?;
            let mut cfg = effective("explore", &args.common, &file, 16);
            cfg.op = Some(pick(args.op, file.op.clone(), "gossez".into()));
            cfg.restarts = Some(pick(args.restarts, file.restarts, 8));
            cfg.budget = Some(pick(args.budget, file.budget, 60));
            cfg.initial_step = Some(pick(None, file.initial_step, 1.0));
            cfg.shrink = Some(pick(None, file.shrink, 0.5));
            commands::explore(&cfg)
        }
        Command::RuggedCheck(args) => {
            let file = FileConfig::load(args.common.config.as_deref())?;
            let preset = pick(args.preset, file.preset.clone(), "l1".into());
            let default_k = if preset == "l1-grid" { 9 } else { 8 };
            let mut cfg = effective("rugged-check", &args.common, &file, default_k);
            cfg.preset = Some(preset);
            commands::rugged_check(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ AppError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
