//! Command-line front end for the failure-classification pipeline.
//!
//! `failsvm --config run.toml --out results/` executes the full stage
//! sequence: label, train-kernel, grid-search, fit, curve, metrics. A single
//! stage can be selected with `--stage <name>` or the matching subcommand.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use failsvm::pipeline::{self, RunConfig, Stage};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "failsvm",
    version,
    about = "Kernel-SVM failure classification pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    opts: CommonOpts,
}

#[derive(Args)]
struct CommonOpts {
    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory for reports and models.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Cap on worker threads (default: one per logical CPU).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Run a single stage: label | train-kernel | grid-search | fit | curve | metrics.
    #[arg(long, global = true, value_name = "NAME")]
    stage: Option<String>,
    /// Override a named seed, e.g. `--seed-override split_seed=9` (repeatable).
    #[arg(long = "seed-override", global = true, value_name = "NAME=VALUE")]
    seed_override: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Execute the full pipeline (the default).
    Run,
    /// Ingest load paths and write the labeled dataset.
    Label,
    /// Maximize kernel-target alignment and freeze the kernel specs.
    TrainKernel,
    /// Grid-search cross-validation over the slack penalty.
    GridSearch,
    /// Fit the SVM with the selected C and emit model plus predictions.
    Fit,
    /// Learning curve over nested training subsets.
    Curve,
    /// Five classification metrics from a predictions file.
    Metrics,
}

impl Command {
    fn stage(self) -> Option<Stage> {
        match self {
            Command::Run => None,
            Command::Label => Some(Stage::Label),
            Command::TrainKernel => Some(Stage::TrainKernel),
            Command::GridSearch => Some(Stage::GridSearch),
            Command::Fit => Some(Stage::Fit),
            Command::Curve => Some(Stage::Curve),
            Command::Metrics => Some(Stage::Metrics),
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = real_main() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn real_main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let config_path = cli
        .opts
        .config
        .clone()
        .context("--config <FILE> is required")?;

    let mut config = RunConfig::load(&config_path)
        .with_context(|| format!("cannot load config {}", config_path.display()))?;
    let out_dir = cli
        .opts
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .context("an output directory is required (--out <DIR> or [output] dir in the config)")?;
    for pair in &cli.opts.seed_override {
        let (name, value) = pair
            .split_once('=')
            .with_context(|| format!("--seed-override takes NAME=VALUE, got {pair:?}"))?;
        let value: u64 = value
            .parse()
            .with_context(|| format!("seed value in {pair:?} must be an unsigned integer"))?;
        config.seeds.set(name, value)?;
    }

    let stage = match (cli.command, &cli.opts.stage) {
        (Some(cmd), None) => cmd.stage(),
        (None, Some(name)) => Some(Stage::from_name(name)?),
        (None, None) => None,
        (Some(cmd), Some(name)) => {
            let by_flag = Stage::from_name(name)?;
            match cmd.stage() {
                Some(s) if s == by_flag => Some(s),
                None => Some(by_flag),
                Some(s) => bail!(
                    "conflicting stage selection: subcommand {} vs --stage {}",
                    s.name(),
                    by_flag.name()
                ),
            }
        }
    };

    let report = pipeline::with_workers(cli.opts.workers, || match stage {
        None => pipeline::run(&config, &out_dir),
        Some(stage) => pipeline::run_stage(&config, &out_dir, stage),
    })??;

    for line in &report.lines {
        println!("{line}");
    }
    println!(
        "wrote {} file(s) to {}",
        report.files.len(),
        out_dir.display()
    );
    Ok(())
}
