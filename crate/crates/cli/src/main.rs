//! Command-line front end: loads scenario configs, runs the experiment
//! campaigns, and writes plot-ready CSV results.
//!
//! Exit codes: 0 success, 2 config error, 3 acceptance-check failure,
//! 4 solver infeasibility budget exceeded.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::CommandError;

#[derive(Parser)]
#[command(
    name = "sea-scbf",
    version,
    about = "Safety-filtered control experiments for stochastic systems under state estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the campaign trial count.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Override the campaign seed base.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (overrides SEA_SCBF_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Additionally mirror every CSV as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exit-probability certificate versus empirical exit frequency over a
    /// horizon grid and noise sweep.
    BoundCompare {
        /// Multiply all variance proxies (negative-control hook).
        #[arg(long, hide = true, default_value_t = 1.0)]
        proxy_scale: f64,
    },
    /// Corridor motion planning: three filter methods under both
    /// facet-selection modes.
    MotionPlan {
        /// Also dump per-trial trajectories.
        #[arg(long)]
        trajectories: bool,
    },
    /// Lane-keeping campaign on SE(2), filtered and unfiltered.
    Se2Demo,
    /// Slit-traversal campaign on SE(3), filtered and unfiltered.
    Se3Slit,
    /// Run the oracle validation suite.
    Validate,
}

fn thread_count(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| {
        std::env::var("SEA_SCBF_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn run(cli: &Cli) -> Result<(), CommandError> {
    if let Some(threads) = thread_count(cli) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| config::ConfigError::Invalid(format!("thread pool: {e}")))?;
    }

    if let Command::Validate = cli.command {
        return commands::validate(cli.seed.unwrap_or(2024));
    }

    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config::ConfigError::Invalid("--config is required".into()))?;
    let config = config::load(path)?;
    let command_name = match &cli.command {
        Command::BoundCompare { .. } => "bound-compare",
        Command::MotionPlan { .. } => "motion-plan",
        Command::Se2Demo => "se2-demo",
        Command::Se3Slit => "se3-slit",
        Command::Validate => "validate",
    };
    if config.experiment != command_name {
        eprintln!(
            "note: config is labelled for `{}`, running `{command_name}`",
            config.experiment
        );
    }
    let trials = cli.trials.unwrap_or(config.campaign.trials);
    if trials == 0 {
        return Err(config::ConfigError::Invalid("trials must be at least 1".into()).into());
    }
    let seed_base = cli.seed.unwrap_or(config.campaign.seed_base);
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output.dir));
    if cli.threads.is_none() {
        if let Some(threads) = config.campaign.threads {
            // Config-level thread count applies when no flag/env was given.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }

    match &cli.command {
        Command::BoundCompare { proxy_scale } => {
            commands::bound_compare(&config, &out_dir, trials, seed_base, cli.json, *proxy_scale)
        }
        Command::MotionPlan { trajectories } => {
            commands::motion_plan(&config, &out_dir, trials, seed_base, cli.json, *trajectories)
        }
        Command::Se2Demo => commands::se2_demo(&config, &out_dir, trials, seed_base, cli.json),
        Command::Se3Slit => commands::se3_slit(&config, &out_dir, trials, seed_base, cli.json),
        Command::Validate => unreachable!("handled above"),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
