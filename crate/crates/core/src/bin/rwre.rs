use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rwre::experiment::{self, ExperimentConfig};

/// Experiments for random walks in time-random environments.
#[derive(Parser)]
#[command(name = "rwre", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the law F_n of E_μ f(S_(n)) for each n.
    Simulate(Common),
    /// Sample the limit law F of E(f(B + σW) | W).
    Limit(Common),
    /// Distances between F_n and F across n, with trend and rate checks.
    Compare(Common),
    /// Environment simulation against the direct bio-normal construction.
    MatchedLaw(Common),
    /// Quenched expectations along one nested environment (σ = 0).
    AsConverge(Common),
    /// Moment and schedule hypotheses for the configured environment.
    Assumptions(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(common: &Common) -> rwre::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn execute(command: &Command, cfg: &ExperimentConfig) -> rwre::Result<bool> {
    Ok(match command {
        Command::Simulate(_) => {
            experiment::run_simulate(cfg)?;
            true
        }
        Command::Limit(_) => {
            experiment::run_limit(cfg)?;
            true
        }
        Command::Compare(_) => experiment::run_convergence(cfg)?.passed,
        Command::MatchedLaw(_) => experiment::run_matched_law(cfg)?.passed,
        Command::AsConverge(_) => experiment::run_as_convergence(cfg)?.passed,
        Command::Assumptions(_) => experiment::run_assumption_report(cfg)?.report.passed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Simulate(c)
        | Command::Limit(c)
        | Command::Compare(c)
        | Command::MatchedLaw(c)
        | Command::AsConverge(c)
        | Command::Assumptions(c) => c,
    };
    let cfg = match load(common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("rwre: {e}");
            return ExitCode::from(1);
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = common.threads {
        if t == 0 {
            eprintln!("rwre: --threads must be at least 1");
            return ExitCode::from(1);
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("rwre: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| execute(&cli.command, &cfg)) {
        Ok(true) => {
            eprintln!(
                "rwre: checks passed; results in {}",
                cfg.output_dir.display()
            );
            ExitCode::SUCCESS
        }
        Ok(false) => {
            eprintln!(
                "rwre: checks failed; see {}",
                cfg.output_dir.join("summary.json").display()
            );
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("rwre: {e}");
            ExitCode::from(1)
        }
    }
}
