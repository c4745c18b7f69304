//! Command-line runner: single training runs, the spectral-radius sweep
//! and the optimizer x learning-rate sweep, all emitting CSV.
//!
//! Exit codes: 0 when the run met its success criterion (sweeps always
//! exit 0 after completing), 2 when a training run hit the episode cap,
//! 1 on usage or configuration errors.

use clap::{Args, Parser, Subcommand};
use esqn_core::experiments::{
    self, run_g_sweep, run_lr_sweep, write_episodes_csv, write_g_sweep_csvs, write_lr_sweep_csvs,
    SweepSpec,
};
use esqn_core::{AgentConfig, OptimKind, ReadoutKind, Task};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "esqn",
    about = "Echo state Q-network training runs and hyperparameter sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Task: cartpole, mountaincar, acrobot or pendulum.
    task: String,
    /// Readout architecture.
    #[arg(long, default_value = "mlp")]
    readout: String,
    /// Output directory for CSV files (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Flat key = value file overriding any agent config field.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One training run; writes episodes.csv and a readout checkpoint.
    Train {
        #[command(flatten)]
        common: CommonArgs,
        /// Reservoir gain override.
        #[arg(long)]
        g: Option<f64>,
        /// Learning rate override.
        #[arg(long)]
        lr: Option<f64>,
        /// Optimizer override: amsgrad, adam or sgd.
        #[arg(long)]
        optimizer: Option<String>,
        /// Master seed for the run.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Success rate across seeds for each reservoir gain g in 0.0..=2.0.
    SweepG {
        #[command(flatten)]
        common: CommonArgs,
        /// Independent runs per g value (desk scale).
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Restore the full 100 seeds per cell.
        #[arg(long)]
        full: bool,
        /// Master seed for the cell fan-out.
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
    },
    /// Success rate over the optimizer x learning-rate grid
    /// (lr = 0.000005 * 2^n, n in 0..=19).
    SweepLr {
        #[command(flatten)]
        common: CommonArgs,
        /// Independent runs per grid cell.
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Restore the full 100 seeds per cell.
        #[arg(long)]
        full: bool,
        /// Master seed for the cell fan-out.
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit with its own code; the contract here is 1
            // for any usage error.
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn parse_common(common: &CommonArgs) -> esqn_core::Result<(Task, ReadoutKind, AgentConfig)> {
    let task = Task::parse(&common.task)?;
    let readout = ReadoutKind::parse(&common.readout)?;
    let mut cfg = AgentConfig::for_task(task, readout);
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)?;
        experiments::apply_config_overrides(&mut cfg, &text)?;
    }
    fs::create_dir_all(&common.out)?;
    Ok((task, readout, cfg))
}

fn run(cli: Cli) -> esqn_core::Result<ExitCode> {
    match cli.command {
        Command::Train {
            common,
            g,
            lr,
            optimizer,
            seed,
        } => {
            let (task, _, mut cfg) = parse_common(&common)?;
            if let Some(g) = g {
                cfg.reservoir.g = g;
            }
            if let Some(lr) = lr {
                cfg.optimizer.lr = lr;
            }
            if let Some(name) = optimizer {
                cfg.optimizer.kind = OptimKind::parse(&name)?;
            }
            cfg.validate()?;

            eprintln!(
                "training {task} (readout {}, optimizer {}, lr {}, g {}, seed {seed})",
                cfg.readout.as_str(),
                cfg.optimizer.kind.as_str(),
                cfg.optimizer.lr,
                cfg.reservoir.g
            );
            let started = std::time::Instant::now();
            let (report, agent) = experiments::run_single_with_agent(task, &cfg, seed)?;

            let csv_path = common.out.join("episodes.csv");
            write_episodes_csv(&csv_path, &report)?;
            let ckpt_path = common.out.join("readout.txt");
            let mut ckpt = fs::File::create(&ckpt_path)?;
            agent.main_net().write_text(&mut ckpt)?;

            let elapsed = started.elapsed();
            if let Some(episode) = report.success_episode {
                println!(
                    "episode {episode}: completed the task {} times in a row \
                     ({} episodes total, {:.1}s); wrote {} and {}",
                    cfg.success_streak,
                    report.episodes.len(),
                    elapsed.as_secs_f64(),
                    csv_path.display(),
                    ckpt_path.display()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!(
                    "no success streak within {} episodes ({:.1}s); wrote {} and {}",
                    report.episodes.len(),
                    elapsed.as_secs_f64(),
                    csv_path.display(),
                    ckpt_path.display()
                );
                Ok(ExitCode::from(2))
            }
        }
        Command::SweepG {
            common,
            seeds,
            full,
            master_seed,
        } => {
            let (task, readout, cfg) = parse_common(&common)?;
            let mut spec = SweepSpec::g_sweep(task, readout);
            spec.base = cfg;
            spec.seeds = if full { 100 } else { seeds };
            spec.master_seed = master_seed;

            let result = run_g_sweep(&spec)?;
            let (runs_path, rates_path) = write_g_sweep_csvs(&result, &common.out)?;
            for cell in &result.cells {
                println!(
                    "{task} {} g={:.1}: success rate {:.2}",
                    readout.as_str(),
                    cell.g,
                    cell.success_rate
                );
            }
            eprintln!(
                "swept {} cells x {} seeds in {:.1}s; wrote {} and {}",
                result.cells.len(),
                spec.seeds,
                result.wall.as_secs_f64(),
                runs_path.display(),
                rates_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepLr {
            common,
            seeds,
            full,
            master_seed,
        } => {
            let (task, readout, cfg) = parse_common(&common)?;
            let mut spec = SweepSpec::lr_sweep(task, readout);
            spec.base = cfg;
            spec.seeds = if full { 100 } else { seeds };
            spec.master_seed = master_seed;

            let result = run_lr_sweep(&spec)?;
            let (runs_path, rates_path) = write_lr_sweep_csvs(&result, &common.out)?;
            for cell in &result.cells {
                println!(
                    "{task} {} {} n={} lr={:.2e}: success rate {:.2}",
                    readout.as_str(),
                    cell.optimizer.as_str(),
                    cell.n,
                    cell.lr,
                    cell.success_rate
                );
            }
            eprintln!(
                "swept {} cells x {} seeds in {:.1}s; wrote {} and {}",
                result.cells.len(),
                spec.seeds,
                result.wall.as_secs_f64(),
                runs_path.display(),
                rates_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
