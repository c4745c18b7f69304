//! Training runs, spectral-radius and learning-rate sweeps, and their CSV
//! output.
//!
//! Every sweep cell (task, readout, cell parameters, seed index) derives
//! its own master seed from a canonical descriptor string, so cells are
//! independent of execution order and of which other cells run; the
//! worker pool can execute them in parallel without affecting results.
//! CSV files are byte-reproducible: floats print with 9 significant
//! digits, rows are sorted by their key columns, and no timestamps are
//! recorded.

use crate::agent::{Agent, AgentConfig, RunReport, RunRngs};
use crate::envs::Task;
use crate::error::{Error, Result};
use crate::numerics::SeededRng;
use crate::optim::{OptimConfig, OptimKind};
use crate::readout::ReadoutKind;
use rayon::prelude::*;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

/// 9-significant-digit float formatting used in every CSV.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Writes a UTF-8, comma-separated file: header row, one record per line.
/// Callers pass rows already sorted by their key columns.
pub fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::InvalidConfig(format!(
                "csv row has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Seed fan-out
// ---------------------------------------------------------------------------

/// Stable per-cell seed: `splitmix64(master ^ fnv1a(descriptor))`, the
/// same derivation as named RNG sub-streams. The descriptor uses the
/// canonical 9-digit float formatting, e.g.
/// `task=cartpole|readout=mlp|g=9.00000000e-1|seed=3`.
pub fn cell_seed(master_seed: u64, descriptor: &str) -> u64 {
    SeededRng::substream(master_seed, descriptor).seed()
}

fn g_descriptor(task: Task, readout: ReadoutKind, g: f64, seed_index: usize) -> String {
    format!(
        "task={}|readout={}|g={}|seed={}",
        task.as_str(),
        readout.as_str(),
        fmt_sig9(g),
        seed_index
    )
}

fn lr_descriptor(
    task: Task,
    readout: ReadoutKind,
    optimizer: OptimKind,
    n: u32,
    seed_index: usize,
) -> String {
    format!(
        "task={}|readout={}|optimizer={}|n={}|seed={}",
        task.as_str(),
        readout.as_str(),
        optimizer.as_str(),
        n,
        seed_index
    )
}

// ---------------------------------------------------------------------------
// Single runs
// ---------------------------------------------------------------------------

/// One full training run for a task under the given config and master
/// seed.
pub fn run_single(task: Task, cfg: &AgentConfig, master_seed: u64) -> Result<RunReport> {
    let spec = task.spec();
    let mut env = task.build(&cfg.env);
    let mut agent = Agent::new(cfg.clone(), spec.n_obs, spec.n_actions, master_seed)?;
    let mut rngs = RunRngs::new(master_seed);
    agent.run_training(&mut env, &mut rngs)
}

/// Like [`run_single`] but also returns the trained agent, so callers can
/// checkpoint the readout.
pub fn run_single_with_agent(
    task: Task,
    cfg: &AgentConfig,
    master_seed: u64,
) -> Result<(RunReport, Agent)> {
    let spec = task.spec();
    let mut env = task.build(&cfg.env);
    let mut agent = Agent::new(cfg.clone(), spec.n_obs, spec.n_actions, master_seed)?;
    let mut rngs = RunRngs::new(master_seed);
    let report = agent.run_training(&mut env, &mut rngs)?;
    Ok((report, agent))
}

/// Writes `episodes.csv` for a run: one row per episode with the schema
/// `episode,steps,total_reward,epsilon,mean_loss,completed`.
pub fn write_episodes_csv(path: &Path, report: &RunReport) -> Result<()> {
    let header = [
        "episode",
        "steps",
        "total_reward",
        "epsilon",
        "mean_loss",
        "completed",
    ];
    let rows: Vec<Vec<String>> = report
        .episodes
        .iter()
        .map(|e| {
            vec![
                e.episode.to_string(),
                e.steps.to_string(),
                fmt_sig9(e.total_reward),
                fmt_sig9(e.epsilon),
                e.mean_loss.map(fmt_sig9).unwrap_or_default(),
                e.completed.to_string(),
            ]
        })
        .collect();
    emit_csv(path, &header, &rows)
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Grid description for the spectral-radius and learning-rate sweeps.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub task: Task,
    pub readout: ReadoutKind,
    /// Gains for the g sweep; the default grid is 0.0..=2.0 step 0.1.
    pub g_values: Vec<f64>,
    /// Optimizer kinds crossed with exponents for the lr sweep.
    pub optimizers: Vec<OptimKind>,
    /// Exponents n with lr = 0.000005 * 2^n.
    pub n_values: Vec<u32>,
    /// Independent runs per cell.
    pub seeds: usize,
    pub master_seed: u64,
    /// Per-run config template; each cell overrides g or the optimizer.
    pub base: AgentConfig,
}

pub const LR_BASE: f64 = 0.000005;

/// lr = 0.000005 * 2^n, exact in f64 (scaling by a power of two).
pub fn lr_for_exponent(n: u32) -> f64 {
    LR_BASE * (1u64 << n) as f64
}

impl SweepSpec {
    /// Spectral-radius sweep over g in 0.0..=2.0 step 0.1, desk-scale 10
    /// seeds per cell.
    pub fn g_sweep(task: Task, readout: ReadoutKind) -> Self {
        SweepSpec {
            task,
            readout,
            g_values: (0..=20).map(|i| i as f64 * 0.1).collect(),
            optimizers: Vec::new(),
            n_values: Vec::new(),
            seeds: 10,
            master_seed: 0,
            base: AgentConfig::for_task(task, readout),
        }
    }

    /// Learning-rate grid: each of AMSGrad, SGD and Adam at
    /// lr = 0.000005 * 2^n for n in 0..=19.
    pub fn lr_sweep(task: Task, readout: ReadoutKind) -> Self {
        SweepSpec {
            task,
            readout,
            g_values: Vec::new(),
            optimizers: vec![OptimKind::AmsGrad, OptimKind::Sgd, OptimKind::Adam],
            n_values: (0..=19).collect(),
            seeds: 10,
            master_seed: 0,
            base: AgentConfig::for_task(task, readout),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(Error::InvalidConfig("seeds must be >= 1".into()));
        }
        if self.g_values.iter().any(|&g| g < 0.0 || !g.is_finite()) {
            return Err(Error::InvalidConfig("g values must be >= 0".into()));
        }
        Ok(())
    }
}

/// One seed's outcome within a sweep cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellRun {
    pub seed_index: usize,
    pub master_seed: u64,
    pub success: bool,
    pub success_episode: Option<usize>,
    pub episodes_run: usize,
}

/// All runs of one g cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GCell {
    pub g: f64,
    pub runs: Vec<CellRun>,
    pub success_rate: f64,
}

/// All runs of one (optimizer, n) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct LrCell {
    pub optimizer: OptimKind,
    pub n: u32,
    pub lr: f64,
    pub runs: Vec<CellRun>,
    pub success_rate: f64,
}

#[derive(Clone, Debug)]
pub struct GSweepResult {
    pub task: Task,
    pub readout: ReadoutKind,
    pub cells: Vec<GCell>,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct LrSweepResult {
    pub task: Task,
    pub readout: ReadoutKind,
    pub cells: Vec<LrCell>,
    pub wall: Duration,
}

fn run_cell(task: Task, cfg: &AgentConfig, seed_index: usize, master_seed: u64) -> Result<CellRun> {
    let report = run_single(task, cfg, master_seed)?;
    Ok(CellRun {
        seed_index,
        master_seed,
        success: report.success,
        success_episode: report.success_episode,
        episodes_run: report.episodes.len(),
    })
}

/// Runs the g sweep; cells execute in a parallel worker pool but own all
/// of their state, so the result is identical at any worker count.
pub fn run_g_sweep(spec: &SweepSpec) -> Result<GSweepResult> {
    spec.validate()?;
    let started = Instant::now();
    let mut jobs = Vec::new();
    for &g in &spec.g_values {
        for seed_index in 0..spec.seeds {
            let mut cfg = spec.base.clone();
            cfg.reservoir.g = g;
            let seed = cell_seed(
                spec.master_seed,
                &g_descriptor(spec.task, spec.readout, g, seed_index),
            );
            jobs.push((g, seed_index, seed, cfg));
        }
    }
    let runs: Result<Vec<(f64, CellRun)>> = jobs
        .into_par_iter()
        .map(|(g, seed_index, seed, cfg)| {
            run_cell(spec.task, &cfg, seed_index, seed).map(|r| (g, r))
        })
        .collect();
    let runs = runs?;

    let mut cells = Vec::with_capacity(spec.g_values.len());
    for &g in &spec.g_values {
        let cell_runs: Vec<CellRun> = runs
            .iter()
            .filter(|(cell_g, _)| *cell_g == g)
            .map(|(_, r)| r.clone())
            .collect();
        let successes = cell_runs.iter().filter(|r| r.success).count();
        cells.push(GCell {
            g,
            success_rate: successes as f64 / spec.seeds as f64,
            runs: cell_runs,
        });
    }
    Ok(GSweepResult {
        task: spec.task,
        readout: spec.readout,
        cells,
        wall: started.elapsed(),
    })
}

/// Runs the optimizer x learning-rate grid.
pub fn run_lr_sweep(spec: &SweepSpec) -> Result<LrSweepResult> {
    spec.validate()?;
    let started = Instant::now();
    let mut jobs = Vec::new();
    for &optimizer in &spec.optimizers {
        for &n in &spec.n_values {
            for seed_index in 0..spec.seeds {
                let mut cfg = spec.base.clone();
                cfg.optimizer = OptimConfig::new(optimizer, lr_for_exponent(n));
                let seed = cell_seed(
                    spec.master_seed,
                    &lr_descriptor(spec.task, spec.readout, optimizer, n, seed_index),
                );
                jobs.push((optimizer, n, seed_index, seed, cfg));
            }
        }
    }
    let runs: Result<Vec<(OptimKind, u32, CellRun)>> = jobs
        .into_par_iter()
        .map(|(optimizer, n, seed_index, seed, cfg)| {
            run_cell(spec.task, &cfg, seed_index, seed).map(|r| (optimizer, n, r))
        })
        .collect();
    let runs = runs?;

    let mut cells = Vec::new();
    for &optimizer in &spec.optimizers {
        for &n in &spec.n_values {
            let cell_runs: Vec<CellRun> = runs
                .iter()
                .filter(|(o, m, _)| *o == optimizer && *m == n)
                .map(|(_, _, r)| r.clone())
                .collect();
            let successes = cell_runs.iter().filter(|r| r.success).count();
            cells.push(LrCell {
                optimizer,
                n,
                lr: lr_for_exponent(n),
                success_rate: successes as f64 / spec.seeds as f64,
                runs: cell_runs,
            });
        }
    }
    Ok(LrSweepResult {
        task: spec.task,
        readout: spec.readout,
        cells,
        wall: started.elapsed(),
    })
}

/// Writes `sweep_g_runs.csv` (task, readout, g, seed, success,
/// success_episode) and `sweep_g_rates.csv` (task, readout, g,
/// success_rate) into `out_dir`.
pub fn write_g_sweep_csvs(result: &GSweepResult, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let mut run_rows = Vec::new();
    let mut rate_rows = Vec::new();
    let mut cells: Vec<&GCell> = result.cells.iter().collect();
    cells.sort_by(|a, b| a.g.partial_cmp(&b.g).unwrap());
    for cell in cells {
        let mut runs: Vec<&CellRun> = cell.runs.iter().collect();
        runs.sort_by_key(|r| r.seed_index);
        for run in runs {
            run_rows.push(vec![
                result.task.as_str().to_string(),
                result.readout.as_str().to_string(),
                fmt_sig9(cell.g),
                run.seed_index.to_string(),
                run.success.to_string(),
                run.success_episode
                    .map(|e| e.to_string())
                    .unwrap_or_default(),
            ]);
        }
        rate_rows.push(vec![
            result.task.as_str().to_string(),
            result.readout.as_str().to_string(),
            fmt_sig9(cell.g),
            fmt_sig9(cell.success_rate),
        ]);
    }
    let runs_path = out_dir.join("sweep_g_runs.csv");
    let rates_path = out_dir.join("sweep_g_rates.csv");
    emit_csv(
        &runs_path,
        &["task", "readout", "g", "seed", "success", "success_episode"],
        &run_rows,
    )?;
    emit_csv(
        &rates_path,
        &["task", "readout", "g", "success_rate"],
        &rate_rows,
    )?;
    Ok((runs_path, rates_path))
}

/// Writes `sweep_lr_runs.csv` (task, readout, optimizer, n, lr, seed,
/// success) and `sweep_lr_rates.csv` (task, readout, optimizer, n, lr,
/// success_rate) into `out_dir`.
pub fn write_lr_sweep_csvs(result: &LrSweepResult, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let mut cells: Vec<&LrCell> = result.cells.iter().collect();
    cells.sort_by(|a, b| {
        a.optimizer
            .as_str()
            .cmp(b.optimizer.as_str())
            .then(a.n.cmp(&b.n))
    });
    let mut run_rows = Vec::new();
    let mut rate_rows = Vec::new();
    for cell in cells {
        let mut runs: Vec<&CellRun> = cell.runs.iter().collect();
        runs.sort_by_key(|r| r.seed_index);
        for run in runs {
            run_rows.push(vec![
                result.task.as_str().to_string(),
                result.readout.as_str().to_string(),
                cell.optimizer.as_str().to_string(),
                cell.n.to_string(),
                fmt_sig9(cell.lr),
                run.seed_index.to_string(),
                run.success.to_string(),
            ]);
        }
        rate_rows.push(vec![
            result.task.as_str().to_string(),
            result.readout.as_str().to_string(),
            cell.optimizer.as_str().to_string(),
            cell.n.to_string(),
            fmt_sig9(cell.lr),
            fmt_sig9(cell.success_rate),
        ]);
    }
    let runs_path = out_dir.join("sweep_lr_runs.csv");
    let rates_path = out_dir.join("sweep_lr_rates.csv");
    emit_csv(
        &runs_path,
        &["task", "readout", "optimizer", "n", "lr", "seed", "success"],
        &run_rows,
    )?;
    emit_csv(
        &rates_path,
        &["task", "readout", "optimizer", "n", "lr", "success_rate"],
        &rate_rows,
    )?;
    Ok((runs_path, rates_path))
}

// ---------------------------------------------------------------------------
// Flat key = value config overrides
// ---------------------------------------------------------------------------

/// Applies `key = value` override lines (blank lines and `#` comments
/// allowed) onto an [`AgentConfig`]. Unknown keys are errors.
pub fn apply_config_overrides(cfg: &mut AgentConfig, text: &str) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected key = value", lineno + 1))
        })?;
        apply_one_override(cfg, key.trim(), value.trim())
            .map_err(|e| Error::InvalidConfig(format!("line {}: {e}", lineno + 1)))?;
    }
    Ok(())
}

fn apply_one_override(cfg: &mut AgentConfig, key: &str, value: &str) -> Result<()> {
    fn real(value: &str) -> Result<f64> {
        value
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{value}'")))
    }
    fn count(value: &str) -> Result<usize> {
        value
            .parse()
            .map_err(|_| Error::Parse(format!("bad count '{value}'")))
    }
    fn flag(value: &str) -> Result<bool> {
        value
            .parse()
            .map_err(|_| Error::Parse(format!("bad boolean '{value}'")))
    }
    match key {
        "gamma" => cfg.gamma = real(value)?,
        "epsilon_start" => cfg.epsilon_start = real(value)?,
        "epsilon_floor" => cfg.epsilon_floor = real(value)?,
        "epsilon_decay_episodes" => cfg.epsilon_decay_episodes = count(value)?,
        "batch_size" => cfg.batch_size = count(value)?,
        "memory_capacity" => cfg.memory_capacity = count(value)?,
        "target_sync_every" => cfg.target_sync_every = count(value)?,
        "max_episodes" => cfg.max_episodes = count(value)?,
        "success_streak" => cfg.success_streak = count(value)?,
        "readout" => cfg.readout = ReadoutKind::parse(value)?,
        "n_hidden" => cfg.n_hidden = count(value)?,
        "optimizer" => cfg.optimizer.kind = OptimKind::parse(value)?,
        "lr" => cfg.optimizer.lr = real(value)?,
        "beta1" => cfg.optimizer.beta1 = real(value)?,
        "beta2" => cfg.optimizer.beta2 = real(value)?,
        "eps" => cfg.optimizer.eps = real(value)?,
        "n_x" => cfg.reservoir.n_x = count(value)?,
        "p" => cfg.reservoir.p = real(value)?,
        "g" => cfg.reservoir.g = real(value)?,
        "input_scale" => cfg.reservoir.input_scale = real(value)?,
        "bias_scale" => cfg.reservoir.bias_scale = real(value)?,
        "reset_reservoir_each_episode" => cfg.reset_reservoir_each_episode = flag(value)?,
        "pendulum_success_window" => cfg.env.pendulum_success_window = count(value)?,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown config key '{other}'"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_cfg(task: Task) -> AgentConfig {
        let mut cfg = AgentConfig::for_task(task, ReadoutKind::Mlp);
        cfg.reservoir.n_x = 4;
        cfg.n_hidden = 4;
        cfg.batch_size = 8;
        cfg.memory_capacity = 32;
        cfg.max_episodes = 2;
        cfg
    }

    #[test]
    fn sig9_round_trips_within_bound() {
        // 9 significant digits bound the relative round-trip error by
        // 5e-9 (half an ulp in the 9th digit).
        let mut rng = SeededRng::new(3);
        for _ in 0..1000 {
            let x = rng.uniform(-1.0, 1.0) * 10f64.powi(rng.below(12) as i32 - 6);
            let back: f64 = fmt_sig9(x).parse().unwrap();
            assert!(
                (back - x).abs() <= 5e-9 * x.abs().max(1e-300),
                "{x} -> {back}"
            );
        }
        assert_eq!(fmt_sig9(0.0), "0.00000000e0");
        assert_eq!(fmt_sig9(2.4), "2.40000000e0");
    }

    #[test]
    fn empty_rows_give_header_only_file() {
        let dir = std::env::temp_dir().join("esqn_csv_test_empty");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        emit_csv(&path, &["a", "b"], &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n");
    }

    #[test]
    fn csv_rewrite_is_byte_identical() {
        let dir = std::env::temp_dir().join("esqn_csv_test_bytes");
        std::fs::create_dir_all(&dir).unwrap();
        let rows = vec![
            vec!["x".to_string(), fmt_sig9(1.0 / 3.0)],
            vec!["y".to_string(), fmt_sig9(-2.5e-7)],
        ];
        let p1 = dir.join("one.csv");
        let p2 = dir.join("two.csv");
        emit_csv(&p1, &["k", "v"], &rows).unwrap();
        emit_csv(&p2, &["k", "v"], &rows).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn lr_grid_values_are_exact() {
        for n in 0..=19u32 {
            let lr = lr_for_exponent(n);
            assert_eq!(lr, 0.000005 * 2f64.powi(n as i32));
        }
        assert_eq!(lr_for_exponent(0), 5e-6);
    }

    #[test]
    fn cell_seeds_are_stable_and_distinct() {
        // Frozen derivations: these values lock the fan-out scheme.
        let d = g_descriptor(Task::CartPole, ReadoutKind::Mlp, 0.9, 3);
        assert_eq!(d, "task=cartpole|readout=mlp|g=9.00000000e-1|seed=3");
        assert_eq!(cell_seed(0, &d), cell_seed(0, &d));
        assert_ne!(cell_seed(0, &d), cell_seed(1, &d));
        let d2 = g_descriptor(Task::CartPole, ReadoutKind::Mlp, 0.9, 4);
        assert_ne!(cell_seed(0, &d), cell_seed(0, &d2));
    }

    #[test]
    fn episodes_csv_schema_and_epsilon_column() {
        let cfg = tiny_cfg(Task::CartPole);
        let report = run_single(Task::CartPole, &cfg, 5).unwrap();
        let dir = std::env::temp_dir().join("esqn_csv_test_episodes");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("episodes.csv");
        write_episodes_csv(&path, &report).unwrap();

        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "episode,steps,total_reward,epsilon,mean_loss,completed"
        );
        let rows: Vec<&str> = lines.collect();
        assert!(rows.len() <= 500);
        let schedule_cfg = AgentConfig::for_task(Task::CartPole, ReadoutKind::Mlp);
        for (i, row) in rows.iter().enumerate() {
            let fields: Vec<&str> = row.split(',').collect();
            assert_eq!(fields.len(), 6);
            assert_eq!(fields[0].parse::<usize>().unwrap(), i + 1, "monotone index");
            let eps: f64 = fields[3].parse().unwrap();
            let expected = schedule_cfg.epsilon_after(i);
            assert!((eps - expected).abs() < 1e-9, "epsilon row {i}");
        }
    }

    #[test]
    fn train_run_is_reproducible() {
        let cfg = tiny_cfg(Task::CartPole);
        let a = run_single(Task::CartPole, &cfg, 11).unwrap();
        let b = run_single(Task::CartPole, &cfg, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_cells_are_independent_of_grid_shape() {
        // The g = 0.5 cell must come out the same alone and inside a
        // larger grid.
        let mut solo = SweepSpec::g_sweep(Task::CartPole, ReadoutKind::Mlp);
        solo.base = tiny_cfg(Task::CartPole);
        solo.g_values = vec![0.5];
        solo.seeds = 2;
        let mut grid = solo.clone();
        grid.g_values = vec![0.1, 0.5, 1.1];

        let solo_result = run_g_sweep(&solo).unwrap();
        let grid_result = run_g_sweep(&grid).unwrap();
        let from_grid = grid_result.cells.iter().find(|c| c.g == 0.5).unwrap();
        assert_eq!(solo_result.cells[0].runs, from_grid.runs);
        assert_eq!(solo_result.cells[0].success_rate, from_grid.success_rate);
    }

    #[test]
    fn g_sweep_csvs_have_declared_schemas() {
        let mut spec = SweepSpec::g_sweep(Task::MountainCar, ReadoutKind::Mlp);
        spec.base = tiny_cfg(Task::MountainCar);
        spec.g_values = vec![0.0, 0.9];
        spec.seeds = 2;
        let result = run_g_sweep(&spec).unwrap();
        let dir = std::env::temp_dir().join("esqn_csv_test_gsweep");
        std::fs::create_dir_all(&dir).unwrap();
        let (runs_path, rates_path) = write_g_sweep_csvs(&result, &dir).unwrap();

        let runs = std::fs::read_to_string(&runs_path).unwrap();
        let mut lines = runs.lines();
        assert_eq!(
            lines.next().unwrap(),
            "task,readout,g,seed,success,success_episode"
        );
        assert_eq!(lines.count(), 4);
        let rates = std::fs::read_to_string(&rates_path).unwrap();
        let mut lines = rates.lines();
        assert_eq!(lines.next().unwrap(), "task,readout,g,success_rate");
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn lr_sweep_grid_cardinality() {
        let mut spec = SweepSpec::lr_sweep(Task::CartPole, ReadoutKind::Mlp);
        spec.base = tiny_cfg(Task::CartPole);
        spec.base.max_episodes = 1;
        spec.optimizers = vec![OptimKind::AmsGrad, OptimKind::Sgd, OptimKind::Adam];
        spec.n_values = vec![0, 1];
        spec.seeds = 2;
        let result = run_lr_sweep(&spec).unwrap();
        assert_eq!(result.cells.len(), 3 * 2);
        assert!(result.cells.iter().all(|c| c.runs.len() == 2));
        for cell in &result.cells {
            assert_eq!(cell.lr, lr_for_exponent(cell.n));
        }
    }

    #[test]
    fn config_overrides_apply_and_reject_unknown_keys() {
        let mut cfg = AgentConfig::for_task(Task::CartPole, ReadoutKind::Mlp);
        apply_config_overrides(
            &mut cfg,
            "# comment\n\ngamma = 0.95\nbatch_size = 64\nreadout = linear\noptimizer = sgd\nlr = 0.01\ng = 1.3\nreset_reservoir_each_episode = false\n",
        )
        .unwrap();
        assert_eq!(cfg.gamma, 0.95);
        assert_eq!(cfg.batch_size, 64);
        assert_eq!(cfg.readout, ReadoutKind::Linear);
        assert_eq!(cfg.optimizer.kind, OptimKind::Sgd);
        assert_eq!(cfg.optimizer.lr, 0.01);
        assert_eq!(cfg.reservoir.g, 1.3);
        assert!(!cfg.reset_reservoir_each_episode);

        let err = apply_config_overrides(&mut cfg, "bogus_key = 7\n");
        assert!(err.is_err());
        let err = apply_config_overrides(&mut cfg, "gamma 0.9\n");
        assert!(err.is_err());
    }
}
