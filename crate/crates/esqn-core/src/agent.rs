//! The echo state Q-network agent: epsilon-greedy action selection over
//! Q(o, x), reservoir-augmented experience storage, per-step Double DQN
//! training, periodic target sync and episode bookkeeping.
//!
//! One reservoir serves both acting and storage: every observation is fed
//! to it exactly once, and the state stored in a transition is the state
//! used for action selection at that step. `observe` pre-feeds the next
//! observation so the transition tuple can carry `x_next` immediately;
//! the following `act` then reuses that state instead of stepping again.
//!
//! Randomness is split into named sub-streams of one master seed
//! (reservoir init, readout init, epsilon-greedy, replay sampling,
//! environment init), so a change in one component's draw count leaves
//! the others untouched.

use crate::envs::{EnvConfig, Environment};
use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};
use crate::optim::{self, OptimConfig, OptimKind, OptimState};
use crate::readout::{argmax, FwdScratch, GradientSet, QBatch, Readout, ReadoutKind};
use crate::replay::{ReplayMemory, Transition};
use crate::reservoir::{build_reservoir, Reservoir, ReservoirConfig};
use crate::Task;

/// Full hyperparameter record for one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentConfig {
    pub gamma: f64,
    pub epsilon_start: f64,
    pub epsilon_floor: f64,
    pub epsilon_decay_episodes: usize,
    /// Minibatch size N_D; training is gated until the memory holds this
    /// many transitions.
    pub batch_size: usize,
    /// Replay capacity N.
    pub memory_capacity: usize,
    /// Target network sync period, in episodes.
    pub target_sync_every: usize,
    pub max_episodes: usize,
    /// Consecutive completions that end training as a success.
    pub success_streak: usize,
    pub readout: ReadoutKind,
    pub n_hidden: usize,
    pub optimizer: OptimConfig,
    pub reservoir: ReservoirConfig,
    /// Zero the reservoir state at every episode start (the default ESN
    /// convention); switchable so the carry-over variant stays testable.
    pub reset_reservoir_each_episode: bool,
    pub env: EnvConfig,
}

impl AgentConfig {
    /// Task defaults: gamma 0.99, epsilon 0.5 -> 0.01 over 400 episodes,
    /// batches of 256 from a 10000-deep memory, target sync every 2
    /// episodes, at most 500 episodes, success after 10 straight
    /// completions, AMSGrad with the per-task learning rate, 50-neuron
    /// reservoir at p = 0.1 and g = 0.9, 250 hidden readout units.
    pub fn for_task(task: Task, readout: ReadoutKind) -> Self {
        let lr = match (task, readout) {
            (Task::MountainCar, ReadoutKind::Mlp) => 0.005,
            (Task::MountainCar, ReadoutKind::Linear) => 0.01,
            _ => 0.001,
        };
        AgentConfig {
            gamma: 0.99,
            epsilon_start: 0.5,
            epsilon_floor: 0.01,
            epsilon_decay_episodes: 400,
            batch_size: 256,
            memory_capacity: 10_000,
            target_sync_every: 2,
            max_episodes: 500,
            success_streak: 10,
            readout,
            n_hidden: 250,
            optimizer: OptimConfig::new(OptimKind::AmsGrad, lr),
            reservoir: ReservoirConfig::new(task.spec().n_obs),
            reset_reservoir_each_episode: true,
            env: EnvConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma = {} outside [0, 1]",
                self.gamma
            )));
        }
        if !(self.epsilon_start > 0.0 && self.epsilon_start <= 1.0) {
            return Err(Error::InvalidConfig("epsilon_start outside (0, 1]".into()));
        }
        if !(self.epsilon_floor > 0.0 && self.epsilon_floor <= self.epsilon_start) {
            return Err(Error::InvalidConfig(
                "epsilon_floor must lie in (0, epsilon_start]".into(),
            ));
        }
        if self.epsilon_decay_episodes == 0 {
            return Err(Error::InvalidConfig(
                "epsilon_decay_episodes must be >= 1".into(),
            ));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be >= 1".into()));
        }
        if self.memory_capacity < self.batch_size {
            return Err(Error::InvalidConfig(
                "memory_capacity must be >= batch_size".into(),
            ));
        }
        if self.target_sync_every == 0 {
            return Err(Error::InvalidConfig(
                "target_sync_every must be >= 1".into(),
            ));
        }
        if self.success_streak == 0 || self.max_episodes == 0 {
            return Err(Error::InvalidConfig(
                "success_streak and max_episodes must be >= 1".into(),
            ));
        }
        if self.readout == ReadoutKind::Mlp && self.n_hidden == 0 {
            return Err(Error::InvalidConfig("n_hidden must be >= 1 for mlp".into()));
        }
        self.optimizer.validate()?;
        self.reservoir.validate()?;
        // The decay factor is derived from (floor / start)^(1 / episodes),
        // so start * decay^episodes lands back on the floor.
        let check = self.epsilon_start
            * self
                .epsilon_decay()
                .powi(self.epsilon_decay_episodes as i32);
        if (check - self.epsilon_floor).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "epsilon schedule inconsistent with floor".into(),
            ));
        }
        Ok(())
    }

    /// Per-episode multiplicative decay: `(floor / start)^(1 / episodes)`.
    pub fn epsilon_decay(&self) -> f64 {
        (self.epsilon_floor / self.epsilon_start).powf(1.0 / self.epsilon_decay_episodes as f64)
    }

    /// Exploration rate after `episodes` completed episodes, evaluated in
    /// closed form so repeated multiplication error cannot accumulate.
    pub fn epsilon_after(&self, episodes: usize) -> f64 {
        if episodes >= self.epsilon_decay_episodes {
            return self.epsilon_floor;
        }
        (self.epsilon_start * self.epsilon_decay().powi(episodes as i32))
            .max(self.epsilon_floor)
            .min(self.epsilon_start)
    }
}

/// Per-component random streams of one training run.
#[derive(Clone, Debug)]
pub struct RunRngs {
    pub policy: SeededRng,
    pub replay: SeededRng,
    pub env: SeededRng,
}

impl RunRngs {
    pub fn new(master_seed: u64) -> Self {
        RunRngs {
            policy: SeededRng::substream(master_seed, "epsilon-greedy"),
            replay: SeededRng::substream(master_seed, "replay-sampling"),
            env: SeededRng::substream(master_seed, "env-init"),
        }
    }
}

/// Outcome of one episode.
#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeReport {
    /// 1-based episode index within the run.
    pub episode: usize,
    pub steps: usize,
    pub total_reward: f64,
    /// Exploration rate in effect during this episode.
    pub epsilon: f64,
    /// Mean training loss over the episode's non-skipped train steps.
    pub mean_loss: Option<f64>,
    pub completed: bool,
}

/// Outcome of a full training run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub episodes: Vec<EpisodeReport>,
    pub success: bool,
    /// Episode index at which the completion streak was reached.
    pub success_episode: Option<usize>,
    /// True when the optimizer blew up (non-finite loss, target or
    /// gradient) and the run was cut short as a failure; happens at the
    /// extreme learning rates of the optimizer grid.
    pub diverged: bool,
}

pub struct Agent {
    cfg: AgentConfig,
    reservoir: Reservoir,
    main_net: Readout,
    target_net: Readout,
    opt_state: OptimState,
    memory: ReplayMemory,
    epsilon: f64,
    episodes_done: usize,
    streak: usize,
    /// Reservoir state pre-computed by `observe` for the upcoming `act`.
    pending_x: Option<Vector>,
    scratch: FwdScratch,
    grads: GradientSet,
    batch: QBatch,
    input_buf: Vec<f64>,
}

impl Agent {
    pub fn new(
        cfg: AgentConfig,
        n_obs: usize,
        n_actions: usize,
        master_seed: u64,
    ) -> Result<Agent> {
        cfg.validate()?;
        if cfg.reservoir.n_i != n_obs {
            return Err(Error::InvalidConfig(format!(
                "reservoir n_i = {} but the task observes {} components",
                cfg.reservoir.n_i, n_obs
            )));
        }
        let mut reservoir_rng = SeededRng::substream(master_seed, "reservoir-init");
        let reservoir = build_reservoir(&cfg.reservoir, &mut reservoir_rng)?;
        let d_in = n_obs + cfg.reservoir.n_x;
        let mut readout_rng = SeededRng::substream(master_seed, "readout-init");
        let main_net = Readout::init(
            cfg.readout,
            d_in,
            cfg.n_hidden.max(1),
            n_actions,
            &mut readout_rng,
        )?;
        let target_net = main_net.clone();
        let opt_state = OptimState::for_params(&cfg.optimizer, &main_net.params())?;
        Ok(Agent {
            epsilon: cfg.epsilon_start,
            memory: ReplayMemory::new(cfg.memory_capacity),
            grads: GradientSet::zeros_like(&main_net),
            batch: QBatch::new(d_in),
            input_buf: Vec::with_capacity(d_in),
            scratch: FwdScratch::new(),
            pending_x: None,
            episodes_done: 0,
            streak: 0,
            opt_state,
            target_net,
            main_net,
            reservoir,
            cfg,
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.cfg
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn episodes_done(&self) -> usize {
        self.episodes_done
    }

    pub fn streak(&self) -> usize {
        self.streak
    }

    pub fn main_net(&self) -> &Readout {
        &self.main_net
    }

    pub fn main_net_mut(&mut self) -> &mut Readout {
        &mut self.main_net
    }

    pub fn target_net(&self) -> &Readout {
        &self.target_net
    }

    #[cfg(test)]
    pub(crate) fn target_net_mut(&mut self) -> &mut Readout {
        &mut self.target_net
    }

    pub fn memory(&self) -> &ReplayMemory {
        &self.memory
    }

    pub fn memory_mut(&mut self) -> &mut ReplayMemory {
        &mut self.memory
    }

    pub fn reservoir(&self) -> &Reservoir {
        &self.reservoir
    }

    fn n_actions(&self) -> usize {
        self.main_net.n_actions()
    }

    /// Feeds the observation to the reservoir and caches the resulting
    /// state for the next `act` call. Returns the new state (the
    /// transition's `x_next`).
    pub fn observe(&mut self, o: &Vector) -> Result<Vector> {
        let x = self.reservoir.step(o)?;
        self.pending_x = Some(x.clone());
        Ok(x)
    }

    /// Steps the reservoir with `o` (unless `observe` already fed this
    /// observation), then picks an action: uniform random with
    /// probability epsilon, otherwise greedy on Q(concat(o, x)) with ties
    /// broken toward the lowest index. Returns the action and the
    /// reservoir state used, for storage.
    pub fn act(&mut self, o: &Vector, rng: &mut SeededRng) -> Result<(usize, Vector)> {
        let x = match self.pending_x.take() {
            Some(x) => x,
            None => self.reservoir.step(o)?,
        };
        let action = if rng.next_f64() < self.epsilon {
            rng.below(self.n_actions())
        } else {
            self.input_buf.clear();
            self.input_buf.extend_from_slice(o.as_slice());
            self.input_buf.extend_from_slice(x.as_slice());
            if self.input_buf.len() != self.main_net.d_in() {
                return Err(Error::DimensionMismatch {
                    expected: self.main_net.d_in(),
                    got: self.input_buf.len(),
                });
            }
            self.main_net
                .forward_into(&self.input_buf, &mut self.scratch);
            argmax(self.scratch.q_values())
        };
        Ok((action, x))
    }

    /// Double DQN targets: terminal transitions bootstrap nothing; the
    /// rest use the main network to pick the next action and the target
    /// network to value it, discounted by gamma.
    pub fn compute_targets(&self, batch: &[&Transition]) -> Result<Vec<f64>> {
        double_dqn_targets(&self.main_net, &self.target_net, self.cfg.gamma, batch)
    }

    /// One training update: skipped (returns `None`) until the memory
    /// holds a full batch; otherwise samples uniformly, computes Double
    /// DQN targets, backpropagates the batch MSE and applies one
    /// optimizer step to the main network. The target network is never
    /// touched here.
    pub fn train_step(&mut self, rng: &mut SeededRng) -> Result<Option<f64>> {
        if self.memory.len() < self.cfg.batch_size {
            return Ok(None);
        }
        let sampled = self.memory.sample(self.cfg.batch_size, rng)?;
        let targets =
            double_dqn_targets(&self.main_net, &self.target_net, self.cfg.gamma, &sampled)?;
        self.batch.clear();
        for (t, &target) in sampled.iter().zip(&targets) {
            self.input_buf.clear();
            self.input_buf.extend_from_slice(t.o.as_slice());
            self.input_buf.extend_from_slice(t.x.as_slice());
            self.batch.push(&self.input_buf, t.a, target)?;
        }
        let loss = self
            .main_net
            .backward_mse(&self.batch, &mut self.grads, &mut self.scratch)?;
        optim::apply_gradients(
            &self.cfg.optimizer,
            &mut self.opt_state,
            &mut self.main_net.params_mut(),
            &self.grads,
        )?;
        Ok(Some(loss))
    }

    /// One episode: reset env (and reservoir state, per config), then loop
    /// act, env step, push transition, train step until terminal. Decays
    /// epsilon once at episode end and syncs the target network at the end
    /// of every `target_sync_every`-th episode.
    pub fn run_episode<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        rngs: &mut RunRngs,
    ) -> Result<EpisodeReport> {
        let mut o = env.reset(&mut rngs.env);
        if self.cfg.reset_reservoir_each_episode {
            self.reservoir.reset_state();
        }
        self.pending_x = None;
        let episode = self.episodes_done + 1;
        let epsilon_used = self.epsilon;
        let mut total_reward = 0.0;
        #[allow(unused_assignments)]
        let mut steps = 0usize;
        let mut loss_sum = 0.0;
        let mut loss_count = 0usize;

        loop {
            let (action, x) = self.act(&o, &mut rngs.policy)?;
            let result = env.step(action)?;
            let x_next = self.observe(&result.observation)?;
            total_reward += result.reward;
            steps = result.steps_elapsed;
            self.memory.push(Transition {
                o,
                x,
                a: action,
                r: result.reward,
                o_next: result.observation.clone(),
                x_next,
                terminal: result.terminal,
            })?;
            if let Some(loss) = self.train_step(&mut rngs.replay)? {
                loss_sum += loss;
                loss_count += 1;
            }
            if result.terminal {
                break;
            }
            o = result.observation;
        }

        let completed = env.completed();
        self.episodes_done += 1;
        self.streak = if completed { self.streak + 1 } else { 0 };
        self.epsilon = self.cfg.epsilon_after(self.episodes_done);
        if self.episodes_done % self.cfg.target_sync_every == 0 {
            self.target_net.copy_from(&self.main_net)?;
        }

        Ok(EpisodeReport {
            episode,
            steps,
            total_reward,
            epsilon: epsilon_used,
            mean_loss: (loss_count > 0).then(|| loss_sum / loss_count as f64),
            completed,
        })
    }

    /// Full run: episodes until `success_streak` consecutive completions
    /// or the episode cap. Optimizer blow-up (non-finite loss, target or
    /// gradient, reachable at extreme learning rates) ends the run early
    /// as a failure instead of an error, so sweep grids can record the
    /// cell as unsuccessful.
    pub fn run_training<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        rngs: &mut RunRngs,
    ) -> Result<RunReport> {
        let mut episodes = Vec::new();
        while self.episodes_done < self.cfg.max_episodes {
            match self.run_episode(env, rngs) {
                Ok(report) => episodes.push(report),
                Err(Error::NonFiniteGradient) | Err(Error::NonFiniteValue { .. }) => {
                    return Ok(RunReport {
                        episodes,
                        success: false,
                        success_episode: None,
                        diverged: true,
                    });
                }
                Err(e) => return Err(e),
            }
            if self.streak >= self.cfg.success_streak {
                return Ok(RunReport {
                    episodes,
                    success: true,
                    success_episode: Some(self.episodes_done),
                    diverged: false,
                });
            }
        }
        Ok(RunReport {
            episodes,
            success: false,
            success_episode: None,
            diverged: false,
        })
    }
}

fn double_dqn_targets(
    main: &Readout,
    target: &Readout,
    gamma: f64,
    batch: &[&Transition],
) -> Result<Vec<f64>> {
    let mut input = Vec::with_capacity(main.d_in());
    let mut main_scratch = FwdScratch::new();
    let mut target_scratch = FwdScratch::new();
    let mut out = Vec::with_capacity(batch.len());
    for t in batch {
        if t.terminal {
            out.push(t.r);
            continue;
        }
        input.clear();
        input.extend_from_slice(t.o_next.as_slice());
        input.extend_from_slice(t.x_next.as_slice());
        if input.len() != main.d_in() {
            return Err(Error::DimensionMismatch {
                expected: main.d_in(),
                got: input.len(),
            });
        }
        main.forward_into(&input, &mut main_scratch);
        let chosen = argmax(main_scratch.q_values());
        target.forward_into(&input, &mut target_scratch);
        out.push(t.r + gamma * target_scratch.q_values()[chosen]);
    }
    Ok(out)
}
