//! From-scratch implementations of the four partially observable
//! classic-control tasks.
//!
//! Velocities are hidden: the agent sees only the position/angle maps
//! listed per task, normalized to [-1, 1] where the map guarantees it.
//! Every per-step reward is clipped to {-1, 0, 1}, and all episodes cap
//! at 200 steps. Physical constants live in [`constants`] with their
//! provenance.

pub mod acrobot;
pub mod cartpole;
pub mod constants;
pub mod mountain_car;
pub mod pendulum;

pub use acrobot::AcrobotEnv;
pub use cartpole::CartPoleEnv;
pub use constants::constants_text;
pub use mountain_car::MountainCarEnv;
pub use pendulum::PendulumEnv;

use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};

/// The four supported tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Task {
    CartPole,
    MountainCar,
    Acrobot,
    Pendulum,
}

impl Task {
    pub const ALL: [Task; 4] = [
        Task::CartPole,
        Task::MountainCar,
        Task::Acrobot,
        Task::Pendulum,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::CartPole => "cartpole",
            Task::MountainCar => "mountaincar",
            Task::Acrobot => "acrobot",
            Task::Pendulum => "pendulum",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cartpole" => Ok(Task::CartPole),
            "mountaincar" => Ok(Task::MountainCar),
            "acrobot" => Ok(Task::Acrobot),
            "pendulum" => Ok(Task::Pendulum),
            other => Err(Error::UnknownTask(other.to_string())),
        }
    }

    pub fn spec(&self) -> EnvSpec {
        let (n_obs, n_actions) = match self {
            Task::CartPole => (2, 2),
            Task::MountainCar => (1, 3),
            Task::Acrobot => (4, 2),
            Task::Pendulum => (2, 2),
        };
        EnvSpec {
            task: *self,
            n_obs,
            n_actions,
            max_steps: constants::MAX_STEPS,
        }
    }

    pub fn build(&self, cfg: &EnvConfig) -> ClassicEnv {
        match self {
            Task::CartPole => ClassicEnv::CartPole(CartPoleEnv::new()),
            Task::MountainCar => ClassicEnv::MountainCar(MountainCarEnv::new()),
            Task::Acrobot => ClassicEnv::Acrobot(AcrobotEnv::new()),
            Task::Pendulum => ClassicEnv::Pendulum(PendulumEnv::new(cfg.pendulum_success_window)),
        }
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Environment construction knobs that are not physical constants.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvConfig {
    /// Pendulum success requires reward +1 on each of this many trailing
    /// steps of the episode.
    pub pendulum_success_window: usize,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            pendulum_success_window: 50,
        }
    }
}

/// Task identity plus dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvSpec {
    pub task: Task,
    pub n_obs: usize,
    pub n_actions: usize,
    pub max_steps: usize,
}

/// The hidden physical state, exposed for trajectory oracles only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnvState {
    CartPole {
        position: f64,
        velocity: f64,
        angle: f64,
        angular_velocity: f64,
    },
    MountainCar {
        position: f64,
        velocity: f64,
    },
    Acrobot {
        theta1: f64,
        theta2: f64,
        dtheta1: f64,
        dtheta2: f64,
    },
    Pendulum {
        theta: f64,
        theta_dot: f64,
    },
}

impl EnvState {
    /// Physical variables in declaration order, for numeric comparison.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            EnvState::CartPole {
                position,
                velocity,
                angle,
                angular_velocity,
            } => vec![position, velocity, angle, angular_velocity],
            EnvState::MountainCar { position, velocity } => vec![position, velocity],
            EnvState::Acrobot {
                theta1,
                theta2,
                dtheta1,
                dtheta2,
            } => vec![theta1, theta2, dtheta1, dtheta2],
            EnvState::Pendulum { theta, theta_dot } => vec![theta, theta_dot],
        }
    }
}

/// Outcome of one environment step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    pub observation: Vector,
    /// Clipped reward in {-1, 0, 1}.
    pub reward: f64,
    pub terminal: bool,
    pub steps_elapsed: usize,
}

/// Common surface of the four tasks (and of the scripted stand-ins used
/// in agent tests).
pub trait Environment {
    fn spec(&self) -> EnvSpec;

    /// Draws the initial physical state and returns the first observation.
    fn reset(&mut self, rng: &mut SeededRng) -> Vector;

    /// Advances the physics one tick.
    fn step(&mut self, action: usize) -> Result<StepResult>;

    fn terminal(&self) -> bool;

    /// Task success per the per-task completion definition; meaningful
    /// once the episode has terminated.
    fn completed(&self) -> bool;

    fn hidden_state(&self) -> EnvState;

    fn steps_elapsed(&self) -> usize;
}

/// Static dispatch over the four tasks.
#[derive(Clone, Debug)]
pub enum ClassicEnv {
    CartPole(CartPoleEnv),
    MountainCar(MountainCarEnv),
    Acrobot(AcrobotEnv),
    Pendulum(PendulumEnv),
}

macro_rules! delegate {
    ($self:ident, $env:ident => $body:expr) => {
        match $self {
            ClassicEnv::CartPole($env) => $body,
            ClassicEnv::MountainCar($env) => $body,
            ClassicEnv::Acrobot($env) => $body,
            ClassicEnv::Pendulum($env) => $body,
        }
    };
}

impl Environment for ClassicEnv {
    fn spec(&self) -> EnvSpec {
        delegate!(self, e => e.spec())
    }

    fn reset(&mut self, rng: &mut SeededRng) -> Vector {
        delegate!(self, e => e.reset(rng))
    }

    fn step(&mut self, action: usize) -> Result<StepResult> {
        delegate!(self, e => e.step(action))
    }

    fn terminal(&self) -> bool {
        delegate!(self, e => e.terminal())
    }

    fn completed(&self) -> bool {
        delegate!(self, e => e.completed())
    }

    fn hidden_state(&self) -> EnvState {
        delegate!(self, e => e.hidden_state())
    }

    fn steps_elapsed(&self) -> usize {
        delegate!(self, e => e.steps_elapsed())
    }
}

/// Rolls out a fixed action sequence on a freshly reset environment and
/// records the hidden-state trajectory (initial state first). Stops early
/// if the episode terminates.
pub fn reference_trajectory<E: Environment + ?Sized>(
    env: &mut E,
    actions: &[usize],
) -> Result<Vec<EnvState>> {
    let mut states = Vec::with_capacity(actions.len() + 1);
    states.push(env.hidden_state());
    for &a in actions {
        let result = env.step(a)?;
        states.push(env.hidden_state());
        if result.terminal {
            break;
        }
    }
    Ok(states)
}

pub(crate) fn wrap_angle(mut x: f64) -> f64 {
    use std::f64::consts::PI;
    while x > PI {
        x -= 2.0 * PI;
    }
    while x < -PI {
        x += 2.0 * PI;
    }
    x
}
