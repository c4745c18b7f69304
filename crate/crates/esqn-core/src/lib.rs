//! Echo state Q-network building blocks.
//!
//! A fixed random recurrent reservoir turns the observation stream of a
//! partially observable control task into a state vector that carries the
//! recent input history. Transitions stored in replay memory include that
//! reservoir state, so a small feed-forward readout can be trained with
//! Double DQN from uniformly sampled batches, without backpropagation
//! through time.
//!
//! Modules follow the pipeline: [`numerics`] (dense math, seeded RNG,
//! spectral radius), [`reservoir`], [`readout`], [`optim`], [`replay`],
//! [`envs`] (the four control tasks), [`agent`] (the training loop) and
//! [`experiments`] (runs, sweeps, CSV output).

pub mod agent;
pub mod envs;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod optim;
pub mod readout;
pub mod replay;
pub mod reservoir;

pub use agent::{Agent, AgentConfig, EpisodeReport, RunReport, RunRngs};
pub use envs::{ClassicEnv, EnvConfig, EnvSpec, EnvState, Environment, StepResult, Task};
pub use error::{Error, Result};
pub use numerics::{Matrix, SeededRng, Vector};
pub use optim::{OptimConfig, OptimKind, OptimState};
pub use readout::{GradientSet, Readout, ReadoutKind};
pub use replay::{ReplayMemory, Transition};
pub use reservoir::{build_reservoir, Reservoir, ReservoirConfig};
