//! Single-link pendulum swing-up with discrete torque. The agent observes
//! (cos theta, sin theta); angular velocity is hidden. Theta is measured
//! from upright and kept wrapped in [-pi, pi].

use super::constants::{pendulum as c, MAX_STEPS};
use super::{wrap_angle, EnvSpec, EnvState, Environment, StepResult, Task};
use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};

/// One semi-implicit Euler tick: velocity first, then position with the
/// new velocity. The returned theta is wrapped to [-pi, pi].
pub fn dynamics_step(theta: f64, theta_dot: f64, torque: f64) -> (f64, f64) {
    let accel = 3.0 * c::GRAVITY / (2.0 * c::LENGTH) * theta.sin()
        + 3.0 / (c::MASS * c::LENGTH * c::LENGTH) * torque;
    let new_theta_dot = (theta_dot + accel * c::DT).clamp(-c::MAX_SPEED, c::MAX_SPEED);
    let new_theta = wrap_angle(theta + new_theta_dot * c::DT);
    (new_theta, new_theta_dot)
}

/// Raw reward at the state the torque is applied to:
/// `R = -theta^2 - 0.1 theta_dot - 0.0012 torque^2`.
pub fn raw_reward(theta: f64, theta_dot: f64, torque: f64) -> f64 {
    -theta * theta
        - c::REWARD_THETA_DOT_COEFF * theta_dot
        - c::REWARD_TORQUE_COEFF * torque * torque
}

#[derive(Clone, Debug)]
pub struct PendulumEnv {
    theta: f64,
    theta_dot: f64,
    steps: usize,
    terminal: bool,
    /// Consecutive +1 rewards up to the current step.
    success_streak: usize,
    success_window: usize,
}

impl PendulumEnv {
    pub fn new(success_window: usize) -> Self {
        PendulumEnv {
            theta: 0.0,
            theta_dot: 0.0,
            steps: 0,
            terminal: false,
            success_streak: 0,
            success_window,
        }
    }

    fn observation(&self) -> Vector {
        Vector::from_vec(vec![self.theta.cos(), self.theta.sin()]).expect("finite state")
    }
}

impl Default for PendulumEnv {
    fn default() -> Self {
        PendulumEnv::new(50)
    }
}

impl Environment for PendulumEnv {
    fn spec(&self) -> EnvSpec {
        Task::Pendulum.spec()
    }

    fn reset(&mut self, rng: &mut SeededRng) -> Vector {
        self.theta = rng.uniform(-c::INIT_THETA_RANGE, c::INIT_THETA_RANGE);
        self.theta_dot = rng.uniform(-c::INIT_THETA_DOT_RANGE, c::INIT_THETA_DOT_RANGE);
        self.steps = 0;
        self.terminal = false;
        self.success_streak = 0;
        self.observation()
    }

    fn step(&mut self, action: usize) -> Result<StepResult> {
        if self.terminal {
            return Err(Error::StepAfterTerminal);
        }
        if action >= 2 {
            return Err(Error::InvalidAction {
                action,
                n_actions: 2,
            });
        }
        let torque = if action == 1 {
            c::TORQUE_MAG
        } else {
            -c::TORQUE_MAG
        };
        let raw = raw_reward(self.theta, self.theta_dot, torque);
        let reward = if raw <= c::REWARD_CLIP_THRESHOLD {
            -1.0
        } else {
            1.0
        };
        self.success_streak = if reward > 0.0 {
            self.success_streak + 1
        } else {
            0
        };

        let (theta, theta_dot) = dynamics_step(self.theta, self.theta_dot, torque);
        self.theta = theta;
        self.theta_dot = theta_dot;
        self.steps += 1;
        self.terminal = self.steps >= MAX_STEPS;

        Ok(StepResult {
            observation: self.observation(),
            reward,
            terminal: self.terminal,
            steps_elapsed: self.steps,
        })
    }

    fn terminal(&self) -> bool {
        self.terminal
    }

    /// Kept swinging through the tail of the episode: reward +1 on each
    /// of the final `success_window` steps.
    fn completed(&self) -> bool {
        self.terminal && self.success_streak >= self.success_window
    }

    fn hidden_state(&self) -> EnvState {
        EnvState::Pendulum {
            theta: self.theta,
            theta_dot: self.theta_dot,
        }
    }

    fn steps_elapsed(&self) -> usize {
        self.steps
    }
}
