//! Inverted pendulum on a cart. The agent observes only normalized cart
//! position and pole angle; both velocities are hidden.

use super::constants::{cartpole as c, MAX_STEPS};
use super::{EnvSpec, EnvState, Environment, StepResult, Task};
use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};

/// One Euler tick of the cart-pole dynamics under a horizontal force.
/// State layout: (position, velocity, angle, angular velocity). Position
/// and angle are advanced with the pre-update velocities, matching the
/// reference integrator.
pub fn dynamics_step(state: [f64; 4], force: f64) -> [f64; 4] {
    let [x, x_dot, theta, theta_dot] = state;
    let total_mass = c::MASS_CART + c::MASS_POLE;
    let polemass_length = c::MASS_POLE * c::POLE_HALF_LENGTH;
    let cos_theta = theta.cos();
    let sin_theta = theta.sin();
    let temp = (force + polemass_length * theta_dot * theta_dot * sin_theta) / total_mass;
    let theta_acc = (c::GRAVITY * sin_theta - cos_theta * temp)
        / (c::POLE_HALF_LENGTH * (4.0 / 3.0 - c::MASS_POLE * cos_theta * cos_theta / total_mass));
    let x_acc = temp - polemass_length * theta_acc * cos_theta / total_mass;
    [
        x + c::TAU * x_dot,
        x_dot + c::TAU * x_acc,
        theta + c::TAU * theta_dot,
        theta_dot + c::TAU * theta_acc,
    ]
}

#[derive(Clone, Debug)]
pub struct CartPoleEnv {
    state: [f64; 4],
    steps: usize,
    terminal: bool,
    fell: bool,
}

impl CartPoleEnv {
    pub fn new() -> Self {
        CartPoleEnv {
            state: [0.0; 4],
            steps: 0,
            terminal: false,
            fell: false,
        }
    }

    fn observation(&self) -> Vector {
        Vector::from_vec(vec![
            self.state[0] / c::OBS_POSITION_SCALE,
            self.state[2] / c::OBS_ANGLE_SCALE,
        ])
        .expect("finite state")
    }
}

impl Default for CartPoleEnv {
    fn default() -> Self {
        CartPoleEnv::new()
    }
}

impl Environment for CartPoleEnv {
    fn spec(&self) -> EnvSpec {
        Task::CartPole.spec()
    }

    fn reset(&mut self, rng: &mut SeededRng) -> Vector {
        for v in &mut self.state {
            *v = rng.uniform(-c::INIT_RANGE, c::INIT_RANGE);
        }
        self.steps = 0;
        self.terminal = false;
        self.fell = false;
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
        let force = if action == 1 {
            c::FORCE_MAG
        } else {
            -c::FORCE_MAG
        };
        self.state = dynamics_step(self.state, force);
        self.steps += 1;

        self.fell = self.state[0].abs() > c::POSITION_LIMIT || self.state[2].abs() > c::ANGLE_LIMIT;
        self.terminal = self.fell || self.steps >= MAX_STEPS;

        // Reward 0 every step; +/-1 only at episode end, decided by the
        // survived step count alone.
        let reward = if self.terminal {
            if self.steps > c::REWARD_STEP_THRESHOLD {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        };

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

    fn completed(&self) -> bool {
        // The task counts as done when the pole stood the full episode.
        self.terminal && self.steps >= MAX_STEPS && !self.fell
    }

    fn hidden_state(&self) -> EnvState {
        EnvState::CartPole {
            position: self.state[0],
            velocity: self.state[1],
            angle: self.state[2],
            angular_velocity: self.state[3],
        }
    }

    fn steps_elapsed(&self) -> usize {
        self.steps
    }
}
