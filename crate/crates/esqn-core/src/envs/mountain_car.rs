//! Under-powered car in a valley. The agent observes only the normalized
//! position; velocity is hidden, so it must infer climb/descend from the
//! position history.

use super::constants::{mountaincar as c, MAX_STEPS};
use super::{EnvSpec, EnvState, Environment, StepResult, Task};
use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};

/// One tick of the mountain-car dynamics. `push` is -1 (left), 0 (idle)
/// or +1 (right).
pub fn dynamics_step(position: f64, velocity: f64, push: f64) -> (f64, f64) {
    let mut velocity = velocity + push * c::FORCE + (3.0 * position).cos() * (-c::GRAVITY);
    velocity = velocity.clamp(-c::MAX_SPEED, c::MAX_SPEED);
    let mut position = position + velocity;
    position = position.clamp(c::MIN_POSITION, c::MAX_POSITION);
    if position == c::MIN_POSITION && velocity < 0.0 {
        velocity = 0.0;
    }
    (position, velocity)
}

#[derive(Clone, Debug)]
pub struct MountainCarEnv {
    position: f64,
    velocity: f64,
    steps: usize,
    terminal: bool,
    goal_reached: bool,
}

impl MountainCarEnv {
    pub fn new() -> Self {
        MountainCarEnv {
            position: 0.0,
            velocity: 0.0,
            steps: 0,
            terminal: false,
            goal_reached: false,
        }
    }

    fn observation(&self) -> Vector {
        Vector::from_vec(vec![(self.position + c::OBS_OFFSET) / c::OBS_SCALE])
            .expect("finite state")
    }
}

impl Default for MountainCarEnv {
    fn default() -> Self {
        MountainCarEnv::new()
    }
}

impl Environment for MountainCarEnv {
    fn spec(&self) -> EnvSpec {
        Task::MountainCar.spec()
    }

    fn reset(&mut self, rng: &mut SeededRng) -> Vector {
        self.position = rng.uniform(c::INIT_LOW, c::INIT_HIGH);
        self.velocity = 0.0;
        self.steps = 0;
        self.terminal = false;
        self.goal_reached = false;
        self.observation()
    }

    fn step(&mut self, action: usize) -> Result<StepResult> {
        if self.terminal {
            return Err(Error::StepAfterTerminal);
        }
        if action >= 3 {
            return Err(Error::InvalidAction {
                action,
                n_actions: 3,
            });
        }
        let push = action as f64 - 1.0;
        let (position, velocity) = dynamics_step(self.position, self.velocity, push);
        self.position = position;
        self.velocity = velocity;
        self.steps += 1;

        if self.position >= c::GOAL_POSITION {
            self.goal_reached = true;
        }
        self.terminal = self.goal_reached || self.steps >= MAX_STEPS;
        let reward = if self.goal_reached { 1.0 } else { -1.0 };

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
        self.goal_reached
    }

    fn hidden_state(&self) -> EnvState {
        EnvState::MountainCar {
            position: self.position,
            velocity: self.velocity,
        }
    }

    fn steps_elapsed(&self) -> usize {
        self.steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observation_zero_point() {
        let mut env = MountainCarEnv::new();
        env.position = -0.3;
        assert_eq!(env.observation()[0], 0.0);
    }

    #[test]
    fn reset_observation_in_init_band() {
        // Position uniform on [-0.6, -0.4) maps to [-1/3, -1/9).
        let mut env = MountainCarEnv::new();
        let mut rng = SeededRng::new(8);
        for _ in 0..100 {
            let obs = env.reset(&mut rng);
            assert!(obs[0] >= -1.0 / 3.0 - 1e-12 && obs[0] < -1.0 / 9.0 + 1e-12);
        }
    }

    #[test]
    fn full_throttle_from_rest_cannot_reach_goal() {
        // The classic under-powered property: pushing right from a start
        // at -0.5 never makes the hill in one go.
        let mut env = MountainCarEnv::new();
        env.position = -0.5;
        env.velocity = 0.0;
        let mut reached = false;
        for _ in 0..MAX_STEPS {
            let r = env.step(2).unwrap();
            if r.reward > 0.0 {
                reached = true;
            }
            if r.terminal {
                break;
            }
        }
        assert!(!reached);
        assert!(!env.completed());
        assert_eq!(env.steps_elapsed(), MAX_STEPS);
    }

    #[test]
    fn goal_reward_and_completion() {
        let mut env = MountainCarEnv::new();
        env.position = 0.45;
        env.velocity = c::MAX_SPEED;
        let r = env.step(2).unwrap();
        assert_eq!(r.reward, 1.0);
        assert!(r.terminal);
        assert!(env.completed());
    }

    #[test]
    fn left_wall_stops_the_car() {
        let mut env = MountainCarEnv::new();
        env.position = c::MIN_POSITION;
        env.velocity = -c::MAX_SPEED;
        env.step(0).unwrap();
        if let EnvState::MountainCar { position, velocity } = env.hidden_state() {
            assert_eq!(position, c::MIN_POSITION);
            assert_eq!(velocity, 0.0);
        }
    }
}
