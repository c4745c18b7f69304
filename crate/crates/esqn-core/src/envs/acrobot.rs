//! Double pendulum swing-up. The agent observes the link angles through
//! cos/sin only; both angular velocities are hidden. Actions pick the
//! direction of a constant torque on the joint between the links.

use super::constants::{acrobot as c, MAX_STEPS};
use super::{wrap_angle, EnvSpec, EnvState, Environment, StepResult, Task};
use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};
use std::f64::consts::PI;

/// Angular accelerations for the current state and torque ("book"
/// dynamics variant of the reference source).
fn accelerations(s: [f64; 4], torque: f64) -> [f64; 4] {
    let m1 = c::LINK_MASS_1;
    let m2 = c::LINK_MASS_2;
    let l1 = c::LINK_LENGTH_1;
    let lc1 = c::LINK_COM_1;
    let lc2 = c::LINK_COM_2;
    let i1 = c::LINK_MOI;
    let i2 = c::LINK_MOI;
    let g = c::GRAVITY;
    let [theta1, theta2, dtheta1, dtheta2] = s;

    let d1 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * theta2.cos()) + i1 + i2;
    let d2 = m2 * (lc2 * lc2 + l1 * lc2 * theta2.cos()) + i2;
    let phi2 = m2 * lc2 * g * (theta1 + theta2 - PI / 2.0).cos();
    let phi1 = -m2 * l1 * lc2 * dtheta2 * dtheta2 * theta2.sin()
        - 2.0 * m2 * l1 * lc2 * dtheta2 * dtheta1 * theta2.sin()
        + (m1 * lc1 + m2 * l1) * g * (theta1 - PI / 2.0).cos()
        + phi2;
    let ddtheta2 =
        (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 * dtheta1 * theta2.sin() - phi2)
            / (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
    let ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
    [dtheta1, dtheta2, ddtheta1, ddtheta2]
}

/// One RK4 tick over `dt`, followed by angle wrapping and velocity
/// clipping as in the reference source.
pub fn dynamics_step(s: [f64; 4], torque: f64) -> [f64; 4] {
    let dt = c::DT;
    let k1 = accelerations(s, torque);
    let at = |base: [f64; 4], k: [f64; 4], h: f64| -> [f64; 4] {
        [
            base[0] + h * k[0],
            base[1] + h * k[1],
            base[2] + h * k[2],
            base[3] + h * k[3],
        ]
    };
    let k2 = accelerations(at(s, k1, dt / 2.0), torque);
    let k3 = accelerations(at(s, k2, dt / 2.0), torque);
    let k4 = accelerations(at(s, k3, dt), torque);
    let mut ns = [0.0; 4];
    for i in 0..4 {
        ns[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    ns[0] = wrap_angle(ns[0]);
    ns[1] = wrap_angle(ns[1]);
    ns[2] = ns[2].clamp(-c::MAX_VEL_1, c::MAX_VEL_1);
    ns[3] = ns[3].clamp(-c::MAX_VEL_2, c::MAX_VEL_2);
    ns
}

/// Height of the free tip above the pivot, in link lengths.
pub fn tip_height(theta1: f64, theta2: f64) -> f64 {
    -theta1.cos() - (theta1 + theta2).cos()
}

#[derive(Clone, Debug)]
pub struct AcrobotEnv {
    state: [f64; 4],
    steps: usize,
    terminal: bool,
    swung_up: bool,
}

impl AcrobotEnv {
    pub fn new() -> Self {
        AcrobotEnv {
            state: [0.0; 4],
            steps: 0,
            terminal: false,
            swung_up: false,
        }
    }

    fn observation(&self) -> Vector {
        Vector::from_vec(vec![
            self.state[0].cos(),
            self.state[0].sin(),
            self.state[1].cos(),
            self.state[1].sin(),
        ])
        .expect("finite state")
    }
}

impl Default for AcrobotEnv {
    fn default() -> Self {
        AcrobotEnv::new()
    }
}

impl Environment for AcrobotEnv {
    fn spec(&self) -> EnvSpec {
        Task::Acrobot.spec()
    }

    fn reset(&mut self, rng: &mut SeededRng) -> Vector {
        for v in &mut self.state {
            *v = rng.uniform(-c::INIT_RANGE, c::INIT_RANGE);
        }
        self.steps = 0;
        self.terminal = false;
        self.swung_up = false;
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
        // Action 0 applies -torque, action 1 applies +torque.
        let torque = if action == 1 {
            c::TORQUE_MAG
        } else {
            -c::TORQUE_MAG
        };
        self.state = dynamics_step(self.state, torque);
        self.steps += 1;

        if tip_height(self.state[0], self.state[1]) > c::GOAL_HEIGHT {
            self.swung_up = true;
        }
        self.terminal = self.swung_up || self.steps >= MAX_STEPS;
        let reward = if self.swung_up { 1.0 } else { -1.0 };

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
        self.swung_up
    }

    fn hidden_state(&self) -> EnvState {
        EnvState::Acrobot {
            theta1: self.state[0],
            theta2: self.state[1],
            dtheta1: self.state[2],
            dtheta2: self.state[3],
        }
    }

    fn steps_elapsed(&self) -> usize {
        self.steps
    }
}
