//! Physical parameters mirrored from `constants.txt` (the documented
//! key = value interface); a test keeps file and code in sync.

pub const MAX_STEPS: usize = 200;

pub mod cartpole {
    pub const GRAVITY: f64 = 9.8;
    pub const MASS_CART: f64 = 1.0;
    pub const MASS_POLE: f64 = 0.1;
    pub const POLE_HALF_LENGTH: f64 = 0.5;
    pub const FORCE_MAG: f64 = 10.0;
    pub const TAU: f64 = 0.02;
    pub const ANGLE_LIMIT: f64 = 0.20943951023931953;
    pub const POSITION_LIMIT: f64 = 2.4;
    pub const OBS_POSITION_SCALE: f64 = 4.8;
    pub const OBS_ANGLE_SCALE: f64 = 0.418;
    pub const INIT_RANGE: f64 = 0.05;
    pub const REWARD_STEP_THRESHOLD: usize = 195;
}

pub mod mountaincar {
    pub const MIN_POSITION: f64 = -1.2;
    pub const MAX_POSITION: f64 = 0.6;
    pub const MAX_SPEED: f64 = 0.07;
    pub const GOAL_POSITION: f64 = 0.5;
    pub const FORCE: f64 = 0.001;
    pub const GRAVITY: f64 = 0.0025;
    pub const OBS_OFFSET: f64 = 0.3;
    pub const OBS_SCALE: f64 = 0.9;
    pub const INIT_LOW: f64 = -0.6;
    pub const INIT_HIGH: f64 = -0.4;
}

pub mod acrobot {
    pub const LINK_LENGTH_1: f64 = 1.0;
    pub const LINK_LENGTH_2: f64 = 1.0;
    pub const LINK_MASS_1: f64 = 1.0;
    pub const LINK_MASS_2: f64 = 1.0;
    pub const LINK_COM_1: f64 = 0.5;
    pub const LINK_COM_2: f64 = 0.5;
    pub const LINK_MOI: f64 = 1.0;
    pub const GRAVITY: f64 = 9.8;
    pub const DT: f64 = 0.2;
    pub const TORQUE_MAG: f64 = 1.0;
    pub const MAX_VEL_1: f64 = 12.566370614359172;
    pub const MAX_VEL_2: f64 = 28.274333882308138;
    pub const GOAL_HEIGHT: f64 = 1.0;
    pub const INIT_RANGE: f64 = 0.1;
}

pub mod pendulum {
    pub const MAX_SPEED: f64 = 8.0;
    pub const DT: f64 = 0.05;
    pub const GRAVITY: f64 = 10.0;
    pub const MASS: f64 = 1.0;
    pub const LENGTH: f64 = 1.0;
    pub const TORQUE_MAG: f64 = 1.0;
    pub const REWARD_THETA_DOT_COEFF: f64 = 0.1;
    pub const REWARD_TORQUE_COEFF: f64 = 0.0012;
    pub const REWARD_CLIP_THRESHOLD: f64 = -1.0;
    pub const INIT_THETA_RANGE: f64 = std::f64::consts::PI;
    pub const INIT_THETA_DOT_RANGE: f64 = 1.0;
}

/// The documented constants file shipped with the crate.
pub fn constants_text() -> &'static str {
    include_str!("constants.txt")
}
