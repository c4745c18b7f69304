//! First-order optimizers: SGD with classical momentum, Adam, and AMSGrad.
//!
//! AMSGrad follows the published max rule: the second-moment running
//! average is tracked without bias correction, its elementwise maximum
//! over time sits in the denominator, and only the first moment is
//! bias-corrected (Adam-style). SGD momentum is classical, not Nesterov.

use crate::error::{Error, Result};
use crate::readout::GradientSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimKind {
    Sgd,
    Adam,
    AmsGrad,
}

impl OptimKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OptimKind::Sgd => "sgd",
            OptimKind::Adam => "adam",
            OptimKind::AmsGrad => "amsgrad",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(OptimKind::Sgd),
            "adam" => Ok(OptimKind::Adam),
            "amsgrad" => Ok(OptimKind::AmsGrad),
            other => Err(Error::InvalidConfig(format!(
                "unknown optimizer '{other}' (expected sgd, adam or amsgrad)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimConfig {
    pub kind: OptimKind,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl OptimConfig {
    pub fn new(kind: OptimKind, lr: f64) -> Self {
        OptimConfig {
            kind,
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lr = {} must be > 0",
                self.lr
            )));
        }
        if !(0.0..1.0).contains(&self.beta1) {
            return Err(Error::InvalidConfig(format!(
                "beta1 = {} outside [0, 1)",
                self.beta1
            )));
        }
        if !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::InvalidConfig(format!(
                "beta2 = {} outside [0, 1)",
                self.beta2
            )));
        }
        if self.eps <= 0.0 || self.eps.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "eps = {} must be > 0",
                self.eps
            )));
        }
        Ok(())
    }
}

/// Per-parameter moment buffers. `m` doubles as the SGD velocity; `v` and
/// `v_max` are allocated only for the optimizers that use them.
#[derive(Clone, Debug)]
pub struct OptimState {
    kind: OptimKind,
    step_count: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    v_max: Vec<Vec<f64>>,
}

impl OptimState {
    pub fn new(cfg: &OptimConfig, tensor_sizes: &[usize]) -> Result<Self> {
        cfg.validate()?;
        let zeros = || -> Vec<Vec<f64>> { tensor_sizes.iter().map(|&n| vec![0.0; n]).collect() };
        Ok(OptimState {
            kind: cfg.kind,
            step_count: 0,
            m: zeros(),
            v: match cfg.kind {
                OptimKind::Sgd => Vec::new(),
                _ => zeros(),
            },
            v_max: match cfg.kind {
                OptimKind::AmsGrad => zeros(),
                _ => Vec::new(),
            },
        })
    }

    pub fn for_params(cfg: &OptimConfig, params: &[&[f64]]) -> Result<Self> {
        let sizes: Vec<usize> = params.iter().map(|p| p.len()).collect();
        OptimState::new(cfg, &sizes)
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// AMSGrad max-second-moment buffers; empty for other optimizers.
    pub fn v_max(&self) -> &[Vec<f64>] {
        &self.v_max
    }
}

/// One in-place update of `params` by the configured rule.
pub fn apply_gradients(
    cfg: &OptimConfig,
    state: &mut OptimState,
    params: &mut [&mut [f64]],
    grads: &GradientSet,
) -> Result<()> {
    if cfg.kind != state.kind {
        return Err(Error::InvalidConfig(
            "optimizer state was built for a different optimizer kind".into(),
        ));
    }
    let tensors = grads.tensors();
    if params.len() != tensors.len() || params.len() != state.m.len() {
        return Err(Error::ShapeMismatch {
            expected: state.m.len(),
            got: params.len(),
        });
    }
    for ((p, g), m) in params.iter().zip(tensors).zip(&state.m) {
        if p.len() != g.len() || p.len() != m.len() {
            return Err(Error::ShapeMismatch {
                expected: m.len(),
                got: p.len(),
            });
        }
        if !g.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteGradient);
        }
    }

    state.step_count += 1;
    match cfg.kind {
        OptimKind::Sgd => {
            // velocity = beta1 * velocity - lr * g; p += velocity
            for ((p, g), vel) in params.iter_mut().zip(tensors).zip(&mut state.m) {
                for i in 0..p.len() {
                    vel[i] = cfg.beta1 * vel[i] - cfg.lr * g[i];
                    p[i] += vel[i];
                }
            }
        }
        OptimKind::Adam => {
            let t = state.step_count as i32;
            let bc1 = 1.0 - cfg.beta1.powi(t);
            let bc2 = 1.0 - cfg.beta2.powi(t);
            for (((p, g), m), v) in params
                .iter_mut()
                .zip(tensors)
                .zip(&mut state.m)
                .zip(&mut state.v)
            {
                for i in 0..p.len() {
                    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                    let m_hat = m[i] / bc1;
                    let v_hat = v[i] / bc2;
                    p[i] -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps);
                }
            }
        }
        OptimKind::AmsGrad => {
            let t = state.step_count as i32;
            let bc1 = 1.0 - cfg.beta1.powi(t);
            for ((((p, g), m), v), v_max) in params
                .iter_mut()
                .zip(tensors)
                .zip(&mut state.m)
                .zip(&mut state.v)
                .zip(&mut state.v_max)
            {
                for i in 0..p.len() {
                    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                    if v[i] > v_max[i] {
                        v_max[i] = v[i];
                    }
                    let m_hat = m[i] / bc1;
                    p[i] -= cfg.lr * m_hat / (v_max[i].sqrt() + cfg.eps);
                }
            }
        }
    }
    Ok(())
}
