//! The fixed random recurrent network and its state update.
//!
//! Weights are drawn once and never trained: the recurrent matrix is
//! uniform on [-1, 1), sparsified to connection probability `p`, then
//! divided by its spectral radius so the stored matrix has radius 1. The
//! gain `g` is applied at step time, `x = tanh(g W_rec x + W_in u + b)`,
//! so sweeping `g` rescales the effective radius without rebuilding.

use crate::error::{Error, Result};
use crate::numerics::{self, sparsify, spectral_radius, uniform_matrix, Matrix, SeededRng, Vector};

const BUILD_RETRIES: usize = 10;
const RADIUS_TOL: f64 = 1e-12;
const RADIUS_MAX_ITER: usize = 500_000;
const DEGENERATE_RADIUS: f64 = 1e-12;

/// Construction parameters for [`Reservoir`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirConfig {
    /// Neuron count N_x.
    pub n_x: usize,
    /// Input dimension N_i.
    pub n_i: usize,
    /// Connection probability of the recurrent matrix.
    pub p: f64,
    /// Gain applied to the recurrent term at step time.
    pub g: f64,
    /// Input weights drawn uniform on [-input_scale, input_scale).
    pub input_scale: f64,
    /// Bias drawn uniform on [-bias_scale, bias_scale).
    pub bias_scale: f64,
}

impl ReservoirConfig {
    /// Defaults shared by all four tasks: 50 neurons, p = 0.1, g = 0.9,
    /// inputs scaled to 1, biases to 0.2.
    pub fn new(n_i: usize) -> Self {
        ReservoirConfig {
            n_x: 50,
            n_i,
            p: 0.1,
            g: 0.9,
            input_scale: 1.0,
            bias_scale: 0.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x < 1 {
            return Err(Error::InvalidConfig("n_x must be >= 1".into()));
        }
        if self.n_i < 1 {
            return Err(Error::InvalidConfig("n_i must be >= 1".into()));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "connection probability p = {} outside (0, 1]",
                self.p
            )));
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "gain g = {} must be finite and >= 0",
                self.g
            )));
        }
        if self.input_scale <= 0.0 || self.bias_scale < 0.0 {
            return Err(Error::InvalidConfig(
                "input_scale must be > 0 and bias_scale >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Fixed random recurrent network with an evolving state vector.
#[derive(Clone, Debug)]
pub struct Reservoir {
    w_rec: Matrix,
    w_in: Matrix,
    b: Vector,
    g: f64,
    x: Vector,
    // pre-activation scratch, reused across steps
    scratch: Vec<f64>,
}

/// Draws weights per the config and normalizes the recurrent matrix to
/// spectral radius 1. A sparsified draw whose radius falls below 1e-12 is
/// redrawn, at most ten times.
pub fn build_reservoir(cfg: &ReservoirConfig, rng: &mut SeededRng) -> Result<Reservoir> {
    cfg.validate()?;
    let mut w_rec = None;
    for _ in 0..BUILD_RETRIES {
        let raw = uniform_matrix(cfg.n_x, cfg.n_x, -1.0, 1.0, rng)?;
        let sparse = sparsify(&raw, cfg.p, rng)?;
        match spectral_radius(&sparse, RADIUS_TOL, RADIUS_MAX_ITER) {
            Ok(radius) if radius > DEGENERATE_RADIUS => {
                w_rec = Some(sparse.scaled(1.0 / radius));
                break;
            }
            // Near-zero radius or a non-converging estimate: redraw.
            Ok(_) | Err(Error::NoConvergence { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let w_rec = w_rec.ok_or(Error::DegenerateMatrix {
        retries: BUILD_RETRIES,
    })?;
    let w_in = uniform_matrix(cfg.n_x, cfg.n_i, -cfg.input_scale, cfg.input_scale, rng)?;
    let mut b = Vector::zeros(cfg.n_x);
    if cfg.bias_scale > 0.0 {
        for i in 0..cfg.n_x {
            b[i] = rng.uniform(-cfg.bias_scale, cfg.bias_scale);
        }
    }
    Ok(Reservoir {
        scratch: vec![0.0; cfg.n_x],
        x: Vector::zeros(cfg.n_x),
        g: cfg.g,
        b,
        w_in,
        w_rec,
    })
}

impl Reservoir {
    /// Builds directly from given weights; used by tests that pin entries.
    pub fn from_weights(w_rec: Matrix, w_in: Matrix, b: Vector, g: f64) -> Result<Self> {
        if !w_rec.is_square() {
            return Err(Error::NonSquareMatrix {
                rows: w_rec.rows(),
                cols: w_rec.cols(),
            });
        }
        let n_x = w_rec.rows();
        if w_in.rows() != n_x {
            return Err(Error::DimensionMismatch {
                expected: n_x,
                got: w_in.rows(),
            });
        }
        if b.len() != n_x {
            return Err(Error::DimensionMismatch {
                expected: n_x,
                got: b.len(),
            });
        }
        Ok(Reservoir {
            scratch: vec![0.0; n_x],
            x: Vector::zeros(n_x),
            g,
            b,
            w_in,
            w_rec,
        })
    }

    pub fn n_x(&self) -> usize {
        self.w_rec.rows()
    }

    pub fn n_i(&self) -> usize {
        self.w_in.cols()
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn w_rec(&self) -> &Matrix {
        &self.w_rec
    }

    pub fn w_in(&self) -> &Matrix {
        &self.w_in
    }

    pub fn bias(&self) -> &Vector {
        &self.b
    }

    /// Current state; every component is inside [-1, 1].
    pub fn state(&self) -> &Vector {
        &self.x
    }

    /// Overwrites the state, e.g. to probe fading memory from a chosen
    /// starting point. Components must lie in [-1, 1].
    pub fn set_state(&mut self, x: Vector) -> Result<()> {
        if x.len() != self.n_x() {
            return Err(Error::DimensionMismatch {
                expected: self.n_x(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !(-1.0..=1.0).contains(v)) {
            return Err(Error::InvalidConfig(
                "reservoir state components must lie in [-1, 1]".into(),
            ));
        }
        self.x = x;
        Ok(())
    }

    /// Advances the state: `x = tanh(g W_rec x + W_in u + b)`. Returns a
    /// copy of the new state.
    pub fn step(&mut self, u: &Vector) -> Result<Vector> {
        if u.len() != self.n_i() {
            return Err(Error::DimensionMismatch {
                expected: self.n_i(),
                got: u.len(),
            });
        }
        self.w_rec.matvec_into(self.x.as_slice(), &mut self.scratch);
        let state = self.x.as_mut_slice();
        for (i, (s, pre)) in state.iter_mut().zip(&self.scratch).enumerate() {
            let rec = self.g * pre;
            let inp = numerics::dot(self.w_in.row(i), u.as_slice());
            *s = (rec + inp + self.b[i]).tanh();
        }
        Ok(self.x.clone())
    }

    /// Resets the state to the zero vector (the per-episode convention).
    pub fn reset_state(&mut self) {
        for v in self.x.as_mut_slice() {
            *v = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::spectral_radius;

    fn cfg(n_x: usize, n_i: usize, p: f64) -> ReservoirConfig {
        ReservoirConfig {
            n_x,
            p,
            ..ReservoirConfig::new(n_i)
        }
    }

    #[test]
    fn built_reservoir_has_unit_radius() {
        let mut rng = SeededRng::new(11);
        let r = build_reservoir(&cfg(50, 2, 0.1), &mut rng).unwrap();
        let radius = spectral_radius(r.w_rec(), 1e-10, 500_000).unwrap();
        assert!((radius - 1.0).abs() < 1e-6, "radius {radius}");
    }

    #[test]
    fn dense_limit_has_unit_radius() {
        let mut rng = SeededRng::new(2);
        let r = build_reservoir(&cfg(3, 1, 1.0), &mut rng).unwrap();
        assert!(r.w_rec().as_slice().iter().all(|&v| v != 0.0));
        let radius = spectral_radius(r.w_rec(), 1e-10, 500_000).unwrap();
        assert!((radius - 1.0).abs() < 1e-6, "radius {radius}");
    }

    #[test]
    fn same_seed_same_weights() {
        let a = build_reservoir(&cfg(20, 3, 0.2), &mut SeededRng::new(5)).unwrap();
        let b = build_reservoir(&cfg(20, 3, 0.2), &mut SeededRng::new(5)).unwrap();
        assert_eq!(a.w_rec(), b.w_rec());
        assert_eq!(a.w_in(), b.w_in());
        assert_eq!(a.bias(), b.bias());
    }

    #[test]
    fn zero_weights_give_zero_state() {
        let mut r = Reservoir::from_weights(
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 1),
            Vector::zeros(2),
            0.9,
        )
        .unwrap();
        let x = r.step(&Vector::from_vec(vec![3.0]).unwrap()).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn input_only_step_is_tanh_of_input() {
        let mut r = Reservoir::from_weights(
            Matrix::zeros(1, 1),
            Matrix::identity(1),
            Vector::zeros(1),
            0.9,
        )
        .unwrap();
        let x = r.step(&Vector::from_vec(vec![0.5]).unwrap()).unwrap();
        assert!((x[0] - 0.5f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn two_steps_match_hand_evaluation() {
        // 3-neuron reservoir evaluated by writing out the update by hand.
        let w_rec =
            Matrix::from_rows(&[&[0.2, -0.5, 0.1], &[0.0, 0.3, -0.4], &[0.6, 0.0, -0.1]]).unwrap();
        let w_in = Matrix::from_rows(&[&[1.0, 0.0], &[-0.5, 0.5], &[0.0, 1.0]]).unwrap();
        let b = Vector::from_vec(vec![0.1, -0.2, 0.05]).unwrap();
        let g = 0.9;
        let mut r = Reservoir::from_weights(w_rec, w_in, b, g).unwrap();

        let u1 = Vector::from_vec(vec![0.3, -0.6]).unwrap();
        let u2 = Vector::from_vec(vec![-0.1, 0.2]).unwrap();
        let x1 = r.step(&u1).unwrap();
        let x2 = r.step(&u2).unwrap();

        // Step 1 from x = 0: x1_i = tanh(w_in_i . u1 + b_i)
        let e1: [f64; 3] = [
            (1.0f64 * 0.3 + 0.0 * -0.6 + 0.1).tanh(),
            (-0.5f64 * 0.3 + 0.5 * -0.6 + -0.2).tanh(),
            (0.0f64 * 0.3 + 1.0 * -0.6 + 0.05).tanh(),
        ];
        for i in 0..3 {
            assert!((x1[i] - e1[i]).abs() < 1e-12, "step1 component {i}");
        }
        // Step 2: x2_i = tanh(g * (w_rec row_i . e1) + w_in_i . u2 + b_i)
        let e2: [f64; 3] = [
            (g * (0.2 * e1[0] + -0.5 * e1[1] + 0.1 * e1[2]) + (1.0 * -0.1 + 0.0 * 0.2) + 0.1)
                .tanh(),
            (g * (0.0 * e1[0] + 0.3 * e1[1] + -0.4 * e1[2]) + (-0.5 * -0.1 + 0.5 * 0.2) + -0.2)
                .tanh(),
            (g * (0.6 * e1[0] + 0.0 * e1[1] + -0.1 * e1[2]) + (0.0 * -0.1 + 1.0 * 0.2) + 0.05)
                .tanh(),
        ];
        for i in 0..3 {
            assert!((x2[i] - e2[i]).abs() < 1e-12, "step2 component {i}");
        }
    }

    #[test]
    fn reset_gives_fresh_equivalent_stream() {
        let mut rng = SeededRng::new(9);
        let built = build_reservoir(&cfg(10, 2, 0.5), &mut rng).unwrap();
        let mut warmed = built.clone();
        let mut fresh = built.clone();

        let mut drive = SeededRng::new(77);
        for _ in 0..20 {
            let u =
                Vector::from_vec(vec![drive.uniform(-1.0, 1.0), drive.uniform(-1.0, 1.0)]).unwrap();
            warmed.step(&u).unwrap();
        }
        warmed.reset_state();
        assert!(warmed.state().iter().all(|&v| v == 0.0));
        warmed.reset_state(); // idempotent
        assert!(warmed.state().iter().all(|&v| v == 0.0));

        let mut drive = SeededRng::new(123);
        for _ in 0..50 {
            let u =
                Vector::from_vec(vec![drive.uniform(-1.0, 1.0), drive.uniform(-1.0, 1.0)]).unwrap();
            let a = warmed.step(&u).unwrap();
            let b = fresh.step(&u).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn state_stays_bounded() {
        let mut rng = SeededRng::new(21);
        let mut r = build_reservoir(&cfg(30, 2, 0.3), &mut rng).unwrap();
        let mut drive = SeededRng::new(4);
        for _ in 0..500 {
            let u = Vector::from_vec(vec![drive.uniform(-50.0, 50.0), drive.uniform(-50.0, 50.0)])
                .unwrap();
            let x = r.step(&u).unwrap();
            assert!(x.iter().all(|&v| (-1.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn weights_do_not_change_when_stepping() {
        let mut rng = SeededRng::new(31);
        let mut r = build_reservoir(&cfg(15, 1, 0.4), &mut rng).unwrap();
        let w_rec = r.w_rec().clone();
        let w_in = r.w_in().clone();
        let b = r.bias().clone();
        for i in 0..100 {
            r.step(&Vector::from_vec(vec![(i as f64 * 0.37).sin()]).unwrap())
                .unwrap();
        }
        assert_eq!(&w_rec, r.w_rec());
        assert_eq!(&w_in, r.w_in());
        assert_eq!(&b, r.bias());
    }

    #[test]
    fn fading_memory_at_default_gain() {
        // Echo state property probe: copies with different starting states,
        // driven by the same 200-step input stream, end up indistinguishable.
        for seed in 0..10u64 {
            let mut rng = SeededRng::new(seed);
            let base = build_reservoir(&cfg(50, 2, 0.1), &mut rng).unwrap();
            let mut a = base.clone();
            let mut b = base.clone();
            let mut init = SeededRng::new(seed.wrapping_add(1000));
            let xa: Vec<f64> = (0..50).map(|_| init.uniform(-1.0, 1.0)).collect();
            let xb: Vec<f64> = (0..50).map(|_| init.uniform(-1.0, 1.0)).collect();
            a.set_state(Vector::from_vec(xa).unwrap()).unwrap();
            b.set_state(Vector::from_vec(xb).unwrap()).unwrap();

            let mut drive = SeededRng::new(seed.wrapping_add(2000));
            let mut dist = f64::INFINITY;
            for _ in 0..200 {
                let u = Vector::from_vec(vec![drive.uniform(-1.0, 1.0), drive.uniform(-1.0, 1.0)])
                    .unwrap();
                let sa = a.step(&u).unwrap();
                let sb = b.step(&u).unwrap();
                dist = sa
                    .iter()
                    .zip(sb.iter())
                    .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            }
            assert!(dist < 1e-3, "seed {seed}: final state distance {dist}");
        }
    }

    #[test]
    fn step_rejects_wrong_input_length() {
        let mut rng = SeededRng::new(1);
        let mut r = build_reservoir(&cfg(5, 2, 0.5), &mut rng).unwrap();
        assert!(matches!(
            r.step(&Vector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
