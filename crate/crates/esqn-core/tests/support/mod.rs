//! Shared test oracles, kept independent of the library code they check.
//!
//! `dense_spectral_radius` is a full dense eigensolver (real Householder
//! Hessenberg reduction, then complex single-shift QR iteration with
//! Wilkinson shifts), used to pin the power-iteration estimates. The env
//! integrators in [`envdyn`] re-derive each task's dynamics from the
//! published equations with independently structured code.

#![allow(dead_code)]

use esqn_core::Matrix;

// ---------------------------------------------------------------------------
// Complex arithmetic
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }

    pub fn real(re: f64) -> Self {
        C64 { re, im: 0.0 }
    }

    pub fn zero() -> Self {
        C64 { re: 0.0, im: 0.0 }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> Self {
        C64::new(self.re, -self.im)
    }

    pub fn add(self, o: C64) -> Self {
        C64::new(self.re + o.re, self.im + o.im)
    }

    pub fn sub(self, o: C64) -> Self {
        C64::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(self, o: C64) -> Self {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn scale(self, c: f64) -> Self {
        C64::new(self.re * c, self.im * c)
    }

    pub fn div(self, o: C64) -> Self {
        // Smith's algorithm for a stable complex division.
        if o.re.abs() >= o.im.abs() {
            let r = o.im / o.re;
            let d = o.re + o.im * r;
            C64::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = o.re / o.im;
            let d = o.re * r + o.im;
            C64::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }

    pub fn sqrt(self) -> Self {
        if self.re == 0.0 && self.im == 0.0 {
            return C64::zero();
        }
        let t = ((self.re.abs() + self.abs()) * 0.5).sqrt();
        if self.re >= 0.0 {
            C64::new(t, self.im / (2.0 * t))
        } else {
            C64::new(self.im.abs() / (2.0 * t), (t).copysign(self.im))
        }
    }
}

// ---------------------------------------------------------------------------
// Dense eigensolver
// ---------------------------------------------------------------------------

/// Spectral radius via full eigendecomposition: the oracle for the
/// power-iteration estimator.
pub fn dense_spectral_radius(m: &Matrix) -> f64 {
    eigenvalues(m).into_iter().map(C64::abs).fold(0.0, f64::max)
}

/// All eigenvalues of a square real matrix.
pub fn eigenvalues(m: &Matrix) -> Vec<C64> {
    assert!(m.is_square(), "eigensolver needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![C64::real(m[(0, 0)])];
    }
    let h = hessenberg(m);
    qr_eigenvalues(h, n)
}

/// Real Householder reduction to upper Hessenberg form (similarity
/// transform, spectrum preserved), returned as a complex matrix.
fn hessenberg(m: &Matrix) -> Vec<Vec<C64>> {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|r| m.row(r).to_vec()).collect();

    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let alpha = if a[k + 1][k] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm <= 1e-300 {
            continue;
        }
        for x in &mut v {
            *x /= vnorm;
        }
        // A <- P A with P = I - 2 v v^T on rows k+1..n
        for j in k..n {
            let dot: f64 = (0..v.len()).map(|i| v[i] * a[k + 1 + i][j]).sum();
            for i in 0..v.len() {
                a[k + 1 + i][j] -= 2.0 * v[i] * dot;
            }
        }
        // A <- A P on columns k+1..n
        for row in a.iter_mut() {
            let dot: f64 = (0..v.len()).map(|i| row[k + 1 + i] * v[i]).sum();
            for i in 0..v.len() {
                row[k + 1 + i] -= 2.0 * dot * v[i];
            }
        }
    }

    let mut h = vec![vec![C64::zero(); n]; n];
    for (r, row) in a.iter().enumerate() {
        for (c, &val) in row.iter().enumerate() {
            // Entries below the first subdiagonal are eliminated exactly.
            if c + 1 >= r {
                h[r][c] = C64::real(val);
            }
        }
    }
    h
}

/// Complex single-shift QR iteration with Wilkinson shifts and deflation.
fn qr_eigenvalues(mut h: Vec<Vec<C64>>, n: usize) -> Vec<C64> {
    const EPS: f64 = 2.2e-16;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iters_since_deflation = 0usize;
    let mut total_iters = 0usize;
    let max_total = 200 * n;

    loop {
        // Zero out negligible subdiagonal entries.
        for m in 1..=hi {
            let small = EPS * (h[m - 1][m - 1].abs() + h[m][m].abs()) + 1e-300;
            if h[m][m - 1].abs() <= small {
                h[m][m - 1] = C64::zero();
            }
        }
        // Deflate converged trailing 1x1 blocks.
        while hi > 0 && h[hi][hi - 1].abs() == 0.0 {
            eigs.push(h[hi][hi]);
            hi -= 1;
            iters_since_deflation = 0;
        }
        if hi == 0 {
            eigs.push(h[0][0]);
            return eigs;
        }

        // Active block [lo..=hi].
        let mut lo = hi;
        while lo > 0 && h[lo][lo - 1].abs() != 0.0 {
            lo -= 1;
        }

        // Wilkinson shift from the trailing 2x2 of the active block;
        // an exceptional shift breaks rare non-converging cycles.
        let shift = if iters_since_deflation > 0 && iters_since_deflation % 15 == 0 {
            C64::real(h[hi][hi - 1].abs() + h[hi - 1][hi - 2.min(hi - 1)].abs())
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        qr_step(&mut h, lo, hi, shift, n);

        iters_since_deflation += 1;
        total_iters += 1;
        assert!(
            total_iters < max_total,
            "QR iteration failed to converge within {max_total} sweeps"
        );
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = a.add(d).scale(0.5);
    let det = a.mul(d).sub(b.mul(c));
    let disc = half_tr.mul(half_tr).sub(det).sqrt();
    let l1 = half_tr.add(disc);
    let l2 = half_tr.sub(disc);
    if l1.sub(d).abs() <= l2.sub(d).abs() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR sweep on the active block via complex Givens
/// rotations: H <- R Q + sigma I where H - sigma I = Q R.
fn qr_step(h: &mut [Vec<C64>], lo: usize, hi: usize, shift: C64, n: usize) {
    for i in lo..=hi {
        h[i][i] = h[i][i].sub(shift);
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(h[i][i], h[i + 1][i]);
        for j in i..n {
            let t1 = h[i][j];
            let t2 = h[i + 1][j];
            h[i][j] = t1.scale(c).add(s.mul(t2));
            h[i + 1][j] = t2.scale(c).sub(s.conj().mul(t1));
        }
        rotations.push((i, c, s));
    }
    for &(i, c, s) in &rotations {
        for r in 0..=(i + 1).min(hi) {
            let u = h[r][i];
            let v = h[r][i + 1];
            h[r][i] = u.scale(c).add(v.mul(s.conj()));
            h[r][i + 1] = v.scale(c).sub(u.mul(s));
        }
    }
    for i in lo..=hi {
        h[i][i] = h[i][i].add(shift);
    }
}

/// Complex Givens pair (c real, s complex) with
/// `[c, s; -conj(s), c] * [f; g] = [r; 0]` and `c^2 + |s|^2 = 1`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    let fa = f.abs();
    let ga = g.abs();
    if ga == 0.0 {
        return (1.0, C64::zero());
    }
    if fa == 0.0 {
        return (0.0, g.conj().scale(1.0 / ga));
    }
    let r = fa.hypot(ga);
    let c = fa / r;
    let s = f.scale(1.0 / fa).mul(g.conj()).scale(1.0 / r);
    (c, s)
}

// ---------------------------------------------------------------------------
// Relative error helper shared by gradient checks
// ---------------------------------------------------------------------------

/// Symmetric relative error with an absolute floor for near-zero pairs.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a.abs() + b.abs()).max(1e-8)
}

// ---------------------------------------------------------------------------
// Independent environment integrators
// ---------------------------------------------------------------------------

/// Re-derived task dynamics for trajectory oracles. Each function
/// transcribes the published equations with its own code structure and
/// its own constants, so agreement with the library is meaningful.
pub mod envdyn {
    use std::f64::consts::PI;

    /// Cart-pole tick (Euler, position advanced with the old velocity).
    pub fn cartpole_next(s: &[f64], force: f64) -> Vec<f64> {
        let (g, m_cart, m_pole, half_len, dt) = (9.8, 1.0, 0.1, 0.5, 0.02);
        let m_total = m_cart + m_pole;
        let (x, v, th, w) = (s[0], s[1], s[2], s[3]);
        let (sin_th, cos_th) = (th.sin(), th.cos());
        let pm_len = m_pole * half_len;
        let tmp = (force + pm_len * w * w * sin_th) / m_total;
        let denom = half_len * (4.0 / 3.0 - m_pole * cos_th * cos_th / m_total);
        let w_dot = (g * sin_th - cos_th * tmp) / denom;
        let v_dot = tmp - pm_len * w_dot * cos_th / m_total;
        vec![x + dt * v, v + dt * v_dot, th + dt * w, w + dt * w_dot]
    }

    /// Mountain-car tick; `push` in {-1, 0, 1}.
    pub fn mountaincar_next(s: &[f64], push: f64) -> Vec<f64> {
        let (force, grav) = (0.001, 0.0025);
        let (lo, hi, v_max) = (-1.2, 0.6, 0.07);
        let mut v = s[1] + push * force - grav * (3.0 * s[0]).cos();
        if v > v_max {
            v = v_max;
        } else if v < -v_max {
            v = -v_max;
        }
        let mut p = s[0] + v;
        if p > hi {
            p = hi;
        } else if p < lo {
            p = lo;
        }
        if p == lo && v < 0.0 {
            v = 0.0;
        }
        vec![p, v]
    }

    fn acrobot_rates(s: &[f64; 4], torque: f64) -> [f64; 4] {
        let (m1, m2, l1, lc1, lc2, i1, i2, g) = (1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 1.0, 9.8);
        let (t1, t2, w1, w2) = (s[0], s[1], s[2], s[3]);
        let c2 = t2.cos();
        let s2 = t2.sin();
        let d1 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2) + i1 + i2;
        let d2 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + i2;
        let phi2 = m2 * lc2 * g * (t1 + t2 - PI / 2.0).cos();
        let phi1 = -m2 * l1 * lc2 * w2 * w2 * s2 - 2.0 * m2 * l1 * lc2 * w2 * w1 * s2
            + (m1 * lc1 + m2 * l1) * g * (t1 - PI / 2.0).cos()
            + phi2;
        let a2 = (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * w1 * w1 * s2 - phi2)
            / (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
        let a1 = -(d2 * a2 + phi1) / d1;
        [w1, w2, a1, a2]
    }

    fn wrap_pi(mut a: f64) -> f64 {
        while a > PI {
            a -= 2.0 * PI;
        }
        while a < -PI {
            a += 2.0 * PI;
        }
        a
    }

    /// Acrobot tick: one RK4 step over dt = 0.2, then wrap and clip.
    pub fn acrobot_next(s: &[f64], torque: f64) -> Vec<f64> {
        let dt = 0.2;
        let y0 = [s[0], s[1], s[2], s[3]];
        let k1 = acrobot_rates(&y0, torque);
        let mut y1 = [0.0; 4];
        for i in 0..4 {
            y1[i] = y0[i] + 0.5 * dt * k1[i];
        }
        let k2 = acrobot_rates(&y1, torque);
        let mut y2 = [0.0; 4];
        for i in 0..4 {
            y2[i] = y0[i] + 0.5 * dt * k2[i];
        }
        let k3 = acrobot_rates(&y2, torque);
        let mut y3 = [0.0; 4];
        for i in 0..4 {
            y3[i] = y0[i] + dt * k3[i];
        }
        let k4 = acrobot_rates(&y3, torque);
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let (v1_max, v2_max) = (4.0 * PI, 9.0 * PI);
        vec![
            wrap_pi(out[0]),
            wrap_pi(out[1]),
            out[2].clamp(-v1_max, v1_max),
            out[3].clamp(-v2_max, v2_max),
        ]
    }

    /// Pendulum tick (semi-implicit Euler, theta wrapped to [-pi, pi]).
    pub fn pendulum_next(s: &[f64], torque: f64) -> Vec<f64> {
        let (g, m, l, dt, w_max) = (10.0, 1.0, 1.0, 0.05, 8.0);
        let (th, w) = (s[0], s[1]);
        let w_new =
            (w + (1.5 * g / l * th.sin() + 3.0 / (m * l * l) * torque) * dt).clamp(-w_max, w_max);
        vec![wrap_pi(th + w_new * dt), w_new]
    }

    /// Pendulum mechanical energy per unit mass scale, for drift checks:
    /// kinetic (I = m l^2 / 3 about the pivot) plus COM potential.
    pub fn pendulum_energy(theta: f64, theta_dot: f64) -> f64 {
        let (g, m, l) = (10.0, 1.0, 1.0);
        0.5 * (m * l * l / 3.0) * theta_dot * theta_dot + m * g * (l / 2.0) * theta.cos()
    }
}
