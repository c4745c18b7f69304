//! Spectral-radius estimation by power iteration.
//!
//! Plain power iteration fails when the dominant eigenvalue is a complex
//! conjugate pair (common for random asymmetric matrices), so each sweep
//! does a Rayleigh-Ritz step on the two-dimensional Krylov span `{x, Ax}`:
//! the 2x2 projected block converges to the dominant pair and its
//! eigenvalue modulus (real or complex) is the radius estimate.
//!
//! Convergence is judged two ways: a streak of successive estimates within
//! `tol` (fast path for well-separated spectra), and the min-max band of
//! estimates over a fixed window shrinking inside `tol` (handles rotating
//! iterates and near-degenerate moduli, where successive estimates keep
//! wobbling long after the value has settled). The start vector comes from
//! a fixed internal seed and is re-randomized only when the window band
//! stops shrinking while still far from tolerance, keeping the whole
//! routine deterministic.

use super::{dot, Matrix, SeededRng};
use crate::error::{Error, Result};

const STABLE_SWEEPS: usize = 4;
const WINDOW: usize = 512;
const STALLED_WINDOWS_FOR_RESTART: usize = 4;
const KERNEL_HITS_FOR_ZERO: usize = 3;

/// Largest eigenvalue magnitude of a square matrix, to `tol`.
///
/// On exhaustion of `max_iter` the best estimate is reported inside
/// [`Error::NoConvergence`].
pub fn spectral_radius(m: &Matrix, tol: f64, max_iter: usize) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 1 {
        return Ok(m[(0, 0)].abs());
    }
    if m.as_slice().iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }

    let mut rng = SeededRng::new(0x5EED_0F5C_A1A5);
    let mut x = random_unit(n, &mut rng);
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];

    let mut prev_est = f64::NAN;
    let mut last_est = 0.0;
    let mut stable = 0usize;
    let mut kernel_hits = 0usize;

    let mut band_lo = f64::INFINITY;
    let mut band_hi = f64::NEG_INFINITY;
    let mut in_window = 0usize;
    let mut prev_band = f64::INFINITY;
    let mut stalled_windows = 0usize;

    for _iter in 0..max_iter {
        m.matvec_into(&x, &mut y);
        let ny = dot(&y, &y).sqrt();
        if ny < 1e-300 {
            // x landed in the kernel; nilpotent matrices funnel every start
            // vector here, so a few hits mean the radius is zero.
            kernel_hits += 1;
            if kernel_hits >= KERNEL_HITS_FOR_ZERO {
                return Ok(0.0);
            }
            x = random_unit(n, &mut rng);
            continue;
        }

        let est = ritz_estimate(m, &x, &y, ny, &mut z, &mut w);
        last_est = est;
        let scale = est.abs().max(1.0);

        if (est - prev_est).abs() <= tol * scale {
            stable += 1;
            if stable >= STABLE_SWEEPS {
                return Ok(est);
            }
        } else {
            stable = 0;
        }
        prev_est = est;

        band_lo = band_lo.min(est);
        band_hi = band_hi.max(est);
        in_window += 1;
        if in_window == WINDOW {
            let band = band_hi - band_lo;
            if band <= tol * scale {
                return Ok(est);
            }
            if band > 0.9 * prev_band {
                stalled_windows += 1;
                if stalled_windows >= STALLED_WINDOWS_FOR_RESTART {
                    x = random_unit(n, &mut rng);
                    prev_est = f64::NAN;
                    stable = 0;
                    stalled_windows = 0;
                    prev_band = f64::INFINITY;
                    band_lo = f64::INFINITY;
                    band_hi = f64::NEG_INFINITY;
                    in_window = 0;
                    continue;
                }
            } else {
                stalled_windows = 0;
            }
            prev_band = band;
            band_lo = f64::INFINITY;
            band_hi = f64::NEG_INFINITY;
            in_window = 0;
        }

        let inv = 1.0 / ny;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi * inv;
        }
    }

    Err(Error::NoConvergence {
        best: last_est,
        iterations: max_iter,
    })
}

/// Max eigenvalue modulus of the 2x2 Rayleigh-Ritz block on span `{x, y}`,
/// with `y = Ax` and `x` unit length.
fn ritz_estimate(m: &Matrix, x: &[f64], y: &[f64], ny: f64, z: &mut [f64], w: &mut [f64]) -> f64 {
    let c = dot(x, y);
    for ((wi, yi), xi) in w.iter_mut().zip(y).zip(x) {
        *wi = yi - c * xi;
    }
    let nw = dot(w, w).sqrt();
    if nw <= 1e-13 * ny.max(1.0) {
        // x is (numerically) an eigenvector already.
        return c.abs();
    }
    let inv = 1.0 / nw;
    for wi in w.iter_mut() {
        *wi *= inv;
    }
    m.matvec_into(w, z);
    // B = [q1 q2]^T A [q1 q2] with q1 = x, q2 = w:
    // A q1 = y gives the first column exactly.
    let b11 = c;
    let b21 = nw;
    let b12 = dot(x, z);
    let b22 = dot(w, z);
    max_modulus_2x2(b11, b12, b21, b22)
}

fn max_modulus_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let half_tr = 0.5 * (a + d);
    let det = a * d - b * c;
    let disc = half_tr * half_tr - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (half_tr + s).abs().max((half_tr - s).abs())
    } else {
        // Complex pair; modulus^2 equals the determinant.
        det.sqrt()
    }
}

fn random_unit(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
