//! Minimal dense linear algebra, seeded random generation, spectral-radius
//! estimation and a finite-difference gradient checker.
//!
//! Everything is double precision: the readout gradient checks compare
//! analytic backpropagation against central differences at 1e-4 relative
//! tolerance, which single precision cannot hold reliably.

mod gradcheck;
mod matrix;
mod rng;
mod spectral;

pub use gradcheck::finite_diff_grad;
pub use matrix::{sparsify, uniform_matrix, Matrix, Vector};
pub use rng::SeededRng;
pub use spectral::spectral_radius;

/// Four-lane unrolled dot product.
///
/// Fixed association order keeps results identical across every call site,
/// so frozen test values stay stable.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..chunks {
        let k = i * 4;
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    let mut tail = 0.0;
    for k in chunks * 4..n {
        tail += a[k] * b[k];
    }
    ((s0 + s1) + (s2 + s3)) + tail
}

/// `y += c * x` over slices of equal length.
#[inline]
pub fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}
