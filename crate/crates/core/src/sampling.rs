//! Seeded random matrices used by the Aplog sampler and by tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matcore::{exp_oracle, Mat};

/// Random skew-symmetric matrix with i.i.d. Gaussian upper-triangle entries.
pub fn random_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let mut a = Mat::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let x: f64 = rng.sample(StandardNormal);
            a[(i, j)] = x;
            a[(j, i)] = -x;
        }
    }
    a
}

/// Haar-distributed orthogonal matrix from the Householder QR of a Gaussian
/// matrix, with column signs fixed by the diagonal of R.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let mut a = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = rng.sample(StandardNormal);
        }
    }
    let mut q = Mat::identity(n);
    for k in 0..n.saturating_sub(1) {
        let x: Vec<f64> = (k..n).map(|i| a[(i, k)]).collect();
        let alpha = -x[0].signum() * x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // a ← H a, q ← q H with H = I − 2vvᵀ/‖v‖²
        for j in 0..n {
            let dot: f64 = (k..n).map(|i| v[i - k] * a[(i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                a[(i, j)] -= f * v[i - k];
            }
        }
        for i in 0..n {
            let dot: f64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum();
            let f = 2.0 * dot / vnorm2;
            for j in k..n {
                q[(i, j)] -= f * v[j - k];
            }
        }
    }
    for j in 0..n {
        if a[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Haar orthogonal matrix conditioned on `det = sign` (first column flipped
/// when needed).
pub fn haar_orthogonal_with_det<R: Rng + ?Sized>(n: usize, sign: f64, rng: &mut R) -> Mat {
    let mut q = haar_orthogonal(n, rng);
    if q.det().signum() != sign.signum() {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// Random element of SO(n) as the exponential of a scaled Gaussian skew matrix.
pub fn random_special_orthogonal<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> Mat {
    exp_oracle(&random_skew(n, rng).scale(scale))
}
