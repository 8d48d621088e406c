//! Orthonormal DST-I, the eigenbasis of the Dirichlet second-difference
//! operator on the interior nodes of a uniform grid.
//!
//! Realized through a complex FFT of length 2(n+1) on the odd extension
//! [0, w, 0, -reverse(w)]; with the √(2/(n+1)) normalization the
//! transform is an involution.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct DstPlan {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    ext: Vec<Complex64>,
}

impl DstPlan {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(2 * (n + 1));
        DstPlan {
            n,
            fft,
            ext: vec![Complex64::ZERO; 2 * (n + 1)],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place raw DST-I: w_k ← Σ_j w_j sin(jkπ/(n+1)).  Applying it
    /// twice multiplies by (n+1)/2, which is exactly representable, so a
    /// round trip costs only one rounding per element beyond the FFT
    /// itself (this keeps the solver's mass drift at the random-walk
    /// level instead of a per-step normalization bias).
    pub fn transform_raw(&mut self, w: &mut [Complex64]) {
        let n = self.n;
        assert_eq!(w.len(), n);
        let m = 2 * (n + 1);
        self.ext[0] = Complex64::ZERO;
        self.ext[n + 1] = Complex64::ZERO;
        for j in 0..n {
            self.ext[j + 1] = w[j];
            self.ext[m - 1 - j] = -w[j];
        }
        self.fft.process(&mut self.ext);
        // Σ_j w_j sin(jkπ/(n+1)) = (i/2)·X_k for the odd extension; the
        // factor 1/2 is exact.
        for k in 0..n {
            let x = self.ext[k + 1];
            w[k] = Complex64::new(-0.5 * x.im, 0.5 * x.re);
        }
    }

    /// Round-trip factor of [`transform_raw`]: (n+1)/2, exact in binary
    /// floating point.
    pub fn raw_round_trip_factor(&self) -> f64 {
        (self.n as f64 + 1.0) / 2.0
    }

    /// In-place orthonormal DST-I of `w` (length n).  Applying it twice
    /// returns the input.
    pub fn transform(&mut self, w: &mut [Complex64]) {
        self.transform_raw(w);
        let scale = (2.0 / (self.n as f64 + 1.0)).sqrt();
        for wk in w.iter_mut() {
            *wk *= scale;
        }
    }
}

/// Eigenvalue of the negative Dirichlet second difference
/// (2w_j - w_{j-1} - w_{j+1})/dr² attached to sine mode k = 1..n.
pub fn dirichlet_eigenvalue(k: usize, n: usize, dr: f64) -> f64 {
    let theta = (k as f64) * std::f64::consts::PI / (n as f64 + 1.0);
    (2.0 - 2.0 * theta.cos()) / (dr * dr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
        // Small deterministic LCG; test data only needs to be generic.
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        (0..n).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn involution() {
        for n in [1, 2, 7, 64, 255] {
            let mut plan = DstPlan::new(n);
            let orig = random_state(n, 42 + n as u64);
            let mut w = orig.clone();
            plan.transform(&mut w);
            plan.transform(&mut w);
            for (a, b) in w.iter().zip(orig.iter()) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn preserves_l2_norm() {
        let n = 100;
        let mut plan = DstPlan::new(n);
        let orig = random_state(n, 7);
        let mut w = orig.clone();
        plan.transform(&mut w);
        let n0: f64 = orig.iter().map(|z| z.norm_sqr()).sum();
        let n1: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        assert!((n0 - n1).abs() < 1e-12 * n0);
    }

    #[test]
    fn diagonalizes_second_difference() {
        let n = 33;
        let dr = 0.1;
        let mut plan = DstPlan::new(n);
        let orig = random_state(n, 11);

        // Apply the operator in physical space.
        let mut lap = vec![Complex64::ZERO; n];
        for j in 0..n {
            let left = if j == 0 { Complex64::ZERO } else { orig[j - 1] };
            let right = if j == n - 1 { Complex64::ZERO } else { orig[j + 1] };
            lap[j] = (2.0 * orig[j] - left - right) / (dr * dr);
        }
        plan.transform(&mut lap);

        // Multiply by eigenvalues in transform space.
        let mut hat = orig.clone();
        plan.transform(&mut hat);
        for (k, h) in hat.iter_mut().enumerate() {
            *h *= dirichlet_eigenvalue(k + 1, n, dr);
        }

        for (a, b) in lap.iter().zip(hat.iter()) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }
}
