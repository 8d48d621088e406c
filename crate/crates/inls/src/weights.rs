//! Virial weight functions and the piecewise-polynomial machinery that
//! carries them together with four derivatives.
//!
//! Three weights are provided: the unbounded |x|², a C⁴ quadratic-core
//! cutoff (|x|² inside the scale, zero beyond ten scales), and the smooth
//! β-profile whose radial derivative is 1 on [0,1], dips to a negative
//! plateau, and returns to 0 at 10 with total integral zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree-9 "smootherstep" coefficients: S(0)=0, S(1)=1 and the first
/// four derivatives vanish at both ends (S' = 630 x⁴(1-x)⁴).
const SMOOTHER9: [f64; 10] = [
    0.0, 0.0, 0.0, 0.0, 0.0, 126.0, -420.0, 540.0, -315.0, 70.0,
];

fn poly_eval(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_axpy(y: &mut Vec<f64>, alpha: f64, x: &[f64]) {
    if y.len() < x.len() {
        y.resize(x.len(), 0.0);
    }
    for (yi, &xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
}

/// Piecewise polynomial on [breaks[0], breaks[last]] with a constant
/// extension beyond the last break.  Segment polynomials are expressed in
/// the local variable u = (s - lo)/(hi - lo).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    polys: Vec<Vec<f64>>,
    tail: f64,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, polys: Vec<Vec<f64>>, tail: f64) -> Self {
        assert_eq!(breaks.len(), polys.len() + 1);
        assert!(breaks.windows(2).all(|w| w[1] > w[0]));
        PiecewisePoly { breaks, polys, tail }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let m = self.polys.len();
        if s >= self.breaks[m] {
            return self.tail;
        }
        let s = s.max(self.breaks[0]);
        let i = self
            .breaks
            .partition_point(|&b| b <= s)
            .clamp(1, m)
            - 1;
        let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
        poly_eval(&self.polys[i], (s - lo) / (hi - lo))
    }

    /// Derivative, segment by segment (d/ds = (1/width) d/du).
    pub fn derivative(&self) -> PiecewisePoly {
        let polys = self
            .polys
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let width = self.breaks[i + 1] - self.breaks[i];
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &ck)| ck * k as f64 / width)
                    .collect()
            })
            .collect();
        PiecewisePoly::new(self.breaks.clone(), polys, 0.0)
    }

    /// Antiderivative vanishing at the left endpoint.  Only valid when the
    /// constant tail is zero (so the antiderivative stays piecewise
    /// polynomial with a constant extension).
    pub fn antiderivative(&self) -> PiecewisePoly {
        assert_eq!(self.tail, 0.0, "antiderivative needs a zero tail");
        let mut acc = 0.0;
        let mut polys = Vec::with_capacity(self.polys.len());
        for (i, c) in self.polys.iter().enumerate() {
            let width = self.breaks[i + 1] - self.breaks[i];
            let mut ic = vec![acc];
            for (k, &ck) in c.iter().enumerate() {
                ic.push(ck * width / (k + 1) as f64);
            }
            acc = poly_eval(&ic, 1.0);
            polys.push(ic);
        }
        PiecewisePoly::new(self.breaks.clone(), polys, acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightKind {
    /// b(x) = |x|²
    Unbounded,
    /// b_r(x) = r² B(|x|/r), B = y² inside 1, C⁴-tapered to 0 at 10
    QuadraticCutoff,
    /// b_r'(x) = r β(|x|/r) with β(s) = s on [0,1], β(10) = 0
    SmoothBeta,
}

/// A radial virial weight carrying its profile and four derivatives.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VirialWeight {
    pub kind: WeightKind,
    pub scale: f64,
    /// profile B and derivatives B'..B'''' in the scaled variable y = r/scale
    profile: Option<[PiecewisePoly; 5]>,
}

/// β' of the smooth profile: 1 on [0,1], a C⁴ descent to the plateau -κ
/// over [1,4], constant -κ on [4,7], and a C⁴ return to 0 over [7,10].
/// κ = 5/12 makes ∫₀^∞ β' = 0, i.e. β(10) = 0.
fn beta_prime() -> PiecewisePoly {
    let kappa = 5.0 / 12.0;
    let mut ramp_down = vec![1.0];
    poly_axpy(&mut ramp_down, -(1.0 + kappa), &SMOOTHER9);
    let mut ramp_up = vec![-kappa];
    poly_axpy(&mut ramp_up, kappa, &SMOOTHER9);
    PiecewisePoly::new(
        vec![0.0, 1.0, 4.0, 7.0, 10.0],
        vec![vec![1.0], ramp_down, vec![-kappa], ramp_up],
        0.0,
    )
}

/// The quadratic-core cutoff profile B(y) = y² (y ≤ 1),
/// y²(1 - S((y-1)/9)) (1 < y < 10), 0 (y ≥ 10); C⁴ at both joins since
/// the first four derivatives of S vanish at its endpoints.
fn cutoff_profile() -> PiecewisePoly {
    // On [1,10] in u = (y-1)/9: y² = (1+9u)².
    let y_sq = vec![1.0, 18.0, 81.0];
    let mut one_minus_s = vec![1.0];
    poly_axpy(&mut one_minus_s, -1.0, &SMOOTHER9);
    PiecewisePoly::new(
        vec![0.0, 1.0, 10.0],
        vec![vec![0.0, 0.0, 1.0], poly_mul(&y_sq, &one_minus_s)],
        0.0,
    )
}

impl VirialWeight {
    pub fn new(kind: WeightKind, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "weight scale must be positive, got {scale}"
            )));
        }
        let profile = match kind {
            WeightKind::Unbounded => None,
            WeightKind::QuadraticCutoff => Some(cutoff_profile()),
            WeightKind::SmoothBeta => Some(beta_prime().antiderivative().antiderivative()),
        };
        let profile = profile.map(|b0| {
            let b1 = b0.derivative();
            let b2 = b1.derivative();
            let b3 = b2.derivative();
            let b4 = b3.derivative();
            [b0, b1, b2, b3, b4]
        });
        Ok(VirialWeight {
            kind,
            scale,
            profile,
        })
    }

    /// k-th radial derivative of the weight b_r at radius `r`
    /// (k = 0 is the weight itself): scale^{2-k} B^{(k)}(r/scale).
    pub fn deriv(&self, k: usize, r: f64) -> f64 {
        assert!(k <= 4);
        match &self.profile {
            None => match k {
                0 => r * r,
                1 => 2.0 * r,
                2 => 2.0,
                _ => 0.0,
            },
            Some(b) => self.scale.powi(2 - k as i32) * b[k].eval(r / self.scale),
        }
    }

    pub fn weight(&self, r: f64) -> f64 {
        self.deriv(0, r)
    }

    /// Radial Laplacian b'' + 2b'/r.
    pub fn laplacian(&self, r: f64) -> f64 {
        if self.profile.is_none() {
            return 6.0;
        }
        self.deriv(2, r) + 2.0 * self.deriv(1, r) / r
    }

    /// Radial bi-Laplacian b'''' + 4b'''/r.
    pub fn bilaplacian(&self, r: f64) -> f64 {
        if self.profile.is_none() {
            return 0.0;
        }
        self.deriv(4, r) + 4.0 * self.deriv(3, r) / r
    }

    /// β(s) = b'(s·scale)/scale, the normalized derivative profile.
    pub fn beta(&self, s: f64) -> f64 {
        self.deriv(1, s * self.scale) / self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn smootherstep_endpoints() {
        assert_eq!(poly_eval(&SMOOTHER9, 0.0), 0.0);
        assert_relative_eq!(poly_eval(&SMOOTHER9, 1.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn piecewise_derivative_matches_finite_difference() {
        for kind in [WeightKind::QuadraticCutoff, WeightKind::SmoothBeta] {
            let w = VirialWeight::new(kind, 2.0).unwrap();
            let h = 1e-6;
            for i in 1..400 {
                let r = 0.05 * i as f64;
                for k in 0..4 {
                    let fd = (w.deriv(k, r + h) - w.deriv(k, r - h)) / (2.0 * h);
                    let an = w.deriv(k + 1, r);
                    let scale = w.deriv(k, r).abs().max(1.0);
                    assert!(
                        (fd - an).abs() <= 1e-4 * scale.max(an.abs()),
                        "{kind:?} k={k} r={r}: fd={fd} vs {an}"
                    );
                }
            }
        }
    }

    #[test]
    fn cutoff_matches_quadratic_core_and_vanishes_far() {
        let w = VirialWeight::new(WeightKind::QuadraticCutoff, 3.0).unwrap();
        for r in [0.1, 1.0, 2.9] {
            assert_relative_eq!(w.weight(r), r * r, max_relative = 1e-12);
            assert_relative_eq!(w.laplacian(r), 6.0, max_relative = 1e-9);
        }
        for r in [30.0, 50.0, 1e3] {
            assert_eq!(w.weight(r), 0.0);
            assert_eq!(w.deriv(1, r), 0.0);
        }
    }

    #[test]
    fn beta_profile_constraints() {
        let w = VirialWeight::new(WeightKind::SmoothBeta, 1.0).unwrap();
        // β(s) = s on [0,1].
        for i in 0..=20 {
            let s = 0.05 * i as f64;
            assert_relative_eq!(w.beta(s), s, epsilon = 1e-12);
        }
        // β' ≤ 1 on a dense grid, β ≥ 0, β(s) = 0 for s ≥ 10.
        let beta_deriv_max = (0..=4000)
            .map(|i| w.deriv(2, 0.003 * i as f64))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(beta_deriv_max <= 1.0 + 1e-12);
        for i in 0..=4000 {
            let s = 0.003 * i as f64;
            assert!(w.beta(s) >= -1e-12, "s={s}");
        }
        assert!(w.beta(10.0).abs() < 1e-12);
        assert_eq!(w.beta(12.0), 0.0);
    }

    #[test]
    fn unbounded_weight_closed_forms() {
        let w = VirialWeight::new(WeightKind::Unbounded, 1.0).unwrap();
        assert_eq!(w.weight(3.0), 9.0);
        assert_eq!(w.deriv(1, 3.0), 6.0);
        assert_eq!(w.laplacian(0.5), 6.0);
        assert_eq!(w.bilaplacian(0.5), 0.0);
    }

    #[test]
    fn scaling_relation() {
        // b_r(x) = r_c² B(|x|/r_c): doubling the scale quadruples the
        // weight at matched y.
        let w1 = VirialWeight::new(WeightKind::QuadraticCutoff, 1.0).unwrap();
        let w2 = VirialWeight::new(WeightKind::QuadraticCutoff, 2.0).unwrap();
        for y in [0.3, 1.5, 4.0, 9.0] {
            assert_relative_eq!(w2.weight(2.0 * y), 4.0 * w1.weight(y), max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(VirialWeight::new(WeightKind::SmoothBeta, 0.0).is_err());
        assert!(VirialWeight::new(WeightKind::SmoothBeta, f64::NAN).is_err());
    }
}
