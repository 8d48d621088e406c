//! Radial interaction coefficients `g(r)` and the structural condition
//! checker (scaling, variational, rigidity, virial).
//!
//! Built-in families carry closed forms for `r^b g(r)` and its derivative,
//! so condition margins for them are exact up to evaluation roundoff.
//! Tabulated coefficients go through monotone cubic interpolation and get
//! a looser tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ProblemParams;

const GRID_LO: f64 = 1e-6;
const GRID_HI: f64 = 1e6;
const GRID_POINTS: usize = 20_000;
pub const TOL_CLOSED_FORM: f64 = 1e-12;
pub const TOL_TABULATED: f64 = 1e-8;

/// Quintic smoothstep: 0 at 0, 1 at 1, first and second derivatives zero
/// at both ends.
fn smoothstep5(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    }
}

fn smoothstep5_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        30.0 * x * x * (1.0 - x) * (1.0 - x)
    }
}

/// Monotone cubic (Fritsch–Carlson) interpolant on an increasing table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 4 {
            return Err(Error::ParameterDomain(
                "tabulated coefficient needs at least 4 (r, g) pairs".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) || xs[0] <= 0.0 {
            return Err(Error::ParameterDomain(
                "tabulated radii must be positive and strictly increasing".into(),
            ));
        }
        let n = xs.len();
        let mut deltas = vec![0.0; n - 1];
        for i in 0..n - 1 {
            deltas[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut slopes = vec![0.0; n];
        slopes[0] = deltas[0];
        slopes[n - 1] = deltas[n - 2];
        for i in 1..n - 1 {
            if deltas[i - 1] * deltas[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                slopes[i] = 0.5 * (deltas[i - 1] + deltas[i]);
            }
        }
        // Fritsch–Carlson clamp keeps the interpolant monotone per segment.
        for i in 0..n - 1 {
            if deltas[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
            } else {
                let alpha = slopes[i] / deltas[i];
                let beta = slopes[i + 1] / deltas[i];
                let s = alpha * alpha + beta * beta;
                if s > 9.0 {
                    let tau = 3.0 / s.sqrt();
                    slopes[i] = tau * alpha * deltas[i];
                    slopes[i + 1] = tau * beta * deltas[i];
                }
            }
        }
        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn segment(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::ParameterDomain(format!(
                "tabulated coefficient queried at r = {x} outside [{lo}, {hi}]"
            )));
        }
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i - 1,
        };
        Ok(i)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        Ok(h00 * self.ys[i]
            + h10 * h * self.slopes[i]
            + h01 * self.ys[i + 1]
            + h11 * h * self.slopes[i + 1])
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let dh00 = 6.0 * t * (t - 1.0);
        let dh10 = (1.0 - t) * (1.0 - 3.0 * t);
        let dh01 = -dh00;
        let dh11 = t * (3.0 * t - 2.0);
        Ok((dh00 * self.ys[i] + dh01 * self.ys[i + 1]) / h
            + dh10 * self.slopes[i]
            + dh11 * self.slopes[i + 1])
    }
}

/// Coefficient family tag plus family parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Family {
    /// g(r) = r^{-b}
    PurePower,
    /// g(r) = a (r + d) / (r^b (r + c)) with a > 0, 0 <= d <= c, c > 0
    Rational { a: f64, d: f64, c: f64 },
    /// g(r) = h(r) / r^b with h = a below r = 1, a smooth increasing ramp
    /// on (1, 2), and (p0/(p0+1-a))^{p0} above r = 2
    PiecewisePlateau { a: f64 },
    /// g sampled on a table; monotone cubic interpolation, no extrapolation
    Tabulated,
}

/// A radial coefficient profile with analytic derivative and the bounds
/// `gi <= r^b g(r) <= gs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coefficient {
    pub family: Family,
    pub params: ProblemParams,
    pub gi: f64,
    pub gs: f64,
    plateau_top: f64,
    table: Option<MonotoneCubic>,
}

impl Coefficient {
    /// `h(r) = r^b g(r)` in closed form for the built-in families.
    pub fn rbg(&self, r: f64) -> Result<f64> {
        match &self.family {
            Family::PurePower => Ok(1.0),
            Family::Rational { a, d, c } => Ok(a * (r + d) / (r + c)),
            Family::PiecewisePlateau { a } => {
                Ok(a + (self.plateau_top - a) * smoothstep5(r - 1.0))
            }
            Family::Tabulated => {
                let table = self.table.as_ref().unwrap();
                Ok(r.powf(self.params.b) * table.eval(r)?)
            }
        }
    }

    /// d/dr of `r^b g(r)` in closed form.
    pub fn rbg_deriv(&self, r: f64) -> Result<f64> {
        match &self.family {
            Family::PurePower => Ok(0.0),
            Family::Rational { a, d, c } => Ok(a * (c - d) / ((r + c) * (r + c))),
            Family::PiecewisePlateau { a } => {
                Ok((self.plateau_top - a) * smoothstep5_deriv(r - 1.0))
            }
            Family::Tabulated => {
                let b = self.params.b;
                let table = self.table.as_ref().unwrap();
                Ok(b * r.powf(b - 1.0) * table.eval(r)? + r.powf(b) * table.deriv(r)?)
            }
        }
    }

    /// g(r) itself.
    pub fn eval(&self, r: f64) -> Result<f64> {
        match &self.family {
            Family::Tabulated => self.table.as_ref().unwrap().eval(r),
            _ => Ok(self.rbg(r)? * r.powf(-self.params.b)),
        }
    }

    /// g'(r), from g' = (h' - b h / r) r^{-b} with h = r^b g.
    pub fn deriv(&self, r: f64) -> Result<f64> {
        match &self.family {
            Family::Tabulated => self.table.as_ref().unwrap().deriv(r),
            _ => {
                let b = self.params.b;
                Ok((self.rbg_deriv(r)? - b * self.rbg(r)? / r) * r.powf(-b))
            }
        }
    }

    /// `r g'(r) / g(r)`, written through h = r^b g to stay exact for the
    /// pure-power family.  None where g vanishes.
    pub fn log_deriv(&self, r: f64) -> Result<Option<f64>> {
        let h = self.rbg(r)?;
        if h.abs() < 1e-300 {
            return Ok(None);
        }
        Ok(Some(r * self.rbg_deriv(r)? / h - self.params.b))
    }

    /// Limit of `r^b g` at the origin (used by the shooting Frobenius start).
    pub fn rbg_at_origin(&self) -> f64 {
        match &self.family {
            Family::PurePower => 1.0,
            Family::Rational { a, d, c } => a * d / c,
            Family::PiecewisePlateau { a } => *a,
            Family::Tabulated => self.gi,
        }
    }

    /// Sampling domain for condition checks.
    pub fn check_domain(&self) -> (f64, f64) {
        match &self.family {
            Family::Tabulated => self.table.as_ref().unwrap().domain(),
            _ => (GRID_LO, GRID_HI),
        }
    }

    pub fn tolerance(&self) -> f64 {
        match &self.family {
            Family::Tabulated => TOL_TABULATED,
            _ => TOL_CLOSED_FORM,
        }
    }
}

/// Construct a coefficient, validating family parameters and filling the
/// bounds `gi`, `gs` (closed form where available, sampled otherwise).
pub fn make_coefficient(
    family: Family,
    params: ProblemParams,
    table: Option<(Vec<f64>, Vec<f64>)>,
) -> Result<Coefficient> {
    let (gi, gs, plateau_top, interp) = match &family {
        Family::PurePower => (1.0, 1.0, 0.0, None),
        Family::Rational { a, d, c } => {
            if !(*a > 0.0 && *c > 0.0 && *d >= 0.0 && d <= c) {
                return Err(Error::ParameterDomain(format!(
                    "rational family needs a > 0, 0 <= d <= c, c > 0; got a={a}, d={d}, c={c}"
                )));
            }
            // (r+d)/(r+c) increases from d/c to 1 when d <= c.
            (a * d / c, *a, 0.0, None)
        }
        Family::PiecewisePlateau { a } => {
            if !(*a >= 0.0 && *a < params.p0 + 1.0) {
                return Err(Error::ParameterDomain(format!(
                    "plateau family needs 0 <= a < p0+1 = {}; got a={a}",
                    params.p0 + 1.0
                )));
            }
            let top = (params.p0 / (params.p0 + 1.0 - a)).powf(params.p0);
            (*a, top.max(*a), top, None)
        }
        Family::Tabulated => {
            let (xs, ys) = table.ok_or_else(|| {
                Error::ParameterDomain("tabulated family needs a (r, g) table".into())
            })?;
            if ys.iter().any(|&g| g < 0.0 || !g.is_finite()) {
                return Err(Error::ParameterDomain(
                    "tabulated g values must be finite and nonnegative".into(),
                ));
            }
            let interp = MonotoneCubic::new(xs, ys)?;
            (0.0, 0.0, 0.0, Some(interp))
        }
    };

    let mut coeff = Coefficient {
        family,
        params,
        gi,
        gs,
        plateau_top,
        table: interp,
    };

    if matches!(coeff.family, Family::Tabulated) {
        // Bounds from log-spaced sampling over the table domain.
        let (lo, hi) = coeff.check_domain();
        let mut lo_v = f64::INFINITY;
        let mut hi_v = f64::NEG_INFINITY;
        for r in log_grid(lo, hi, GRID_POINTS) {
            let h = coeff.rbg(r)?;
            lo_v = lo_v.min(h);
            hi_v = hi_v.max(h);
        }
        coeff.gi = lo_v;
        coeff.gs = hi_v;
    }
    Ok(coeff)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let llo = lo.ln();
    let lhi = hi.ln();
    // Clamp so exp/ln roundoff cannot push an endpoint sample outside
    // the interval (the tabulated family rejects out-of-domain queries).
    (0..n).map(move |i| {
        (llo + (lhi - llo) * i as f64 / (n - 1) as f64)
            .exp()
            .clamp(lo, hi)
    })
}

/// Quantitative report on the four structural conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub gi: f64,
    pub gs: f64,
    /// gs^{1/p0}
    pub gs_eff: f64,
    /// gs_eff * (p0 + 1 - gi)
    pub g0: f64,
    /// (p0 - g0)/(p0 + 1 - g0); None when g0 >= p0 + 1
    pub kg: Option<f64>,
    /// kg + inf_r [-r g'/( (p+1) g )], clamped at 0; None when kg undefined
    pub rho_max: Option<f64>,
    pub rho: f64,
    pub scaling_ok: bool,
    pub variational_ok: bool,
    pub rigidity_ok: bool,
    /// None = not applicable (kg undefined)
    pub virial_ok: Option<bool>,
    /// min over the grid of min(r^b g - gi, gs - r^b g)
    pub scaling_margin: f64,
    /// sup over the grid of r^{1+b} |g'(r)|
    pub scaling_grad_sup: f64,
    /// p0 - g0
    pub variational_margin: f64,
    /// inf over the grid of d/dr (r^b g)
    pub rigidity_margin: f64,
    /// inf over the grid of (p+1)(kg - rho) g - r g'
    pub virial_margin: Option<f64>,
    pub tolerance: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_points: usize,
}

impl CoefficientReport {
    pub fn all_ok(&self) -> bool {
        self.scaling_ok && self.variational_ok && self.rigidity_ok && self.virial_ok == Some(true)
    }

    /// Flat key=value listing, one entry per line.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        push("gi", format!("{:.17e}", self.gi));
        push("gs", format!("{:.17e}", self.gs));
        push("gs_eff", format!("{:.17e}", self.gs_eff));
        push("g0", format!("{:.17e}", self.g0));
        push(
            "kg",
            self.kg.map_or("undefined".into(), |v| format!("{v:.17e}")),
        );
        push(
            "rho_max",
            self.rho_max
                .map_or("undefined".into(), |v| format!("{v:.17e}")),
        );
        push("rho", format!("{:.17e}", self.rho));
        push("scaling_ok", self.scaling_ok.to_string());
        push("variational_ok", self.variational_ok.to_string());
        push("rigidity_ok", self.rigidity_ok.to_string());
        push(
            "virial_ok",
            self.virial_ok
                .map_or("not-applicable".into(), |v| v.to_string()),
        );
        push("scaling_margin", format!("{:.17e}", self.scaling_margin));
        push(
            "scaling_grad_sup",
            format!("{:.17e}", self.scaling_grad_sup),
        );
        push(
            "variational_margin",
            format!("{:.17e}", self.variational_margin),
        );
        push("rigidity_margin", format!("{:.17e}", self.rigidity_margin));
        push(
            "virial_margin",
            self.virial_margin
                .map_or("not-applicable".into(), |v| format!("{v:.17e}")),
        );
        push("tolerance", format!("{:.17e}", self.tolerance));
        push("grid_lo", format!("{:.17e}", self.grid_lo));
        push("grid_hi", format!("{:.17e}", self.grid_hi));
        push("grid_points", self.grid_points.to_string());
        out
    }
}

/// Evaluate the scaling, variational, rigidity, and virial conditions on a
/// dense log grid, reporting worst-case margins.
pub fn check_conditions(
    coeff: &Coefficient,
    params: &ProblemParams,
    rho: f64,
) -> Result<CoefficientReport> {
    if rho < 0.0 || !rho.is_finite() {
        return Err(Error::ParameterDomain(format!("rho must be >= 0, got {rho}")));
    }
    let tol = coeff.tolerance();
    let p0 = params.p0;
    let p = params.p;
    let gs_eff = coeff.gs.powf(1.0 / p0);
    let g0 = gs_eff * (p0 + 1.0 - coeff.gi);
    let kg = if g0 < p0 + 1.0 {
        Some((p0 - g0) / (p0 + 1.0 - g0))
    } else {
        None
    };

    let (lo, hi) = coeff.check_domain();
    let mut scaling_margin = f64::INFINITY;
    let mut scaling_grad_sup: f64 = 0.0;
    let mut rigidity_margin = f64::INFINITY;
    let mut virial_margin = f64::INFINITY;
    let mut neg_log_deriv_inf = f64::INFINITY;
    let mut nonneg = true;

    for r in log_grid(lo, hi, GRID_POINTS) {
        let h = coeff.rbg(r)?;
        let hp = coeff.rbg_deriv(r)?;
        let g = coeff.eval(r)?;
        let gp = coeff.deriv(r)?;
        if g < -tol {
            nonneg = false;
        }
        scaling_margin = scaling_margin.min((h - coeff.gi).min(coeff.gs - h));
        scaling_grad_sup = scaling_grad_sup.max(r.powf(1.0 + params.b) * gp.abs());
        rigidity_margin = rigidity_margin.min(hp);
        if let Some(ld) = coeff.log_deriv(r)? {
            neg_log_deriv_inf = neg_log_deriv_inf.min(-ld / (p + 1.0));
            if let Some(kg) = kg {
                // slack of r g' <= (p+1)(kg - rho) g
                virial_margin = virial_margin.min((p + 1.0) * (kg - rho) * g - r * gp);
            }
        }
    }

    let rho_max = kg.map(|kg| {
        if neg_log_deriv_inf.is_finite() {
            (kg + neg_log_deriv_inf).max(0.0)
        } else {
            0.0
        }
    });

    Ok(CoefficientReport {
        gi: coeff.gi,
        gs: coeff.gs,
        gs_eff,
        g0,
        kg,
        rho_max,
        rho,
        scaling_ok: nonneg && scaling_margin >= -tol && scaling_grad_sup.is_finite(),
        variational_ok: g0 <= p0 + tol,
        rigidity_ok: rigidity_margin >= -tol,
        virial_ok: kg.map(|_| virial_margin >= -tol),
        scaling_margin,
        scaling_grad_sup,
        variational_margin: p0 - g0,
        rigidity_margin,
        virial_margin: kg.map(|_| virial_margin),
        tolerance: tol,
        grid_lo: lo,
        grid_hi: hi,
        grid_points: GRID_POINTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pp(b: f64) -> ProblemParams {
        ProblemParams::new(b).unwrap()
    }

    #[test]
    fn pure_power_bounds() {
        let c = make_coefficient(Family::PurePower, pp(1.0), None).unwrap();
        assert_eq!(c.gi, 1.0);
        assert_eq!(c.gs, 1.0);
        assert_relative_eq!(c.eval(2.0).unwrap(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn rational_example_bounds() {
        // a=1, d=0, c=1, b=1/2: g(r) = sqrt(r)/(r+1)... r^b g = r/(r+1)
        let c = make_coefficient(
            Family::Rational {
                a: 1.0,
                d: 0.0,
                c: 1.0,
            },
            pp(0.5),
            None,
        )
        .unwrap();
        assert_eq!(c.gi, 0.0);
        assert_eq!(c.gs, 1.0);
        assert_relative_eq!(
            c.eval(1.0).unwrap(),
            0.5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn plateau_example_bounds() {
        // a=1, b=1 (p0=1): top = (p0/(p0+1-a))^{p0} = 1
        let c = make_coefficient(Family::PiecewisePlateau { a: 1.0 }, pp(1.0), None).unwrap();
        assert_eq!(c.gi, 1.0);
        assert_relative_eq!(c.gs, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn pure_power_conditions() {
        let params = pp(1.0);
        let c = make_coefficient(Family::PurePower, params, None).unwrap();
        let rep = check_conditions(&c, &params, 0.0).unwrap();
        assert!(rep.all_ok());
        assert_eq!(rep.g0, 1.0);
        assert_eq!(rep.kg, Some(0.0));
        assert_eq!(rep.rigidity_margin, 0.0);
        // rho_max = b/(p+1) = 1/4
        assert_relative_eq!(rep.rho_max.unwrap(), 0.25, max_relative = 1e-12);
    }

    #[test]
    fn pure_power_rho_too_large_fails_virial() {
        let params = pp(1.0);
        let c = make_coefficient(Family::PurePower, params, None).unwrap();
        let rep = check_conditions(&c, &params, 0.3).unwrap();
        assert_eq!(rep.virial_ok, Some(false));
    }

    #[test]
    fn rational_example_fails_variational() {
        // gi = 0 forces g0 = gs_eff (p0+1) > p0.
        let params = pp(0.5);
        let c = make_coefficient(
            Family::Rational {
                a: 1.0,
                d: 0.0,
                c: 1.0,
            },
            params,
            None,
        )
        .unwrap();
        let rep = check_conditions(&c, &params, 0.0).unwrap();
        assert!(!rep.variational_ok);
        assert_relative_eq!(rep.g0, params.p0 + 1.0, max_relative = 1e-12);
        assert!(rep.kg.is_none());
        assert_eq!(rep.virial_ok, None);
        // scaling and rigidity still hold for this family
        assert!(rep.scaling_ok);
        assert!(rep.rigidity_ok);
    }

    #[test]
    fn invalid_family_params_rejected() {
        assert!(make_coefficient(
            Family::Rational {
                a: -1.0,
                d: 0.0,
                c: 1.0
            },
            pp(1.0),
            None
        )
        .is_err());
        assert!(make_coefficient(
            Family::Rational {
                a: 1.0,
                d: 2.0,
                c: 1.0
            },
            pp(1.0),
            None
        )
        .is_err());
        assert!(make_coefficient(Family::PiecewisePlateau { a: 2.0 }, pp(1.0), None).is_err());
    }

    #[test]
    fn tabulated_roundtrip_and_extrapolation_error() {
        let params = pp(1.0);
        let xs: Vec<f64> = (0..200).map(|i| 0.01 * (1.0 + i as f64)).collect();
        let ys: Vec<f64> = xs.iter().map(|&r| 1.0 / r).collect();
        let c = make_coefficient(Family::Tabulated, params, Some((xs, ys))).unwrap();
        assert_relative_eq!(c.eval(1.0).unwrap(), 1.0, max_relative = 1e-6);
        assert!(c.eval(100.0).is_err());
        assert!(c.eval(1e-5).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let params = pp(0.7);
        let c = make_coefficient(
            Family::Rational {
                a: 0.8,
                d: 0.5,
                c: 1.0,
            },
            params,
            None,
        )
        .unwrap();
        let r1 = check_conditions(&c, &params, 0.0).unwrap();
        let r2 = check_conditions(&c, &params, 0.0).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn bounds_hold_on_grid() {
        for (fam, b) in [
            (
                Family::Rational {
                    a: 1.5,
                    d: 0.3,
                    c: 2.0,
                },
                0.9,
            ),
            (Family::PiecewisePlateau { a: 0.5 }, 0.6),
        ] {
            let params = pp(b);
            let c = make_coefficient(fam, params, None).unwrap();
            for r in super::log_grid(1e-6, 1e6, 1000) {
                let h = c.rbg(r).unwrap();
                assert!(h >= c.gi - 1e-12 && h <= c.gs + 1e-12, "r={r} h={h}");
            }
        }
    }

    #[test]
    fn rigidity_implies_monotone_rbg() {
        let params = pp(0.8);
        let c = make_coefficient(
            Family::Rational {
                a: 1.0,
                d: 0.2,
                c: 1.0,
            },
            params,
            None,
        )
        .unwrap();
        let rep = check_conditions(&c, &params, 0.0).unwrap();
        assert!(rep.rigidity_ok);
        let rs: Vec<f64> = super::log_grid(1e-6, 1e6, 500).collect();
        for w in rs.windows(2) {
            assert!(c.rbg(w[1]).unwrap() >= c.rbg(w[0]).unwrap() - 1e-12);
        }
    }
}
