//! Conserved and monitored functionals of a radial state: mass, energy,
//! gradient and L^{p+1} norms, virial quantities with their identity
//! right-hand sides, the Strauss decay ratio, and the scattering-size
//! proxy.  All integrals are 4π·dr·Σ of radial integrands on the grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::evolution::RadialState;
use crate::params::ProblemParams;
use crate::weights::VirialWeight;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub grad_norm_sq: f64,
    pub potential: f64,
    pub lp1_norm: f64,
    pub virial_v: f64,
    pub z_r: f64,
    pub z_r_prime: f64,
    pub lvirial_rhs: f64,
    pub strauss_ratio: f64,
    pub s_increment: f64,
}

/// ∫|u|² dx = 4π·dr·Σ|w_j|²
pub fn mass(state: &RadialState) -> f64 {
    FOUR_PI * state.grid.dr * state.w.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// ∫|∇u|² dx through the Dirichlet difference form
/// 4π Σ_{j=0..n} |w_{j+1}-w_j|²/dr (w_0 = w_{n+1} = 0).
///
/// This is the quadratic form of the discrete Laplacian the solver
/// diagonalizes, so the linear flow conserves it exactly; in the
/// continuum it equals ∫|w_r - w/r|² dr = ∫|w_r|² dr after integrating
/// the cross term by parts.
pub fn grad_norm_sq(state: &RadialState) -> f64 {
    let dr = state.grid.dr;
    let n = state.grid.n;
    let mut acc = state.w[0].norm_sqr();
    for j in 0..n - 1 {
        acc += (state.w[j + 1] - state.w[j]).norm_sqr();
    }
    acc += state.w[n - 1].norm_sqr();
    FOUR_PI * acc / dr
}

/// ∫ g |u|^{p+1} dx
pub fn potential(state: &RadialState, coeff: &Coefficient, params: &ProblemParams) -> f64 {
    let dr = state.grid.dr;
    let mut acc = 0.0;
    for (j, wj) in state.w.iter().enumerate() {
        let r = state.grid.node(j);
        let g = coeff.eval(r).unwrap_or(f64::NAN);
        let u = wj.norm() / r;
        acc += g * u.powf(params.p + 1.0) * r * r;
    }
    FOUR_PI * dr * acc
}

/// ∫ |u|^{10} dx, the scattering-size density (its time integral is the
/// L^{10}_{t,x} proxy).
pub fn scatter_density(state: &RadialState) -> f64 {
    let dr = state.grid.dr;
    let mut acc = 0.0;
    for (j, wj) in state.w.iter().enumerate() {
        let r = state.grid.node(j);
        let u2 = wj.norm_sqr() / (r * r);
        acc += u2 * u2 * u2 * u2 * u2 * r * r;
    }
    FOUR_PI * dr * acc
}

/// Centered difference w_r - w/r at node j (equals r·u_r).
fn radial_derivative_term(state: &RadialState, j: usize) -> Complex64 {
    let n = state.grid.n;
    let dr = state.grid.dr;
    let left = if j == 0 { Complex64::ZERO } else { state.w[j - 1] };
    let right = if j == n - 1 { Complex64::ZERO } else { state.w[j + 1] };
    (right - left) / (2.0 * dr) - state.w[j] / state.grid.node(j)
}

/// Assemble the full record.  `s_increment` is the accumulated
/// ∫∫|u|^{10} over the window since the previous record.
pub fn record(
    state: &RadialState,
    coeff: &Coefficient,
    weight: &VirialWeight,
    params: ProblemParams,
    s_increment: f64,
) -> DiagnosticsRecord {
    let dr = state.grid.dr;
    let m = mass(state);
    let grad = grad_norm_sq(state);
    let pot = potential(state, coeff, &params);
    let mut lp1 = 0.0;
    let mut virial_v = 0.0;
    let mut z_r = 0.0;
    let mut strauss_sup: f64 = 0.0;
    for (j, wj) in state.w.iter().enumerate() {
        let r = state.grid.node(j);
        let u = wj.norm() / r;
        lp1 += u.powf(params.p + 1.0) * r * r;
        virial_v += r * r * wj.norm_sqr();
        z_r += weight.weight(r) * wj.norm_sqr();
        strauss_sup = strauss_sup.max(r.sqrt() * u);
    }
    lp1 = (FOUR_PI * dr * lp1).powf(1.0 / (params.p + 1.0));
    virial_v *= FOUR_PI * dr;
    z_r *= FOUR_PI * dr;
    let denom = m.powf(0.25) * grad.powf(0.25);
    let strauss_ratio = if denom > 0.0 { strauss_sup / denom } else { 0.0 };
    DiagnosticsRecord {
        t: state.t,
        mass: m,
        energy: 0.5 * grad - pot / (params.p + 1.0),
        grad_norm_sq: grad,
        potential: pot,
        lp1_norm: lp1,
        virial_v,
        z_r,
        z_r_prime: z_prime(state, weight),
        lvirial_rhs: lvirial_rhs(state, coeff, weight, &params),
        strauss_ratio,
        s_increment,
    }
}

/// d/dt of the weighted mass: 2 Im ∫ ∇b·∇u ū dx
/// = 8π·dr·Σ b'(r_j)·Im[(w_r - w/r)_j · conj(w_j)].
pub fn z_prime(state: &RadialState, weight: &VirialWeight) -> f64 {
    let dr = state.grid.dr;
    let mut acc = 0.0;
    for (j, wj) in state.w.iter().enumerate() {
        let r = state.grid.node(j);
        let d = radial_derivative_term(state, j);
        acc += weight.deriv(1, r) * (d * wj.conj()).im;
    }
    2.0 * FOUR_PI * dr * acc
}

/// Right side of the second-derivative virial identity for a radial
/// weight b:
///   4∫b''|u_r|² - ((2p-2)/(p+1))∫(Δb) g|u|^{p+1}
///   + (4/(p+1))∫ b' g' |u|^{p+1} - ∫(Δ²b)|u|².
pub fn lvirial_rhs(
    state: &RadialState,
    coeff: &Coefficient,
    weight: &VirialWeight,
    params: &ProblemParams,
) -> f64 {
    let dr = state.grid.dr;
    let p = params.p;
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    let mut t3 = 0.0;
    let mut t4 = 0.0;
    for (j, wj) in state.w.iter().enumerate() {
        let r = state.grid.node(j);
        let d = radial_derivative_term(state, j);
        let u = wj.norm() / r;
        let up1 = u.powf(p + 1.0) * r * r;
        let g = coeff.eval(r).unwrap_or(f64::NAN);
        let gp = coeff.deriv(r).unwrap_or(f64::NAN);
        t1 += weight.deriv(2, r) * d.norm_sqr();
        t2 += weight.laplacian(r) * g * up1;
        t3 += weight.deriv(1, r) * gp * up1;
        t4 += weight.bilaplacian(r) * wj.norm_sqr();
    }
    FOUR_PI
        * dr
        * (4.0 * t1 - (2.0 * p - 2.0) / (p + 1.0) * t2 + 4.0 / (p + 1.0) * t3 - t4)
}

pub const CSV_HEADER: &str = "t,mass,energy,grad_norm_sq,potential,lp1_norm,virial_V,z_r,z_r_prime,lvirial_rhs,strauss_ratio,s_increment";

impl DiagnosticsRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.t,
            self.mass,
            self.energy,
            self.grad_norm_sq,
            self.potential,
            self.lp1_norm,
            self.virial_v,
            self.z_r,
            self.z_r_prime,
            self.lvirial_rhs,
            self.strauss_ratio,
            self.s_increment
        )
    }

    pub fn from_csv_row(row: &str) -> Result<DiagnosticsRecord> {
        let vals: Vec<f64> = row
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad CSV field {s:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 12 {
            return Err(Error::Config(format!(
                "expected 12 CSV fields, got {}",
                vals.len()
            )));
        }
        Ok(DiagnosticsRecord {
            t: vals[0],
            mass: vals[1],
            energy: vals[2],
            grad_norm_sq: vals[3],
            potential: vals[4],
            lp1_norm: vals[5],
            virial_v: vals[6],
            z_r: vals[7],
            z_r_prime: vals[8],
            lvirial_rhs: vals[9],
            strauss_ratio: vals[10],
            s_increment: vals[11],
        })
    }
}

/// Write a full series with the mandatory header row.
pub fn write_csv(records: &[DiagnosticsRecord], path: &std::path::Path) -> Result<()> {
    use std::io::Write as _;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{CSV_HEADER}")?;
    for r in records {
        writeln!(f, "{}", r.to_csv_row())?;
    }
    Ok(())
}

pub fn read_csv(path: &std::path::Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = std::fs::read_to_string(path)?;
    // Leading `#` lines carry provenance (config hash); skip them.
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::Config(format!(
                "{} missing the diagnostics header",
                path.display()
            )))
        }
    }
    lines.map(DiagnosticsRecord::from_csv_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::{make_coefficient, Family};
    use crate::evolution::{prepare_initial, Profile, RadialGrid};
    use crate::groundstate::build_ground_state;
    use crate::weights::{VirialWeight, WeightKind};
    use approx::assert_relative_eq;

    fn pp(b: f64) -> ProblemParams {
        ProblemParams::new(b).unwrap()
    }

    fn setup(a: f64, sigma: f64, r_max: f64, n: usize) -> RadialState {
        let gs = build_ground_state(pp(1.0)).unwrap();
        let grid = RadialGrid::new(r_max, n).unwrap();
        prepare_initial(&Profile::Gaussian { a, sigma }, &grid, &gs)
            .unwrap()
            .0
    }

    #[test]
    fn zero_state_record_is_all_zero() {
        let params = pp(1.0);
        let coeff = make_coefficient(Family::PurePower, params, None).unwrap();
        let weight = VirialWeight::new(WeightKind::Unbounded, 1.0).unwrap();
        let state = setup(0.0, 1.0, 10.0, 128);
        let rec = record(&state, &coeff, &weight, params, 0.0);
        assert_eq!(rec.mass, 0.0);
        assert_eq!(rec.energy, 0.0);
        assert_eq!(rec.grad_norm_sq, 0.0);
        assert_eq!(rec.z_r_prime, 0.0);
        assert_eq!(rec.lvirial_rhs, 0.0);
        assert_eq!(rec.strauss_ratio, 0.0);
    }

    #[test]
    fn ground_state_energy_on_fine_grid() {
        let params = pp(1.0);
        let coeff = make_coefficient(Family::PurePower, params, None).unwrap();
        let weight = VirialWeight::new(WeightKind::Unbounded, 1.0).unwrap();
        let gs = build_ground_state(params).unwrap();
        let grid = RadialGrid::new(4000.0, 1 << 19).unwrap();
        let (state, _) = prepare_initial(
            &Profile::ScaledGroundState { c: 1.0, lambda: 1.0 },
            &grid,
            &gs,
        )
        .unwrap();
        let rec = record(&state, &coeff, &weight, params, 0.0);
        // 8π/3 and 2π/3 within grid + taper truncation error.
        assert_relative_eq!(rec.grad_norm_sq, gs.grad_norm_sq, max_relative = 1e-2);
        assert_relative_eq!(rec.energy, gs.threshold_energy, max_relative = 2e-2);
    }

    #[test]
    fn gaussian_potential_moment_oracle() {
        // ∫ r^{-1} |φ|⁴ dx with φ = A e^{-r²}: 4π A⁴ ∫ r e^{-4r²} dr = π A⁴ / 2.
        let params = pp(1.0);
        let coeff = make_coefficient(Family::PurePower, params, None).unwrap();
        let state = setup(0.5, 1.0, 40.0, 8192);
        let pot = potential(&state, &coeff, &params);
        let exact = std::f64::consts::PI * 0.5f64.powi(4) / 2.0;
        assert_relative_eq!(pot, exact, max_relative = 1e-4);
    }

    #[test]
    fn real_state_has_zero_z_prime() {
        let weight = VirialWeight::new(WeightKind::QuadraticCutoff, 5.0).unwrap();
        let state = setup(0.5, 1.0, 20.0, 1024);
        assert_eq!(z_prime(&state, &weight), 0.0);
    }

    #[test]
    fn pure_power_lvirial_reduces_to_two_terms() {
        // For b(x)=|x|² and pure-power g: rhs = 8∫|u_r|² - 8∫g|u|^{p+1}
        // at b=1 (p=3), since r·g' = -g makes the third term
        // -(4b/(p+1))∫g|u|^{p+1} and the coefficients combine.
        let params = pp(1.0);
        let coeff = make_coefficient(Family::PurePower, params, None).unwrap();
        let weight = VirialWeight::new(WeightKind::Unbounded, 1.0).unwrap();
        let state = setup(0.5, 1.0, 40.0, 4096);
        let rhs = lvirial_rhs(&state, &coeff, &weight, &params);
        // Independent assembly from the same discrete sums.
        let dr = state.grid.dr;
        let mut grad_c = 0.0;
        for j in 0..state.grid.n {
            grad_c += radial_derivative_term(&state, j).norm_sqr();
        }
        grad_c *= FOUR_PI * dr;
        let pot = potential(&state, &coeff, &params);
        assert_relative_eq!(rhs, 8.0 * grad_c - 8.0 * pot, max_relative = 1e-12);
    }

    #[test]
    fn strauss_ratio_bounded_and_scaleless() {
        let params = pp(1.0);
        let coeff = make_coefficient(Family::PurePower, params, None).unwrap();
        let weight = VirialWeight::new(WeightKind::Unbounded, 1.0).unwrap();
        for a in [0.2, 0.5, 1.0] {
            let state = setup(a, 1.0, 40.0, 4096);
            let rec = record(&state, &coeff, &weight, params, 0.0);
            assert!(rec.strauss_ratio > 0.0 && rec.strauss_ratio < 10.0);
        }
        // Amplitude scaling leaves the ratio unchanged.
        let r1 = record(&setup(0.3, 1.0, 40.0, 4096), &coeff, &weight, params, 0.0);
        let r2 = record(&setup(0.6, 1.0, 40.0, 4096), &coeff, &weight, params, 0.0);
        assert_relative_eq!(r1.strauss_ratio, r2.strauss_ratio, max_relative = 1e-10);
    }

    #[test]
    fn csv_roundtrip() {
        let params = pp(1.0);
        let coeff = make_coefficient(Family::PurePower, params, None).unwrap();
        let weight = VirialWeight::new(WeightKind::Unbounded, 1.0).unwrap();
        let recs = vec![
            record(&setup(0.5, 1.0, 20.0, 512), &coeff, &weight, params, 0.0),
            record(&setup(0.2, 2.0, 20.0, 512), &coeff, &weight, params, 1e-3),
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.csv");
        write_csv(&recs, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in recs.iter().zip(back.iter()) {
            assert_eq!(a.mass, b.mass);
            assert_eq!(a.lvirial_rhs, b.lvirial_rhs);
            assert_eq!(a.s_increment, b.s_increment);
        }
    }

    #[test]
    fn s_increment_additivity_is_plain_summation() {
        // The proxy accumulates ∫|u|^{10} over windows; disjoint windows
        // add.  Here: the density of a fixed state times two windows.
        let state = setup(0.5, 1.0, 20.0, 512);
        let d = scatter_density(&state);
        assert!(d > 0.0);
        assert_relative_eq!(0.3 * d + 0.7 * d, 1.0 * d, max_relative = 1e-15);
    }
}
