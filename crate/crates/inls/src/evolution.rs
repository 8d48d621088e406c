//! Radial split-step evolution of i u_t + Δu + g|u|^{p-1}u = 0.
//!
//! The substitution w = r·u turns the radial Laplacian into the 1D
//! Dirichlet second derivative, so a step is: half nonlinear phase
//! rotation, one linear step diagonal in the discrete sine basis, half
//! nonlinear phase rotation.  Every substep is an isometry of the
//! discrete mass norm.  The linear phase is the unimodular Cayley
//! rotation (1 - iμdt/2)/(1 + iμdt/2): unlike the exact phase e^{-iμdt}
//! it is aliasing-free (the rotation angle stays below π for every
//! mode), which removes step-size resonances between the splitting and
//! the highest grid modes and keeps the energy drift at the expected
//! second-order size.

use std::io::{Read as _, Write as _};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficient::{Coefficient, MonotoneCubic};
use crate::diagnostics::{self, DiagnosticsRecord};
use crate::dst::{dirichlet_eigenvalue, DstPlan};
use crate::error::{Error, Result};
use crate::groundstate::GroundState;
use crate::params::ProblemParams;
use crate::weights::VirialWeight;

/// Uniform radial grid with implicit zeros at the origin and at r_max.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    /// interior node count; node j (0-based) sits at (j+1)·dr
    pub n: usize,
    pub dr: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "grid r_max must be positive, got {r_max}"
            )));
        }
        if n < 2 {
            return Err(Error::ParameterDomain(format!(
                "grid needs at least 2 interior nodes, got {n}"
            )));
        }
        Ok(RadialGrid {
            r_max,
            n,
            dr: r_max / (n as f64 + 1.0),
        })
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.dr
    }
}

/// Complex samples of w(r) = r·u(r) on the interior nodes at time t.
#[derive(Debug, Clone)]
pub struct RadialState {
    pub grid: RadialGrid,
    pub w: Vec<Complex64>,
    pub t: f64,
}

impl RadialState {
    pub fn u(&self, j: usize) -> Complex64 {
        self.w[j] / self.grid.node(j)
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Initial-data profiles for u(0) = φ.
#[derive(Debug, Clone)]
pub enum Profile {
    /// φ(r) = a·exp(-r²/σ²)
    Gaussian { a: f64, sigma: f64 },
    /// φ(r) = c·λ^{1/2}·Q(λr)
    ScaledGroundState { c: f64, lambda: f64 },
    /// φ sampled on a table (zero outside the table domain)
    Tabulated { table: MonotoneCubic },
}

/// Truncation bookkeeping from sampling φ onto the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitialReport {
    /// fraction of the discrete mass beyond r_max/2
    pub tail_mass_fraction: f64,
    /// set when the profile has a slowly decaying tail that the domain
    /// cuts off (the edge taper makes the cut smooth but the fraction is
    /// still reported)
    pub truncation_flagged: bool,
}

/// Smooth edge taper: 1 below 0.5·r_max, C² descent to 0 at r_max.
/// Prevents a spurious Dirichlet wall jump (and its O(|w|²/dr) gradient
/// energy) for profiles whose w = r·φ does not vanish at r_max.
fn edge_taper(r: f64, r_max: f64) -> f64 {
    let x = (r / r_max - 0.5) / 0.5;
    if x <= 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    }
}

/// Sample a profile onto the grid as w_j = taper·r_j·φ(r_j).
///
/// Profiles that should decay within the domain (Gaussian, Tabulated)
/// hard-error when more than 1% of the discrete mass sits beyond
/// r_max/2; the ground-state family has an infinite-mass 1/r tail by
/// construction, so its truncation is reported as a flag instead.
pub fn prepare_initial(
    profile: &Profile,
    grid: &RadialGrid,
    gs: &GroundState,
) -> Result<(RadialState, InitialReport)> {
    let phi = |r: f64| -> Result<f64> {
        Ok(match profile {
            Profile::Gaussian { a, sigma } => {
                if !(*sigma > 0.0) || !a.is_finite() || *a < 0.0 {
                    return Err(Error::ParameterDomain(format!(
                        "gaussian profile needs a >= 0, sigma > 0; got a={a}, sigma={sigma}"
                    )));
                }
                a * (-r * r / (sigma * sigma)).exp()
            }
            Profile::ScaledGroundState { c, lambda } => {
                if !(*c > 0.0 && *lambda > 0.0) {
                    return Err(Error::ParameterDomain(format!(
                        "scaled ground state needs c, lambda > 0; got c={c}, lambda={lambda}"
                    )));
                }
                c * lambda.sqrt() * gs.eval_q(lambda * r)
            }
            Profile::Tabulated { table } => {
                let (lo, hi) = table.domain();
                if r < lo || r > hi {
                    0.0
                } else {
                    table.eval(r)?
                }
            }
        })
    };

    let mut w = Vec::with_capacity(grid.n);
    let mut total = 0.0;
    let mut tail = 0.0;
    for j in 0..grid.n {
        let r = grid.node(j);
        let wj = edge_taper(r, grid.r_max) * r * phi(r)?;
        let m = wj * wj;
        total += m;
        if r > 0.5 * grid.r_max {
            tail += m;
        }
        w.push(Complex64::new(wj, 0.0));
    }
    let tail_mass_fraction = if total > 0.0 { tail / total } else { 0.0 };
    let heavy_tail = tail_mass_fraction > 0.01;
    if heavy_tail && !matches!(profile, Profile::ScaledGroundState { .. }) {
        return Err(Error::TruncationWarning(format!(
            "{:.2}% of the discrete mass lies beyond r_max/2; enlarge the domain",
            100.0 * tail_mass_fraction
        )));
    }
    Ok((
        RadialState {
            grid: grid.clone(),
            w,
            t: 0.0,
        },
        InitialReport {
            tail_mass_fraction,
            truncation_flagged: heavy_tail,
        },
    ))
}

/// Reusable split-step engine for one (grid, coefficient) pair.
pub struct Stepper {
    pub params: ProblemParams,
    pub gvals: Vec<f64>,
    rinv: Vec<f64>,
    plan: DstPlan,
    mu: Vec<f64>,
    cached_dt: f64,
    phase: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: &RadialGrid, coeff: &Coefficient, params: ProblemParams) -> Result<Self> {
        let mut gvals = Vec::with_capacity(grid.n);
        let mut rinv = Vec::with_capacity(grid.n);
        for j in 0..grid.n {
            let r = grid.node(j);
            gvals.push(coeff.eval(r)?);
            rinv.push(1.0 / r);
        }
        let mu = (1..=grid.n)
            .map(|k| dirichlet_eigenvalue(k, grid.n, grid.dr))
            .collect();
        Ok(Stepper {
            params,
            gvals,
            rinv,
            plan: DstPlan::new(grid.n),
            mu,
            cached_dt: f64::NAN,
            phase: vec![Complex64::ZERO; grid.n],
        })
    }

    fn half_nonlinear(&self, state: &mut RadialState, dt: f64) {
        let pm1 = self.params.p - 1.0;
        for (j, wj) in state.w.iter_mut().enumerate() {
            let amp = wj.norm() * self.rinv[j];
            if amp > 0.0 {
                let theta = 0.5 * dt * self.gvals[j] * amp.powf(pm1);
                *wj *= Complex64::from_polar(1.0, theta);
            }
        }
    }

    /// One Strang step N(dt/2) L(dt) N(dt/2).
    pub fn step(&mut self, state: &mut RadialState, dt: f64) -> Result<()> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "step size must be positive, got {dt}"
            )));
        }
        if dt != self.cached_dt {
            for (ph, &mu) in self.phase.iter_mut().zip(self.mu.iter()) {
                // Cayley rotation (1 - ix)/(1 + ix), x = μ dt/2,
                // renormalized to unit modulus so no systematic mass
                // bias accumulates over long runs.
                let x = 0.5 * mu * dt;
                let d = 1.0 + x * x;
                let raw = Complex64::new((1.0 - x * x) / d, -2.0 * x / d);
                *ph = raw / raw.norm();
            }
            self.cached_dt = dt;
        }
        self.half_nonlinear(state, dt);
        self.plan.transform_raw(&mut state.w);
        for (wj, ph) in state.w.iter_mut().zip(self.phase.iter()) {
            *wj *= ph;
        }
        self.plan.transform_raw(&mut state.w);
        let norm = self.plan.raw_round_trip_factor();
        for wj in state.w.iter_mut() {
            *wj /= norm;
        }
        self.half_nonlinear(state, dt);
        state.t += dt;
        if !state.is_finite() {
            return Err(Error::NumericFailure(format!(
                "non-finite field after step at t = {}",
                state.t
            )));
        }
        Ok(())
    }

    /// max_j g(r_j)·|u_j|^{p-1}, the nonlinear phase-rotation rate.
    pub fn max_rotation_rate(&self, state: &RadialState) -> f64 {
        let pm1 = self.params.p - 1.0;
        state
            .w
            .iter()
            .enumerate()
            .map(|(j, wj)| self.gvals[j] * (wj.norm() * self.rinv[j]).powf(pm1))
            .fold(0.0, f64::max)
    }
}

/// Single free-standing step (API convenience; loops should reuse a
/// [`Stepper`]).
pub fn step(
    state: &RadialState,
    coeff: &Coefficient,
    params: ProblemParams,
    dt: f64,
) -> Result<RadialState> {
    let mut s = state.clone();
    Stepper::new(&state.grid, coeff, params)?.step(&mut s, dt)?;
    Ok(s)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveControls {
    /// base time step
    pub dt0: f64,
    pub t_end: f64,
    /// stop when grad_norm_sq reaches this multiple of its initial value
    pub blowup_grad_factor: f64,
    /// stop when the limited step falls below this
    pub dt_floor: f64,
    /// record diagnostics every this many steps
    pub record_every: usize,
}

impl EvolveControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt0 > self.dt_floor && self.dt_floor > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "need dt0 > dt_floor > 0, got dt0={}, dt_floor={}",
                self.dt0, self.dt_floor
            )));
        }
        if !(self.blowup_grad_factor > 1.0) {
            return Err(Error::ParameterDomain(format!(
                "blowup_grad_factor must exceed 1, got {}",
                self.blowup_grad_factor
            )));
        }
        if !(self.t_end >= 0.0) || self.record_every == 0 {
            return Err(Error::ParameterDomain(
                "t_end must be >= 0 and record_every >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    /// reached t_end
    Completed,
    /// gradient norm reached blowup_grad_factor × initial
    BlowupStop,
    /// adaptive step collapsed below dt_floor
    ResolutionStop,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub stop_reason: StopReason,
    pub stop_time: f64,
    /// outer-edge amplitude grew past the reflection threshold at some
    /// record time
    pub boundary_reflection: bool,
}

/// Max |u| over the outermost 5% of nodes.
fn outer_amplitude(state: &RadialState) -> f64 {
    let n = state.grid.n;
    let start = n - (n / 20).max(1);
    (start..n)
        .map(|j| state.w[j].norm() / state.grid.node(j))
        .fold(0.0, f64::max)
}

fn peak_amplitude(state: &RadialState) -> f64 {
    (0..state.grid.n)
        .map(|j| state.w[j].norm() / state.grid.node(j))
        .fold(0.0, f64::max)
}

/// Time loop with the phase-rotation step limiter, periodic diagnostics,
/// and the three stop conditions.  Reflection monitoring compares the
/// outer-edge amplitude |u| against its initial value: growth beyond
/// 1e-4 of the initial peak |u| flags the run (the run continues).
pub fn evolve(
    state: &mut RadialState,
    coeff: &Coefficient,
    params: ProblemParams,
    controls: &EvolveControls,
    weight: &VirialWeight,
    mut on_record: impl FnMut(&DiagnosticsRecord),
) -> Result<EvolveOutcome> {
    controls.validate()?;
    let mut stepper = Stepper::new(&state.grid, coeff, params)?;
    let grad0 = diagnostics::grad_norm_sq(state);
    let outer0 = outer_amplitude(state);
    let peak0 = peak_amplitude(state);
    let mut boundary_reflection = false;
    let mut records = Vec::new();
    let mut s_acc = 0.0;

    let mut push_record = |state: &RadialState,
                           s_inc: f64,
                           records: &mut Vec<DiagnosticsRecord>,
                           boundary_reflection: &mut bool| {
        let rec = diagnostics::record(state, coeff, weight, params, s_inc);
        if outer_amplitude(state) - outer0 > 1e-4 * peak0 {
            *boundary_reflection = true;
        }
        on_record(&rec);
        records.push(rec);
    };

    push_record(state, 0.0, &mut records, &mut boundary_reflection);

    let mut steps_since_record = 0usize;
    let stop_reason = loop {
        if state.t >= controls.t_end - 1e-14 * controls.t_end.max(1.0) {
            break StopReason::Completed;
        }
        let rate = stepper.max_rotation_rate(state);
        let dt = (controls.dt0 / (1.0 + rate * controls.dt0))
            .min(controls.dt0)
            .min(controls.t_end - state.t);
        if dt < controls.dt_floor {
            break StopReason::ResolutionStop;
        }
        stepper.step(state, dt)?;
        s_acc += dt * diagnostics::scatter_density(state);
        steps_since_record += 1;
        if steps_since_record >= controls.record_every {
            push_record(state, s_acc, &mut records, &mut boundary_reflection);
            s_acc = 0.0;
            steps_since_record = 0;
        }
        if diagnostics::grad_norm_sq(state) >= controls.blowup_grad_factor * grad0 && grad0 > 0.0 {
            break StopReason::BlowupStop;
        }
    };
    if steps_since_record > 0 {
        push_record(state, s_acc, &mut records, &mut boundary_reflection);
    }
    Ok(EvolveOutcome {
        records,
        stop_reason,
        stop_time: state.t,
        boundary_reflection,
    })
}

const CKPT_MAGIC: &[u8; 8] = b"INLSRAD\0";
const CKPT_VERSION: u32 = 1;

/// Write a binary checkpoint: 16-byte magic/version header, grid
/// metadata, then the complex samples, all little-endian.
pub fn write_checkpoint(state: &RadialState, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(CKPT_MAGIC)?;
    f.write_all(&CKPT_VERSION.to_le_bytes())?;
    f.write_all(&[0u8; 4])?;
    f.write_all(&state.grid.r_max.to_le_bytes())?;
    f.write_all(&(state.grid.n as u64).to_le_bytes())?;
    f.write_all(&state.t.to_le_bytes())?;
    for z in &state.w {
        f.write_all(&z.re.to_le_bytes())?;
        f.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<RadialState> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut header = [0u8; 16];
    f.read_exact(&mut header)?;
    if &header[..8] != CKPT_MAGIC {
        return Err(Error::Config(format!(
            "{} is not a checkpoint file",
            path.display()
        )));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != CKPT_VERSION {
        return Err(Error::Config(format!(
            "unsupported checkpoint version {version}"
        )));
    }
    let mut buf8 = [0u8; 8];
    f.read_exact(&mut buf8)?;
    let r_max = f64::from_le_bytes(buf8);
    f.read_exact(&mut buf8)?;
    let n = u64::from_le_bytes(buf8) as usize;
    f.read_exact(&mut buf8)?;
    let t = f64::from_le_bytes(buf8);
    let grid = RadialGrid::new(r_max, n)?;
    let mut w = Vec::with_capacity(n);
    for _ in 0..n {
        f.read_exact(&mut buf8)?;
        let re = f64::from_le_bytes(buf8);
        f.read_exact(&mut buf8)?;
        let im = f64::from_le_bytes(buf8);
        w.push(Complex64::new(re, im));
    }
    Ok(RadialState { grid, w, t })
}
