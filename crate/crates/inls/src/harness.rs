//! Scenario execution: configuration → coefficient → ground state →
//! initial data → classification → evolution → verdict, plus parameter
//! sweeps and the built-in verification suite.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::classifier::{self, RegionAssessment, Verdict, VerdictKind};
use crate::coefficient::{check_conditions, make_coefficient, CoefficientReport, Family};
use crate::config::RunConfig;
use crate::diagnostics::{DiagnosticsRecord, CSV_HEADER};
use crate::error::{Error, Result};
use crate::evolution::{
    evolve, prepare_initial, EvolveControls, InitialReport, Profile, RadialGrid, StopReason,
};
use crate::groundstate::{build_ground_state, GroundState};
use crate::params::ProblemParams;
use crate::weights::{VirialWeight, WeightKind};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub b: f64,
    pub grad_norm_sq: f64,
    pub potential_integral: f64,
    pub threshold_energy: f64,
    pub best_constant: f64,
}

impl From<&GroundState> for GroundStateSummary {
    fn from(gs: &GroundState) -> Self {
        GroundStateSummary {
            b: gs.params.b,
            grad_norm_sq: gs.grad_norm_sq,
            potential_integral: gs.potential_integral,
            threshold_energy: gs.threshold_energy,
            best_constant: gs.best_constant,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub unix_time: u64,
    pub config_hash: String,
}

/// Outcome of the doubled-resolution companion run requested by
/// `--refine`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementSummary {
    pub n: usize,
    pub dt0: f64,
    pub verdict: VerdictKind,
    pub stop_reason: StopReason,
    pub stop_time: f64,
    /// companion verdict agrees with the base run
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub config_hash: String,
    pub coefficient_report: CoefficientReport,
    pub ground_state: GroundStateSummary,
    pub initial: InitialReport,
    pub assessment: RegionAssessment,
    pub records: Vec<DiagnosticsRecord>,
    pub stop_reason: StopReason,
    pub stop_time: f64,
    pub boundary_reflection: bool,
    pub verdict: Verdict,
    pub refined: Option<RefinementSummary>,
    pub provenance: Provenance,
}

pub fn parse_family(cfg: &RunConfig) -> Result<Family> {
    let c = &cfg.coefficient;
    match c.family.as_str() {
        "pure-power" => Ok(Family::PurePower),
        "rational" => Ok(Family::Rational {
            a: c.a,
            d: c.d,
            c: c.c,
        }),
        "piecewise-plateau" => Ok(Family::PiecewisePlateau { a: c.a }),
        other => Err(Error::Config(format!(
            "[coefficient] family: unknown family `{other}` \
             (expected pure-power, rational, or piecewise-plateau)"
        ))),
    }
}

pub fn parse_profile(cfg: &RunConfig) -> Result<Profile> {
    let i = &cfg.initial;
    match i.profile.as_str() {
        "gaussian" => Ok(Profile::Gaussian {
            a: i.amplitude,
            sigma: i.sigma,
        }),
        "scaled-ground-state" => Ok(Profile::ScaledGroundState {
            c: i.c,
            lambda: i.lambda,
        }),
        other => Err(Error::Config(format!(
            "[initial] profile: unknown profile `{other}` \
             (expected gaussian or scaled-ground-state)"
        ))),
    }
}

pub fn parse_weight(cfg: &RunConfig) -> Result<VirialWeight> {
    let kind = match cfg.controls.weight.as_str() {
        "unbounded" => WeightKind::Unbounded,
        "quadratic-cutoff" => WeightKind::QuadraticCutoff,
        "smooth-beta" => WeightKind::SmoothBeta,
        other => {
            return Err(Error::Config(format!(
                "[controls] weight: unknown weight `{other}` \
                 (expected unbounded, quadratic-cutoff, or smooth-beta)"
            )))
        }
    };
    VirialWeight::new(kind, cfg.controls.weight_scale)
}

fn controls_of(cfg: &RunConfig) -> EvolveControls {
    EvolveControls {
        dt0: cfg.controls.dt0,
        t_end: cfg.controls.t_end,
        blowup_grad_factor: cfg.controls.blowup_grad_factor,
        dt_floor: cfg.controls.dt_floor,
        record_every: cfg.controls.record_every,
    }
}

struct RunCore {
    report: CoefficientReport,
    gs: GroundState,
    initial: InitialReport,
    assessment: RegionAssessment,
    records: Vec<DiagnosticsRecord>,
    stop_reason: StopReason,
    stop_time: f64,
    boundary_reflection: bool,
    verdict: Verdict,
    final_state: crate::evolution::RadialState,
}

fn run_core(cfg: &RunConfig) -> Result<RunCore> {
    let params = ProblemParams::new(cfg.params.b).map_err(|e| e.in_stage("params"))?;
    let family = parse_family(cfg).map_err(|e| e.in_stage("coefficient"))?;
    let coeff =
        make_coefficient(family, params, None).map_err(|e| e.in_stage("coefficient"))?;
    let report =
        check_conditions(&coeff, &params, 0.0).map_err(|e| e.in_stage("coefficient"))?;
    let gs = build_ground_state(params).map_err(|e| e.in_stage("groundstate"))?;
    let grid =
        RadialGrid::new(cfg.grid.r_max, cfg.grid.n).map_err(|e| e.in_stage("grid"))?;
    let profile = parse_profile(cfg).map_err(|e| e.in_stage("initial"))?;
    let (mut state, initial) =
        prepare_initial(&profile, &grid, &gs).map_err(|e| e.in_stage("initial"))?;
    let assessment = classifier::classify_initial(&state, &coeff, &gs, &report, &params);
    let weight = parse_weight(cfg).map_err(|e| e.in_stage("weights"))?;
    let controls = controls_of(cfg);
    controls.validate().map_err(|e| e.in_stage("controls"))?;
    let outcome = evolve(&mut state, &coeff, params, &controls, &weight, |_| {})
        .map_err(|e| e.in_stage("evolution"))?;
    let verdict = classifier::verdict(
        &assessment,
        &gs,
        &report,
        &outcome.records,
        outcome.stop_reason,
        outcome.boundary_reflection,
    );
    Ok(RunCore {
        report,
        gs,
        initial,
        assessment,
        records: outcome.records,
        stop_reason: outcome.stop_reason,
        stop_time: outcome.stop_time,
        boundary_reflection: outcome.boundary_reflection,
        verdict,
        final_state: state,
    })
}

/// Doubled-resolution companion: twice the spatial modes (keeping n+1 a
/// power of two when it starts as one) at half the base step.
fn refined_config(cfg: &RunConfig) -> RunConfig {
    let mut fine = cfg.clone();
    fine.grid.n = 2 * cfg.grid.n + 1;
    fine.controls.dt0 = cfg.controls.dt0 / 2.0;
    fine.controls.record_every = cfg.controls.record_every.saturating_mul(2);
    fine
}

/// Execute one configured scenario end to end; persist the diagnostics
/// series and verdict when `out_dir` is given, and run the
/// doubled-resolution companion when `refine` is set.
pub fn run_scenario(
    cfg: &RunConfig,
    out_dir: Option<&Path>,
    refine: bool,
) -> Result<RunRecord> {
    let core = run_core(cfg)?;
    let refined = if refine {
        let fine_cfg = refined_config(cfg);
        let fine = run_core(&fine_cfg)?;
        Some(RefinementSummary {
            n: fine_cfg.grid.n,
            dt0: fine_cfg.controls.dt0,
            agrees: fine.verdict.kind == core.verdict.kind,
            verdict: fine.verdict.kind,
            stop_reason: fine.stop_reason,
            stop_time: fine.stop_time,
        })
    } else {
        None
    };
    let config_hash = cfg.hash();
    let record = RunRecord {
        config: cfg.clone(),
        config_hash: config_hash.clone(),
        coefficient_report: core.report,
        ground_state: GroundStateSummary::from(&core.gs),
        initial: core.initial,
        assessment: core.assessment,
        records: core.records,
        stop_reason: core.stop_reason,
        stop_time: core.stop_time,
        boundary_reflection: core.boundary_reflection,
        verdict: core.verdict,
        refined,
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            unix_time: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config_hash,
        },
    };
    if let Some(dir) = out_dir {
        persist(&record, &core.final_state, dir)?;
    }
    Ok(record)
}

/// Re-derive the verdict from the stored series; RunRecords are
/// self-contained, so this must reproduce the archived verdict.
pub fn reverdict(record: &RunRecord) -> Result<Verdict> {
    let params = ProblemParams::new(record.config.params.b)?;
    let gs = build_ground_state(params)?;
    Ok(classifier::verdict(
        &record.assessment,
        &gs,
        &record.coefficient_report,
        &record.records,
        record.stop_reason,
        record.boundary_reflection,
    ))
}

fn run_stem(record: &RunRecord) -> String {
    format!("run-{}", &record.config_hash[..12])
}

/// Verdict document: region, verdict, stop reason, margins, evidence,
/// plus provenance.
pub fn verdict_json(record: &RunRecord) -> serde_json::Value {
    serde_json::json!({
        "region": record.assessment.region,
        "verdict": record.verdict.kind,
        "stop_reason": record.stop_reason,
        "stop_time": record.stop_time,
        "margins": {
            "energy": record.assessment.energy_margin,
            "kinetic": record.assessment.kinetic_margin,
        },
        "evidence": record.verdict.evidence,
        "boundary_reflection": record.boundary_reflection,
        "truncation_flagged": record.initial.truncation_flagged,
        "refined": record.refined,
        "config_hash": record.config_hash,
        "provenance": record.provenance,
    })
}

fn persist(
    record: &RunRecord,
    final_state: &crate::evolution::RadialState,
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let stem = run_stem(record);
    let csv_path = dir.join(format!("{stem}-series.csv"));
    let mut f = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
    writeln!(f, "# config_hash = {}", record.config_hash)?;
    writeln!(f, "{CSV_HEADER}")?;
    for r in &record.records {
        writeln!(f, "{}", r.to_csv_row())?;
    }
    let json_path = dir.join(format!("{stem}-verdict.json"));
    let doc = serde_json::to_string_pretty(&verdict_json(record))?;
    std::fs::write(json_path, doc)?;
    crate::evolution::write_checkpoint(
        final_state,
        &dir.join(format!("{stem}-final.ckpt")),
    )?;
    Ok(())
}

/// One sweep point: the parameter triple with either a completed
/// assessment or the error that stopped it.
fn sweep_row(cfg: &RunConfig, amplitude: f64, sigma: f64, lambda: f64) -> String {
    let mut point = cfg.clone();
    point.sweep = None;
    if point.initial.profile == "scaled-ground-state" {
        point.initial.c = amplitude;
    } else {
        point.initial.amplitude = amplitude;
    }
    point.initial.sigma = sigma;
    point.initial.lambda = lambda;
    match run_scenario(&point, None, false) {
        Ok(rec) => format!(
            "{amplitude},{sigma},{lambda},{:.16e},{:.16e},{:?},{:?}",
            rec.assessment.energy_phi,
            rec.assessment.kinetic_phi,
            rec.assessment.region,
            rec.verdict.kind
        ),
        Err(_) => format!("{amplitude},{sigma},{lambda},nan,nan,Error,Error"),
    }
}

pub const SWEEP_HEADER: &str =
    "amplitude,sigma,lambda,energy_phi,kinetic_phi,region,verdict";

/// Cross product of the sweep lists, runs in parallel, rows in
/// deterministic (lexicographic) parameter order.  Per-run failures
/// become rows with verdict=Error; the sweep continues.
pub fn sweep(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<String> {
    let block = cfg
        .sweep
        .as_ref()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::Config("sweep requires a non-empty [sweep] section".into()))?;
    let one = |list: &[f64], fallback: f64| -> Vec<f64> {
        if list.is_empty() {
            vec![fallback]
        } else {
            list.to_vec()
        }
    };
    let amplitudes = one(&block.amplitudes, cfg.initial.c);
    let sigmas = one(&block.sigmas, cfg.initial.sigma);
    let lambdas = one(&block.lambdas, cfg.initial.lambda);
    let mut points = Vec::new();
    for &a in &amplitudes {
        for &s in &sigmas {
            for &l in &lambdas {
                points.push((a, s, l));
            }
        }
    }
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(a, s, l)| sweep_row(cfg, a, s, l))
        .collect();
    let mut table = String::new();
    let _ = writeln!(table, "# config_hash = {}", cfg.hash());
    let _ = writeln!(table, "{SWEEP_HEADER}");
    for row in rows {
        let _ = writeln!(table, "{row}");
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("sweep-{}.csv", &cfg.hash()[..12]));
        std::fs::write(path, &table)?;
    }
    Ok(table)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {} — {}",
            self.index,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

const B_SET: [f64; 6] = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2];

fn criterion<F>(index: usize, name: &'static str, body: F) -> CriterionResult
where
    F: FnOnce() -> Result<(bool, String)>,
{
    match body() {
        Ok((pass, detail)) => CriterionResult {
            index,
            name,
            pass,
            detail,
        },
        Err(e) => CriterionResult {
            index,
            name,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn c1_ground_state_closed_form() -> Result<(bool, String)> {
    let gs = build_ground_state(ProblemParams::new(1.0)?)?;
    let k_exact = 8.0 * std::f64::consts::PI / 3.0;
    let e_exact = 2.0 * std::f64::consts::PI / 3.0;
    let dk = ((gs.grad_norm_sq - k_exact) / k_exact).abs();
    let de = ((gs.threshold_energy - e_exact) / e_exact).abs();
    Ok((
        dk <= 1e-8 && de <= 1e-8,
        format!("|Δ‖Q‖²|/‖Q‖² = {dk:.2e}, |ΔE*|/E* = {de:.2e} (tol 1e-8)"),
    ))
}

fn c2_pohozaev_balance() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for b in B_SET {
        let gs = build_ground_state(ProblemParams::new(b)?)?;
        let rel = ((gs.grad_norm_sq - gs.potential_integral) / gs.grad_norm_sq).abs();
        worst = worst.max(rel);
    }
    Ok((
        worst <= 1e-8,
        format!("max over b of |grad - potential|/grad = {worst:.2e} (tol 1e-8)"),
    ))
}

fn c3_ode_residual() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for b in B_SET {
        let gs = build_ground_state(ProblemParams::new(b)?)?;
        let m = 1000;
        for i in 0..m {
            let t = i as f64 / (m - 1) as f64;
            let r = 1e-3 * 1e6_f64.powf(t);
            worst = worst.max(gs.ode_residual(r).abs());
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max residual over b and r ∈ [1e-3, 1e3] = {worst:.2e} (tol 1e-10)"),
    ))
}

fn c4_shooting_consistency() -> Result<(bool, String)> {
    use crate::groundstate::shoot;
    let mut worst: f64 = 0.0;
    for b in B_SET {
        let params = ProblemParams::new(b)?;
        let coeff = make_coefficient(Family::PurePower, params, None)?;
        let gs = build_ground_state(params)?;
        let result = shoot(&coeff, 1.0, 100.0, &params)?;
        let m = 300;
        for i in 0..m {
            let t = i as f64 / (m - 1) as f64;
            let r = 1e-6 * 1e8_f64.powf(t);
            let sample = result.at(r)?;
            let exact = gs.eval_q(r);
            worst = worst.max(((sample.q - exact) / exact).abs());
        }
    }
    let params = ProblemParams::new(0.5)?;
    let coeff = make_coefficient(
        Family::Rational {
            a: 1.0,
            d: 0.0,
            c: 1.0,
        },
        params,
        None,
    )?;
    let mut zeros = Vec::new();
    let mut all_zero = true;
    for q0 in [0.5, 1.0, 2.0, 5.0] {
        let result = shoot(&coeff, q0, 1e4, &params)?;
        match result.first_zero {
            Some(z) => zeros.push(format!("{z:.1}")),
            None => {
                all_zero = false;
                zeros.push("none".into());
            }
        }
    }
    Ok((
        worst <= 1e-6 && all_zero,
        format!(
            "max |ΔQ|/Q = {worst:.2e} (tol 1e-6); rational b=1/2 first zeros at r = [{}]",
            zeros.join(", ")
        ),
    ))
}

fn conservation_cfg(dt0: f64, record_every: usize) -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.initial.profile = "gaussian".into();
    cfg.initial.amplitude = 0.5;
    cfg.initial.sigma = 1.0;
    cfg.grid.r_max = 40.0;
    cfg.grid.n = 4096;
    cfg.controls.dt0 = dt0;
    cfg.controls.t_end = 1.0;
    cfg.controls.record_every = record_every;
    cfg
}

fn drifts(records: &[DiagnosticsRecord]) -> (f64, f64) {
    let m0 = records[0].mass;
    let e0 = records[0].energy;
    let mut dm: f64 = 0.0;
    let mut de: f64 = 0.0;
    for r in records {
        dm = dm.max(((r.mass - m0) / m0).abs());
        de = de.max(((r.energy - e0) / e0).abs());
    }
    (dm, de)
}

fn c5_c6_conservation_and_virial() -> Result<(CriterionResult, CriterionResult)> {
    let coarse = run_scenario(&conservation_cfg(1e-3, 10), None, false)?;
    let fine = run_scenario(&conservation_cfg(5e-4, 20), None, false)?;
    let (dm, de) = drifts(&coarse.records);
    let (_, de_fine) = drifts(&fine.records);
    let ratio = de / de_fine;
    let c5 = CriterionResult {
        index: 5,
        name: "conservation",
        pass: dm <= 1e-8 && de <= 1e-6 && ratio >= 3.0,
        detail: format!(
            "mass drift {dm:.2e} (tol 1e-8), energy drift {de:.2e} (tol 1e-6), \
             halving dt reduces energy drift {ratio:.2}x (need ≥ 3)"
        ),
    };
    // Criterion 6 along the same run: nonuniform 3-point second
    // difference of virial_V against the recorded identity right side.
    let recs = &coarse.records;
    let mut ok = 0;
    let mut total = 0;
    for i in 1..recs.len().saturating_sub(1) {
        let (a, b, c) = (&recs[i - 1], &recs[i], &recs[i + 1]);
        let h1 = b.t - a.t;
        let h2 = c.t - b.t;
        if h1 <= 0.0 || h2 <= 0.0 {
            continue;
        }
        let fd = 2.0 * (h1 * c.virial_v - (h1 + h2) * b.virial_v + h2 * a.virial_v)
            / (h1 * h2 * (h1 + h2));
        total += 1;
        if (fd - b.lvirial_rhs).abs() <= 1e-3 * b.lvirial_rhs.abs().max(1e-12) {
            ok += 1;
        }
    }
    let c6 = CriterionResult {
        index: 6,
        name: "virial identity",
        pass: total > 0 && (ok as f64) >= 0.95 * total as f64,
        detail: format!("{ok}/{total} interior records within 1e-3 relative (need ≥ 95%)"),
    };
    Ok((c5, c6))
}

fn dichotomy_cfg(c: f64) -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.initial.profile = "scaled-ground-state".into();
    cfg.initial.c = c;
    // Wide box so the edge taper's gradient cost stays small against
    // the threshold margin; n+1 a power of two for the fast transform.
    cfg.grid.r_max = 1280.0;
    cfg.grid.n = 32767;
    cfg.controls.dt0 = 4e-3;
    cfg.controls.t_end = 20.0;
    cfg.controls.blowup_grad_factor = 5.0;
    cfg.controls.record_every = 25;
    cfg
}

fn c7_dichotomy() -> Result<(bool, String)> {
    let start = std::time::Instant::now();
    // The windowed L¹⁰ density decays slowly (~t^{-2.5}); the tail/peak
    // ratio crosses the 1e-3 gate between t = 20 and t = 40.
    let mut scatter_cfg = dichotomy_cfg(0.9);
    scatter_cfg.controls.t_end = 40.0;
    let scatter = run_scenario(&scatter_cfg, None, false)?;
    let blowup = run_scenario(&dichotomy_cfg(1.1), None, true)?;
    let elapsed = start.elapsed().as_secs_f64();
    let scatter_ok = scatter.verdict.kind == VerdictKind::GlobalScatterEvidence;
    let blowup_ok = blowup.verdict.kind == VerdictKind::BlowupEvidence;
    let concavity_ok = blowup
        .verdict
        .evidence
        .iter()
        .find(|e| e.name == "negativity.concavity")
        .map(|e| e.passed())
        .unwrap_or(false);
    let refined = blowup.refined.as_ref();
    let refine_ok = refined
        .map(|r| r.agrees && r.stop_time < blowup.stop_time)
        .unwrap_or(false);
    let pass = scatter_ok && blowup_ok && concavity_ok && refine_ok && elapsed < 600.0;
    Ok((
        pass,
        format!(
            "0.9Q → {:?}, 1.1Q → {:?} (stop t = {:.4}, refined t = {}), \
             concavity {}, {elapsed:.0}s (< 600s)",
            scatter.verdict.kind,
            blowup.verdict.kind,
            blowup.stop_time,
            refined
                .map(|r| format!("{:.4}", r.stop_time))
                .unwrap_or_else(|| "n/a".into()),
            if concavity_ok { "ok" } else { "violated" },
        ),
    ))
}

fn c8_scale_invariance() -> Result<(bool, String)> {
    let params = ProblemParams::new(1.0)?;
    let coeff = make_coefficient(Family::PurePower, params, None)?;
    let gs = build_ground_state(params)?;
    let report = check_conditions(&coeff, &params, 0.0)?;
    let mut assessments = Vec::new();
    for lambda in [0.5, 1.0, 2.0] {
        let grid = RadialGrid::new(1280.0 / lambda, 16383)?;
        let (state, _) = prepare_initial(
            &Profile::ScaledGroundState { c: 0.9, lambda },
            &grid,
            &gs,
        )?;
        assessments.push(classifier::classify_initial(
            &state, &coeff, &gs, &report, &params,
        ));
    }
    let mut worst: f64 = 0.0;
    let mut regions_equal = true;
    for pair in assessments.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        regions_equal &= a.region == b.region;
        for (x, y) in [
            (a.energy_phi, b.energy_phi),
            (a.kinetic_phi, b.kinetic_phi),
            (a.energy_margin, b.energy_margin),
            (a.kinetic_margin, b.kinetic_margin),
        ] {
            worst = worst.max(((x - y) / x.abs().max(1e-300)).abs());
        }
    }
    Ok((
        worst <= 1e-10 && regions_equal,
        format!(
            "max relative field deviation across λ ∈ {{1/2, 1, 2}} = {worst:.2e} \
             (tol 1e-10), regions {}",
            if regions_equal { "identical" } else { "differ" }
        ),
    ))
}

fn c9_condition_checker() -> Result<(bool, String)> {
    let params = ProblemParams::new(1.0)?;
    let pure = make_coefficient(Family::PurePower, params, None)?;
    let report = check_conditions(&pure, &params, 0.0)?;
    let rho_exact = params.b / (params.p + 1.0);
    let rho_dev = report
        .rho_max
        .map(|r| ((r - rho_exact) / rho_exact).abs())
        .unwrap_or(f64::INFINITY);
    let pure_ok = report.all_ok() && report.rigidity_margin == 0.0 && rho_dev <= 1e-10;
    let rational = make_coefficient(
        Family::Rational {
            a: 1.0,
            d: 0.0,
            c: 1.0,
        },
        params,
        None,
    )?;
    let rational_report = check_conditions(&rational, &params, 0.0)?;
    let rational_ok = !rational_report.variational_ok;
    Ok((
        pure_ok && rational_ok,
        format!(
            "pure power: all conditions {}, rigidity margin {:.1e}, \
             |Δrho_max|/rho_max = {rho_dev:.2e} (tol 1e-10); \
             rational a=1,d=0,c=1: variational_ok = {}",
            report.all_ok(),
            report.rigidity_margin,
            rational_report.variational_ok
        ),
    ))
}

/// The built-in acceptance suite: one result per criterion, in order.
pub fn verify() -> Vec<CriterionResult> {
    let mut out = Vec::with_capacity(9);
    out.push(criterion(1, "ground-state closed form", c1_ground_state_closed_form));
    out.push(criterion(2, "Pohozaev balance", c2_pohozaev_balance));
    out.push(criterion(3, "ODE residual", c3_ode_residual));
    out.push(criterion(4, "shooting consistency", c4_shooting_consistency));
    match c5_c6_conservation_and_virial() {
        Ok((c5, c6)) => {
            out.push(c5);
            out.push(c6);
        }
        Err(e) => {
            for (index, name) in [(5, "conservation"), (6, "virial identity")] {
                out.push(CriterionResult {
                    index,
                    name,
                    pass: false,
                    detail: format!("error: {e}"),
                });
            }
        }
    }
    out.push(criterion(7, "dichotomy evidence", c7_dichotomy));
    out.push(criterion(8, "scale invariance", c8_scale_invariance));
    out.push(criterion(9, "condition checker", c9_condition_checker));
    out
}
