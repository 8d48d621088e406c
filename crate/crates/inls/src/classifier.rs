//! Threshold-region classification of initial data, trapping/negativity
//! monitors along a run, and the final evidence verdict.

use serde::{Deserialize, Serialize};

use crate::coefficient::{Coefficient, CoefficientReport};
use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::evolution::{RadialState, StopReason};
use crate::groundstate::GroundState;
use crate::params::ProblemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// E < E* and gs_eff·‖φ‖²_{Ḣ¹} < ‖Q‖²_{Ḣ¹}
    ScatterHypothesis,
    /// E < E* and gs_eff·‖φ‖²_{Ḣ¹} ≥ ‖Q‖²_{Ḣ¹}
    BlowupHypothesis,
    /// E ≥ E* (boundary cases included)
    AboveThreshold,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionAssessment {
    pub energy_phi: f64,
    /// gs_eff · ‖φ‖²_{Ḣ¹}
    pub kinetic_phi: f64,
    pub threshold_e: f64,
    pub threshold_k: f64,
    pub region: Region,
    /// threshold_e - energy_phi
    pub energy_margin: f64,
    /// threshold_k - kinetic_phi
    pub kinetic_margin: f64,
    /// set when the coefficient report failed the variational condition,
    /// so the dichotomy hypotheses do not formally apply
    pub hypothesis_unmet: bool,
}

/// Classify from already-computed scalars (value-level core, exact on
/// boundary cases).
pub fn classify_values(
    energy_phi: f64,
    kinetic_phi: f64,
    gs: &GroundState,
    report: &CoefficientReport,
) -> RegionAssessment {
    let threshold_e = gs.threshold_energy;
    let threshold_k = gs.grad_norm_sq;
    let region = if energy_phi < threshold_e {
        if kinetic_phi < threshold_k {
            Region::ScatterHypothesis
        } else {
            Region::BlowupHypothesis
        }
    } else {
        Region::AboveThreshold
    };
    RegionAssessment {
        energy_phi,
        kinetic_phi,
        threshold_e,
        threshold_k,
        region,
        energy_margin: threshold_e - energy_phi,
        kinetic_margin: threshold_k - kinetic_phi,
        hypothesis_unmet: !report.variational_ok,
    }
}

/// Classify sampled initial data: E_g(φ) with the run's coefficient by
/// grid quadrature, kinetic term weighted by gs_eff from the report.
pub fn classify_initial(
    state: &RadialState,
    coeff: &Coefficient,
    gs: &GroundState,
    report: &CoefficientReport,
    params: &ProblemParams,
) -> RegionAssessment {
    let grad = diagnostics::grad_norm_sq(state);
    let pot = diagnostics::potential(state, coeff, params);
    let energy = 0.5 * grad - pot / (params.p + 1.0);
    classify_values(energy, report.gs_eff * grad, gs, report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonitorStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvidenceItem {
    pub name: String,
    pub status: MonitorStatus,
    /// worst slack seen (positive = satisfied with room)
    pub margin: f64,
    pub detail: String,
}

impl EvidenceItem {
    fn na(name: &str, detail: &str) -> Self {
        EvidenceItem {
            name: name.into(),
            status: MonitorStatus::NotApplicable,
            margin: 0.0,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != MonitorStatus::Fail
    }
}

/// Energy-trapping monitors for runs started under the scattering
/// hypothesis: the kinetic bound stays strict, the energy/gradient
/// ratio stays in a band around its initial value, and the gradient
/// dominates the potential.  Violations are reported as evidence, not
/// errors.
pub fn monitor_trapping(
    records: &[DiagnosticsRecord],
    gs: &GroundState,
    report: &CoefficientReport,
    region: Region,
) -> Vec<EvidenceItem> {
    if region != Region::ScatterHypothesis {
        return vec![EvidenceItem::na(
            "trapping",
            "run not started under the scattering hypothesis",
        )];
    }
    let k = gs.grad_norm_sq;
    let mut kinetic_margin = f64::INFINITY;
    let mut positivity_margin = f64::INFINITY;
    for r in records {
        kinetic_margin = kinetic_margin.min(k - report.gs_eff * r.grad_norm_sq);
        positivity_margin = positivity_margin.min(r.grad_norm_sq - r.potential);
    }
    // Coercivity band calibrated at t = 0: the continuum lemma gives
    // E ~ ‖u‖²_{Ḣ¹} with unspecified constants; [ratio0/2, 2·ratio0] is
    // the declared convention.
    let ratio0 = if records[0].grad_norm_sq > 0.0 {
        records[0].energy / records[0].grad_norm_sq
    } else {
        0.0
    };
    let mut band_margin = f64::INFINITY;
    for r in records {
        if r.grad_norm_sq == 0.0 {
            continue;
        }
        let ratio = r.energy / r.grad_norm_sq;
        band_margin = band_margin.min((ratio - 0.5 * ratio0).min(2.0 * ratio0 - ratio));
    }
    if !band_margin.is_finite() {
        band_margin = 0.0; // zero state: trivially inside the band
    }
    let item = |name: &str, margin: f64, detail: String| EvidenceItem {
        name: name.into(),
        status: if margin >= 0.0 {
            MonitorStatus::Pass
        } else {
            MonitorStatus::Fail
        },
        margin,
        detail,
    };
    vec![
        item(
            "trapping.kinetic",
            kinetic_margin,
            format!("min over records of K - gs_eff*grad; K = {k:.6e}"),
        ),
        item(
            "trapping.coercivity",
            band_margin,
            format!("energy/grad stays within [{:.4e}, {:.4e}]", 0.5 * ratio0, 2.0 * ratio0),
        ),
        item(
            "trapping.positivity",
            positivity_margin,
            "min over records of grad - potential".into(),
        ),
    ]
}

/// Negative-direction monitors for runs started under the blowup
/// hypothesis: grad - (1-eta)·potential stays negative at every record,
/// and the virial quantity is concave past the initial transient.
pub fn monitor_negative(
    records: &[DiagnosticsRecord],
    _gs: &GroundState,
    report: &CoefficientReport,
    region: Region,
    eta: f64,
) -> Result<Vec<EvidenceItem>> {
    let kg = report.kg.unwrap_or(0.0);
    if !(0.0..=kg + 1e-15).contains(&eta) {
        return Err(Error::ParameterDomain(format!(
            "eta must lie in [0, k_g] = [0, {kg}], got {eta}"
        )));
    }
    if region != Region::BlowupHypothesis {
        return Ok(vec![EvidenceItem::na(
            "negativity",
            "run not started under the blowup hypothesis",
        )]);
    }
    let mut worst = f64::NEG_INFINITY;
    for r in records {
        worst = worst.max(r.grad_norm_sq - (1.0 - eta) * r.potential);
    }
    let neg_item = EvidenceItem {
        name: "negativity.direction".into(),
        status: if worst < 0.0 {
            MonitorStatus::Pass
        } else {
            MonitorStatus::Fail
        },
        margin: -worst,
        detail: format!("max over records of grad - (1-{eta})*potential"),
    };

    // Concavity of the virial quantity after transients: skip the first
    // tenth of the records (at least three) before requiring the
    // nonuniform 3-point second difference to be nonpositive.
    let skip = (records.len() / 10).max(3);
    let mut conc_margin = f64::INFINITY;
    let mut checked = 0;
    for i in skip.max(1)..records.len().saturating_sub(1) {
        let (a, b, c) = (&records[i - 1], &records[i], &records[i + 1]);
        let h1 = b.t - a.t;
        let h2 = c.t - b.t;
        if h1 <= 0.0 || h2 <= 0.0 {
            continue;
        }
        let fd = 2.0 * (h1 * c.virial_v - (h1 + h2) * b.virial_v + h2 * a.virial_v)
            / (h1 * h2 * (h1 + h2));
        conc_margin = conc_margin.min(-fd);
        checked += 1;
    }
    let conc_item = if checked == 0 {
        EvidenceItem::na("negativity.concavity", "too few records to difference")
    } else {
        EvidenceItem {
            name: "negativity.concavity".into(),
            status: if conc_margin >= 0.0 {
                MonitorStatus::Pass
            } else {
                MonitorStatus::Fail
            },
            margin: conc_margin,
            detail: format!("min over {checked} interior records of -d²/dt² virial_V"),
        }
    };
    Ok(vec![neg_item, conc_item])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    GlobalScatterEvidence,
    BlowupEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub stop_reason: StopReason,
    pub evidence: Vec<EvidenceItem>,
}

/// Aggregate monitors and the stop reason into an evidence verdict.
///
/// A boundary-reflection (truncation) flag forces Inconclusive: reflected
/// radiation contaminates every later record.  The initial-data tail flag
/// of the ground-state family does not — its truncation is smooth, by
/// construction of the profile, and accounted for in the thresholds.
pub fn verdict(
    assessment: &RegionAssessment,
    gs: &GroundState,
    report: &CoefficientReport,
    records: &[DiagnosticsRecord],
    stop_reason: StopReason,
    truncation_flagged: bool,
) -> Verdict {
    let mut evidence = Vec::new();
    if truncation_flagged {
        evidence.push(EvidenceItem {
            name: "truncation".into(),
            status: MonitorStatus::Fail,
            margin: 0.0,
            detail: "boundary reflection flagged during the run".into(),
        });
        return Verdict {
            kind: VerdictKind::Inconclusive,
            stop_reason,
            evidence,
        };
    }
    match assessment.region {
        Region::ScatterHypothesis => {
            let trapping = monitor_trapping(records, gs, report, assessment.region);
            let trapping_ok = trapping.iter().all(|e| e.passed());
            evidence.extend(trapping);
            let peak_s = records.iter().map(|r| r.s_increment).fold(0.0, f64::max);
            let tail_s = records.last().map(|r| r.s_increment).unwrap_or(0.0);
            let tail_ok = tail_s < 1e-3 * peak_s || peak_s == 0.0;
            evidence.push(EvidenceItem {
                name: "scatter.s_tail".into(),
                status: if tail_ok {
                    MonitorStatus::Pass
                } else {
                    MonitorStatus::Fail
                },
                margin: 1e-3 * peak_s - tail_s,
                detail: format!(
                    "trailing s_increment {tail_s:.3e} vs peak {peak_s:.3e} \
                     (heuristic: stagnating space-time accumulation taken \
                     as scattering evidence, not proof)"
                ),
            });
            let completed = stop_reason == StopReason::Completed;
            evidence.push(EvidenceItem {
                name: "scatter.completed".into(),
                status: if completed {
                    MonitorStatus::Pass
                } else {
                    MonitorStatus::Fail
                },
                margin: 0.0,
                detail: format!("stop reason {stop_reason:?}"),
            });
            let kind = if completed && tail_ok && trapping_ok {
                VerdictKind::GlobalScatterEvidence
            } else {
                VerdictKind::Inconclusive
            };
            Verdict {
                kind,
                stop_reason,
                evidence,
            }
        }
        Region::BlowupHypothesis => {
            let negative = monitor_negative(records, gs, report, assessment.region, 0.0)
                .unwrap_or_else(|_| vec![EvidenceItem::na("negativity", "eta out of range")]);
            let neg_ok = negative
                .iter()
                .find(|e| e.name == "negativity.direction")
                .map(|e| e.passed())
                .unwrap_or(false);
            evidence.extend(negative);
            let stopped = stop_reason == StopReason::BlowupStop;
            evidence.push(EvidenceItem {
                name: "blowup.stop".into(),
                status: if stopped {
                    MonitorStatus::Pass
                } else {
                    MonitorStatus::Fail
                },
                margin: 0.0,
                detail: format!("stop reason {stop_reason:?}"),
            });
            let kind = if stopped && neg_ok {
                VerdictKind::BlowupEvidence
            } else {
                VerdictKind::Inconclusive
            };
            Verdict {
                kind,
                stop_reason,
                evidence,
            }
        }
        Region::AboveThreshold => {
            evidence.push(EvidenceItem::na(
                "region",
                "initial data above the energy threshold; dichotomy not applicable",
            ));
            Verdict {
                kind: VerdictKind::Inconclusive,
                stop_reason,
                evidence,
            }
        }
    }
}
