//! Admission, retirement and fault reconfiguration of constituent satellites.
//!
//! The optimization variables are which satellite leaves (retirement) and the
//! duty-cycle phase of each surviving non-dedicated satellite
//! (reconfiguration). Objectives rank by federation DCP coverage, then by
//! total temporal coverage; remaining ties go to the earliest candidate.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::access::VisibilityTable;
use crate::error::{Error, Result};
use crate::metrics::{
    evaluate_with, rules, serialize_extended, ComplianceResult, Direction, Evaluation, FigureOfMeritReport, Quantity,
};
use crate::scenario::{AccessMode, Satellite, Scenario, Thresholds};

/// Phase offsets tried per satellite: multiples of `planning_period / PHASE_STEPS`.
pub const PHASE_STEPS: usize = 8;

/// Above this many searchable satellites the phase search switches from
/// exhaustive enumeration to coordinate ascent.
pub const EXHAUSTIVE_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objective {
    pub dcp_coverage_fraction: f64,
    pub total_temporal_coverage: f64,
}

impl Objective {
    pub fn of(report: &FigureOfMeritReport) -> Self {
        Self {
            dcp_coverage_fraction: report.federation.dcp_coverage_fraction,
            total_temporal_coverage: report.total_temporal_coverage(),
        }
    }

    /// `Greater` when `self` is the better configuration.
    pub fn compare(&self, other: &Self) -> Ordering {
        self.dcp_coverage_fraction
            .total_cmp(&other.dcp_coverage_fraction)
            .then_with(|| self.total_temporal_coverage.total_cmp(&other.total_temporal_coverage))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcpDelta {
    pub coverage_delta: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub max_revisit_delta_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QosDelta {
    pub per_dcp: BTreeMap<String, DcpDelta>,
    pub federation_coverage_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissionDecision {
    pub candidate_id: String,
    pub accepted: bool,
    /// Offered values of the candidate that miss a threshold.
    pub failed_rules: Vec<ComplianceResult>,
    pub post_admission_compliant: bool,
    /// Federation rules failing once the candidate is included.
    pub post_admission_failures: Vec<ComplianceResult>,
    pub qos_delta: QosDelta,
}

fn difference(before: f64, after: f64) -> f64 {
    if before == after {
        0.0
    } else {
        after - before
    }
}

fn qos_delta(before: &FigureOfMeritReport, after: &FigureOfMeritReport) -> QosDelta {
    let per_dcp = before
        .per_dcp
        .iter()
        .filter_map(|(id, b)| {
            after.per_dcp.get(id).map(|a| {
                (
                    id.clone(),
                    DcpDelta {
                        coverage_delta: difference(b.temporal_coverage_fraction, a.temporal_coverage_fraction),
                        max_revisit_delta_s: difference(b.max_revisit_s, a.max_revisit_s),
                    },
                )
            })
        })
        .collect();
    QosDelta {
        per_dcp,
        federation_coverage_delta: difference(
            before.federation.dcp_coverage_fraction,
            after.federation.dcp_coverage_fraction,
        ),
    }
}

/// Offered-value checks for a candidate on its own.
pub fn candidate_rules(candidate: &Satellite, thresholds: &Thresholds) -> Vec<ComplianceResult> {
    let check = |rule: &'static str, direction: Direction, threshold: f64, observed: f64, unit: &'static str| {
        ComplianceResult {
            rule,
            subject: candidate.id.clone(),
            direction,
            threshold: Quantity { value: threshold, unit },
            observed: Quantity { value: observed, unit },
            pass: direction.holds(observed, threshold),
        }
    };
    let mut out = Vec::new();
    if candidate.access_mode == AccessMode::StoreAndForward {
        out.push(check(
            rules::STORAGE,
            Direction::AtLeast,
            thresholds.min_storage_bytes,
            candidate.storage_capacity_bytes as f64,
            "bytes",
        ));
    }
    out.push(check(
        rules::PEAK_POWER,
        Direction::AtMost,
        thresholds.max_peak_power_w,
        candidate.peak_power_w,
        "W",
    ));
    if !candidate.dedicated {
        out.push(check(
            rules::ENGAGEMENT,
            Direction::AtLeast,
            thresholds.min_engagement_fraction,
            candidate.engagement_fraction,
            "fraction",
        ));
    }
    out
}

/// Decides whether `candidate` may join the federation.
pub fn evaluate_candidate(scenario: &Scenario, candidate: &Satellite) -> Result<AdmissionDecision> {
    if scenario.satellite(&candidate.id).is_some() {
        return Err(Error::DuplicateSatellite(candidate.id.clone()));
    }
    let failed_rules: Vec<_> = candidate_rules(candidate, &scenario.thresholds)
        .into_iter()
        .filter(|r| !r.pass)
        .collect();

    let joined = scenario.with_satellite(candidate.clone());
    let table = VisibilityTable::compute(&joined)?;
    let before = evaluate_with(scenario, &table)?;
    let after = evaluate_with(&joined, &table)?;

    let post_admission_compliant = after.compliant();
    Ok(AdmissionDecision {
        candidate_id: candidate.id.clone(),
        accepted: failed_rules.is_empty() && post_admission_compliant,
        failed_rules,
        post_admission_compliant,
        post_admission_failures: after.failures(),
        qos_delta: qos_delta(&before.report, &after.report),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetirementPlan {
    pub removed_id: String,
    pub objective: Objective,
    /// Sum over DCPs of the temporal coverage lost by the removal.
    pub temporal_coverage_loss: f64,
    pub still_compliant: bool,
    pub candidates_evaluated: usize,
    pub post_metrics: FigureOfMeritReport,
}

/// Removes the satellite whose absence hurts federation coverage least.
pub fn retire_minimal_impact(scenario: &Scenario) -> Result<RetirementPlan> {
    if scenario.satellites.len() < 2 {
        return Err(Error::TooFewSatellites(scenario.satellites.len()));
    }
    let table = VisibilityTable::compute(scenario)?;
    let base_total = evaluate_with(scenario, &table)?.report.total_temporal_coverage();
    let options = scenario
        .satellites
        .par_iter()
        .map(|s| {
            let eval = evaluate_with(&scenario.without_satellite(&s.id), &table)?;
            Ok((s.id.clone(), eval))
        })
        .collect::<Result<Vec<_>>>()?;

    let candidates_evaluated = options.len();
    let (removed_id, eval) = options
        .into_iter()
        .min_by(|(id_a, a), (id_b, b)| {
            Objective::of(&b.report)
                .compare(&Objective::of(&a.report))
                .then_with(|| id_a.cmp(id_b))
        })
        .expect("at least two options");
    let objective = Objective::of(&eval.report);
    Ok(RetirementPlan {
        removed_id,
        objective,
        temporal_coverage_loss: base_total - objective.total_temporal_coverage,
        still_compliant: eval.compliant(),
        candidates_evaluated,
        post_metrics: eval.report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconfigurationPlan {
    pub surviving: Vec<String>,
    pub duty_phases_s: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconfigurationResult {
    pub failed_id: String,
    pub fault_time_s: f64,
    /// Start of the evaluated horizon: the first planning-period boundary
    /// after the fault, or the fault itself when no boundary remains.
    pub effective_from_s: f64,
    pub plan: ReconfigurationPlan,
    pub compliant_before: bool,
    pub compliant_after: bool,
    pub objective_before: Objective,
    pub objective_after: Objective,
    pub failed_rules_after: Vec<ComplianceResult>,
    pub post_metrics: FigureOfMeritReport,
    pub search_cost: usize,
    pub exhaustive: bool,
}

/// First planning-period boundary strictly after `time_s`.
pub fn next_planning_boundary(time_s: f64, planning_period_s: f64) -> f64 {
    ((time_s / planning_period_s).floor() + 1.0) * planning_period_s
}

/// Satellites whose duty phase changes the solution.
fn searchable(scenario: &Scenario) -> Vec<usize> {
    scenario
        .satellites
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.dedicated && s.engagement_fraction < 1.0)
        .map(|(i, _)| i)
        .collect()
}

fn with_phases(scenario: &Scenario, indices: &[usize], phases: &[f64]) -> Scenario {
    let mut out = scenario.clone();
    for (&i, &p) in indices.iter().zip(phases) {
        out.satellites[i].duty_phase_s = p;
    }
    out
}

/// Phase vector number `code` in lexicographic order (first satellite most significant).
fn decode_phases(mut code: usize, len: usize, step_s: f64) -> Vec<f64> {
    let mut phases = vec![0.0; len];
    for slot in phases.iter_mut().rev() {
        *slot = (code % PHASE_STEPS) as f64 * step_s;
        code /= PHASE_STEPS;
    }
    phases
}

/// Recovers from the loss of `failed_id` at `fault_time_s` by re-phasing the
/// duty cycles of the surviving non-dedicated satellites.
///
/// Storage starts empty at the evaluated horizon's first instant.
pub fn reconfigure_on_fault(scenario: &Scenario, failed_id: &str, fault_time_s: f64) -> Result<ReconfigurationResult> {
    if scenario.satellite(failed_id).is_none() {
        return Err(Error::UnknownSatellite(failed_id.to_string()));
    }
    if scenario.grid.index_of(fault_time_s).is_none() {
        return Err(Error::OffGrid(fault_time_s));
    }
    let period = scenario.thresholds.planning_period_s;
    let boundary = next_planning_boundary(fault_time_s, period);
    let window = scenario
        .grid
        .from_time(boundary)
        .or_else(|| scenario.grid.from_time(fault_time_s))
        .unwrap_or(scenario.grid);

    let mut before = scenario.clone();
    before.grid = window;
    let table = VisibilityTable::compute(&before)?;
    let before_eval = evaluate_with(&before, &table)?;

    let survivors = before.without_satellite(failed_id);
    let indices = searchable(&survivors);
    let original: Vec<f64> = indices.iter().map(|&i| survivors.satellites[i].duty_phase_s).collect();
    let step = period / PHASE_STEPS as f64;

    let run = |phases: &[f64]| evaluate_with(&with_phases(&survivors, &indices, phases), &table);

    let exhaustive = indices.len() <= EXHAUSTIVE_LIMIT;
    let (best_phases, best_eval, search_cost) = if exhaustive {
        let combos = PHASE_STEPS.pow(indices.len() as u32);
        // candidate 0 is the unchanged configuration, then lexicographic order
        let results = (0..=combos)
            .into_par_iter()
            .map(|c| {
                let phases = if c == 0 {
                    original.clone()
                } else {
                    decode_phases(c - 1, indices.len(), step)
                };
                let eval = run(&phases)?;
                Ok((c, phases, eval))
            })
            .collect::<Result<Vec<_>>>()?;
        let cost = results.len();
        let (_, phases, eval) = results
            .into_iter()
            .min_by(|(ca, _, a), (cb, _, b)| {
                Objective::of(&b.report)
                    .compare(&Objective::of(&a.report))
                    .then_with(|| ca.cmp(cb))
            })
            .expect("non-empty search");
        (phases, eval, cost)
    } else {
        coordinate_ascent(&original, step, &run)?
    };

    let objective_after = Objective::of(&best_eval.report);
    Ok(ReconfigurationResult {
        failed_id: failed_id.to_string(),
        fault_time_s,
        effective_from_s: window.start_s,
        plan: ReconfigurationPlan {
            surviving: survivors.satellites.iter().map(|s| s.id.clone()).collect(),
            duty_phases_s: indices
                .iter()
                .zip(&best_phases)
                .map(|(&i, &p)| (survivors.satellites[i].id.clone(), p))
                .collect(),
        },
        compliant_before: before_eval.compliant(),
        compliant_after: best_eval.compliant(),
        objective_before: Objective::of(&before_eval.report),
        objective_after,
        failed_rules_after: best_eval.failures(),
        post_metrics: best_eval.report,
        search_cost,
        exhaustive,
    })
}

/// Improves one satellite's phase at a time until no single change helps.
fn coordinate_ascent<F>(start: &[f64], step: f64, run: &F) -> Result<(Vec<f64>, Evaluation, usize)>
where
    F: Fn(&[f64]) -> Result<Evaluation> + Sync,
{
    let mut phases = start.to_vec();
    let mut best = run(&phases)?;
    let mut cost = 1;
    loop {
        let mut improved = false;
        for slot in 0..phases.len() {
            let trials = (0..PHASE_STEPS)
                .into_par_iter()
                .map(|k| {
                    let mut p = phases.clone();
                    p[slot] = k as f64 * step;
                    run(&p).map(|e| (p, e))
                })
                .collect::<Result<Vec<_>>>()?;
            cost += trials.len();
            for (p, e) in trials {
                if Objective::of(&e.report).compare(&Objective::of(&best.report)) == Ordering::Greater {
                    phases = p;
                    best = e;
                    improved = true;
                }
            }
        }
        if !improved {
            return Ok((phases, best, cost));
        }
    }
}
