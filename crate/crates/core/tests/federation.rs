mod common;

use common::*;
use fedsat::federation::Objective;
use fedsat::metrics::rules;
use fedsat::scenario::load_satellite;
use fedsat::{evaluate, evaluate_candidate, load_scenario, reconfigure_on_fault, retire_minimal_impact, Error};

fn objective_pair(o: &Objective) -> (f64, f64) {
    (o.dcp_coverage_fraction, o.total_temporal_coverage)
}

#[test]
fn gap_closing_candidate_is_admitted() {
    let base = load_scenario(shipped("admission/base.json")).unwrap();
    let candidate = load_satellite(shipped("admission/gap_closer.json")).unwrap();
    assert!(!evaluate(&base).unwrap().compliant());

    let d = evaluate_candidate(&base, &candidate).unwrap();
    assert!(d.accepted);
    assert!(d.failed_rules.is_empty());
    assert!(d.qos_delta.federation_coverage_delta > 0.0);

    // recompute the deltas from two independent full runs
    let before = evaluate(&base).unwrap().report;
    let after = evaluate(&base.with_satellite(candidate)).unwrap().report;
    for (id, delta) in &d.qos_delta.per_dcp {
        let expected = after.per_dcp[id].temporal_coverage_fraction - before.per_dcp[id].temporal_coverage_fraction;
        assert!((delta.coverage_delta - expected).abs() < 1e-12);
    }
    assert_eq!(
        d.qos_delta.federation_coverage_delta,
        after.federation.dcp_coverage_fraction - before.federation.dcp_coverage_fraction
    );
}

#[test]
fn three_watt_payload_is_rejected() {
    let base = load_scenario(shipped("admission/base.json")).unwrap();
    let candidate = load_satellite(shipped("admission/power_3w.json")).unwrap();
    let d = evaluate_candidate(&base, &candidate).unwrap();
    assert!(!d.accepted);
    let failed: Vec<_> = d.failed_rules.iter().map(|r| r.rule).collect();
    assert_eq!(failed, vec![rules::PEAK_POWER]);
    assert_eq!(d.failed_rules[0].threshold.value, 2.0);
}

#[test]
fn duplicate_candidate_is_an_error() {
    let base = load_scenario(shipped("admission/base.json")).unwrap();
    let dup = base.satellites[0].clone();
    assert!(matches!(evaluate_candidate(&base, &dup), Err(Error::DuplicateSatellite(_))));
}

#[test]
fn blind_candidate_changes_nothing() {
    let golds = load_scenario(shipped("golds.json")).unwrap();
    let mut blind = geo("BLIND", 100.0);
    blind.fov_dcp = fov(0.0, 0.0);
    let d = evaluate_candidate(&golds, &blind).unwrap();
    assert!(d.qos_delta.per_dcp.values().all(|x| x.coverage_delta == 0.0 && x.max_revisit_delta_s == 0.0));
    assert_eq!(d.qos_delta.federation_coverage_delta, 0.0);
    assert!(d.accepted, "{:?}", d.post_admission_failures);

    // the same candidate cannot rescue a non-compliant federation
    let base = load_scenario(shipped("admission/base.json")).unwrap();
    assert!(!evaluate_candidate(&base, &blind).unwrap().accepted);
}

#[test]
fn admission_is_deterministic_and_monotone() {
    let base = load_scenario(shipped("admission/base.json")).unwrap();
    let candidate = load_satellite(shipped("admission/gap_closer.json")).unwrap();
    let a = evaluate_candidate(&base, &candidate).unwrap();
    let b = evaluate_candidate(&base, &candidate).unwrap();
    assert_eq!(a, b);
    assert!(a.qos_delta.federation_coverage_delta >= 0.0);
    assert!(a.qos_delta.per_dcp.values().all(|x| x.coverage_delta >= 0.0 && x.max_revisit_delta_s <= 0.0));
}

#[test]
fn identical_twins_retire_the_smaller_id() {
    let s = scenario(
        vec![geo("SAT-B", -55.0), geo("SAT-A", -55.0)],
        vec![dcp("DCP-0", -12.0, -55.0)],
        vec![station("GS", -15.5, -56.0)],
        86_400.0,
        60.0,
    );
    let plan = retire_minimal_impact(&s).unwrap();
    assert_eq!(plan.removed_id, "SAT-A");
    assert_eq!(plan.temporal_coverage_loss, 0.0);
    assert!(plan.still_compliant);
}

#[test]
fn useless_satellite_is_retired() {
    let s = load_scenario(shipped("retire/three_geo.json")).unwrap();
    let before = evaluate(&s).unwrap().compliant();
    let plan = retire_minimal_impact(&s).unwrap();
    assert_eq!(plan.removed_id, "GEO-BLIND");
    assert_eq!(plan.still_compliant, before);
    assert!(!plan.post_metrics.per_satellite.contains_key("GEO-BLIND"));
    assert_eq!(objective_pair(&plan.objective), retirement_oracle(&s));
}

#[test]
fn retirement_needs_two_satellites() {
    let s = load_scenario(shipped("admission/base.json")).unwrap();
    assert!(matches!(retire_minimal_impact(&s), Err(Error::TooFewSatellites(1))));
}

#[test]
fn reconfiguration_restores_the_fault_fixture() {
    let s = load_scenario(shipped("fault/two_geo.json")).unwrap();
    let r = reconfigure_on_fault(&s, "GEO-A", 3600.0).unwrap();
    assert_eq!(r.effective_from_s, 86_400.0);
    assert!(!r.plan.surviving.contains(&"GEO-A".to_string()));
    assert!(r.compliant_after);
    assert_eq!(r.plan.duty_phases_s["GEO-B"], 0.0);
    assert_eq!(r.search_cost, 1 + 8);
    assert_eq!(objective_pair(&r.objective_after), reconfiguration_oracle(&s, "GEO-A", 3600.0));

    // without re-phasing the survivor idles through the whole window
    let mut stale = s.without_satellite("GEO-A");
    stale.grid.start_s = 86_400.0;
    assert!(!evaluate(&stale).unwrap().compliant());
}

#[test]
fn only_one_phase_recovers_the_fault_fixture() {
    let s = load_scenario(shipped("fault/two_geo.json")).unwrap();
    let mut winners = Vec::new();
    for k in 0..8 {
        let mut trial = s.without_satellite("GEO-A");
        trial.grid.start_s = 86_400.0;
        trial.satellites[0].duty_phase_s = k as f64 * 10_800.0;
        if evaluate(&trial).unwrap().compliant() {
            winners.push(k);
        }
    }
    assert_eq!(winners, vec![0]);
}

#[test]
fn losing_the_only_satellite_is_unrecoverable() {
    let s = load_scenario(shipped("admission/base.json")).unwrap();
    let r = reconfigure_on_fault(&s, "GEO-WEST", 0.0).unwrap();
    assert!(!r.compliant_after);
    assert!(r.plan.surviving.is_empty());
    assert!(r.post_metrics.per_dcp.values().all(|d| d.temporal_coverage_fraction == 0.0));
}

#[test]
fn fault_on_an_idle_satellite_changes_nothing() {
    let base = load_scenario(shipped("retire/three_geo.json")).unwrap();
    let r = reconfigure_on_fault(&base, "GEO-BLIND", 0.0).unwrap();
    assert_eq!(r.objective_before, r.objective_after);
    assert_eq!(r.compliant_after, r.compliant_before);
}

#[test]
fn reconfiguration_input_errors() {
    let s = load_scenario(shipped("fault/two_geo.json")).unwrap();
    assert!(matches!(reconfigure_on_fault(&s, "NOPE", 0.0), Err(Error::UnknownSatellite(_))));
    assert!(matches!(reconfigure_on_fault(&s, "GEO-A", 30.0), Err(Error::OffGrid(_))));
}

#[test]
fn late_fault_falls_back_to_the_rest_of_the_horizon() {
    let s = load_scenario(shipped("fault/two_geo.json")).unwrap();
    let r = reconfigure_on_fault(&s, "GEO-A", 100_800.0).unwrap();
    assert_eq!(r.effective_from_s, 100_800.0);
}
