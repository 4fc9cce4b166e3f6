//! Figures of merit over the access solution and threshold compliance.
//!
//! Constellation coverage of a DCP is the union of the instants any
//! satellite serves it, never an arithmetic sum.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Serialize, Serializer};

use crate::access::{
    downlink_sufficiency, instant_mask, solve, AccessSolution, AccessWindow, TargetKind, VisibilityTable, WindowKind,
};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::scenario::{AccessMode, Scenario, Thresholds};

pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Serializes non-finite values as `"inf"`, `"-inf"` or `"nan"`.
pub(crate) fn serialize_extended<S: Serializer>(value: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if value.is_finite() {
        s.serialize_f64(*value)
    } else if value.is_nan() {
        s.serialize_str("nan")
    } else if *value > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn fmt_extended(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.3}")
    } else {
        format!("{value}")
    }
}

fn dcp_mask(windows: &[AccessWindow], dcp_id: &str, grid: &TimeGrid) -> Vec<bool> {
    instant_mask(
        windows
            .iter()
            .filter(|w| w.kind.target_kind() == TargetKind::Dcp && w.target_id == dcp_id),
        grid,
    )
}

/// Share of grid instants at which at least one satellite serves the DCP.
pub fn temporal_coverage(scenario: &Scenario, windows: &[AccessWindow], dcp_id: &str) -> Result<f64> {
    if scenario.dcp(dcp_id).is_none() {
        return Err(Error::UnknownDcp(dcp_id.to_string()));
    }
    let mask = dcp_mask(windows, dcp_id, &scenario.grid);
    if mask.is_empty() {
        return Ok(0.0);
    }
    Ok(mask.iter().filter(|m| **m).count() as f64 / mask.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevisitStats {
    /// Non-zero unserved stretches, including the leading and trailing ones.
    pub gaps: Vec<f64>,
    /// Longest gap; infinite when the DCP is never served.
    #[serde(serialize_with = "serialize_extended")]
    pub max_revisit_s: f64,
}

/// Gaps between consecutive union-access windows of a DCP.
pub fn revisit_times(scenario: &Scenario, windows: &[AccessWindow], dcp_id: &str) -> Result<RevisitStats> {
    if scenario.dcp(dcp_id).is_none() {
        return Err(Error::UnknownDcp(dcp_id.to_string()));
    }
    Ok(revisit_from_mask(&dcp_mask(windows, dcp_id, &scenario.grid), scenario.grid.step_s))
}

pub(crate) fn revisit_from_mask(mask: &[bool], step_s: f64) -> RevisitStats {
    if !mask.iter().any(|m| *m) {
        return RevisitStats {
            gaps: vec![mask.len() as f64 * step_s],
            max_revisit_s: f64::INFINITY,
        };
    }
    let mut gaps = Vec::new();
    let mut run = 0usize;
    for &served in mask.iter().chain(std::iter::once(&true)) {
        if served {
            if run > 0 {
                gaps.push(run as f64 * step_s);
            }
            run = 0;
        } else {
            run += 1;
        }
    }
    let max_revisit_s = gaps.iter().copied().fold(0.0, f64::max);
    RevisitStats { gaps, max_revisit_s }
}

/// Ground-contact time of one satellite (union over stations) per day of horizon.
pub fn ground_access_per_day(windows: &[AccessWindow], satellite_id: &str, grid: &TimeGrid) -> f64 {
    let mask = instant_mask(
        windows
            .iter()
            .filter(|w| w.kind == WindowKind::GroundContact && w.satellite_id == satellite_id),
        grid,
    );
    let contact_s = mask.iter().filter(|m| **m).count() as f64 * grid.step_s;
    contact_s / (grid.horizon_s() / SECONDS_PER_DAY)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcpMetrics {
    pub temporal_coverage_fraction: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub max_revisit_s: f64,
    pub required_revisit_s: f64,
    pub revisit_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatelliteMetrics {
    pub ground_access_s_per_day: f64,
    pub engagement_fraction: f64,
    pub downlink_sufficient: bool,
    pub storage_peak_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FederationMetrics {
    /// Share of DCPs whose own revisit requirement is met.
    pub dcp_coverage_fraction: f64,
    /// Mean of the per-DCP temporal coverage.
    pub mean_temporal_coverage: f64,
    pub dedicated_ground_stations: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureOfMeritReport {
    pub per_dcp: BTreeMap<String, DcpMetrics>,
    pub per_satellite: BTreeMap<String, SatelliteMetrics>,
    pub federation: FederationMetrics,
}

impl FigureOfMeritReport {
    /// Sum of per-DCP temporal coverage.
    pub fn total_temporal_coverage(&self) -> f64 {
        self.per_dcp.values().map(|d| d.temporal_coverage_fraction).sum()
    }
}

pub fn build_report(
    scenario: &Scenario,
    solution: &AccessSolution,
    sufficiency: &BTreeMap<String, bool>,
) -> FigureOfMeritReport {
    let grid = &scenario.grid;
    let per_dcp: BTreeMap<_, _> = scenario
        .dcps
        .iter()
        .map(|d| {
            let mask = dcp_mask(&solution.windows, &d.id, grid);
            let served = mask.iter().filter(|m| **m).count();
            let revisit = revisit_from_mask(&mask, grid.step_s);
            let metrics = DcpMetrics {
                temporal_coverage_fraction: if mask.is_empty() { 0.0 } else { served as f64 / mask.len() as f64 },
                max_revisit_s: revisit.max_revisit_s,
                required_revisit_s: d.required_revisit_s,
                revisit_ok: revisit.max_revisit_s <= d.required_revisit_s,
            };
            (d.id.clone(), metrics)
        })
        .collect();

    let per_satellite = scenario
        .satellites
        .iter()
        .map(|s| {
            let metrics = SatelliteMetrics {
                ground_access_s_per_day: ground_access_per_day(&solution.windows, &s.id, grid),
                engagement_fraction: s.engagement_fraction,
                downlink_sufficient: sufficiency.get(&s.id).copied().unwrap_or(true),
                storage_peak_bytes: solution.storage.get(&s.id).map_or(0, |t| t.peak_bytes()),
            };
            (s.id.clone(), metrics)
        })
        .collect();

    let total = per_dcp.len();
    let ok = per_dcp.values().filter(|d| d.revisit_ok).count();
    let federation = FederationMetrics {
        dcp_coverage_fraction: if total == 0 { 1.0 } else { ok as f64 / total as f64 },
        mean_temporal_coverage: if total == 0 {
            0.0
        } else {
            per_dcp.values().map(|d| d.temporal_coverage_fraction).sum::<f64>() / total as f64
        },
        dedicated_ground_stations: scenario.ground_stations.iter().filter(|g| g.federated).count() as u32,
    };

    FigureOfMeritReport {
        per_dcp,
        per_satellite,
        federation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtLeast,
    AtMost,
}

impl Direction {
    pub fn holds(self, observed: f64, threshold: f64) -> bool {
        match self {
            Direction::AtLeast => observed >= threshold,
            Direction::AtMost => observed <= threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    #[serde(serialize_with = "serialize_extended")]
    pub value: f64,
    pub unit: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplianceResult {
    pub rule: &'static str,
    pub subject: String,
    pub direction: Direction,
    pub threshold: Quantity,
    pub observed: Quantity,
    pub pass: bool,
}

pub mod rules {
    pub const DCP_COVERAGE: &str = "min_dcp_coverage_fraction";
    pub const ENGAGEMENT: &str = "min_engagement_fraction";
    pub const STORAGE: &str = "min_storage_bytes";
    pub const PEAK_POWER: &str = "max_peak_power_w";
    pub const REVISIT: &str = "max_revisit_s";
    pub const GROUND_ACCESS: &str = "min_ground_access_s_per_day";
    pub const DEDICATED_STATIONS: &str = "min_dedicated_ground_stations";
    pub const DOWNLINK: &str = "downlink_sufficiency";

    pub const ALL: [&str; 8] = [
        DCP_COVERAGE,
        ENGAGEMENT,
        STORAGE,
        PEAK_POWER,
        REVISIT,
        GROUND_ACCESS,
        DEDICATED_STATIONS,
        DOWNLINK,
    ];
}

fn result(
    rule: &'static str,
    subject: &str,
    direction: Direction,
    threshold: f64,
    observed: f64,
    unit: &'static str,
) -> ComplianceResult {
    ComplianceResult {
        rule,
        subject: subject.to_string(),
        direction,
        threshold: Quantity { value: threshold, unit },
        observed: Quantity { value: observed, unit },
        pass: direction.holds(observed, threshold),
    }
}

/// Checks the report against every federation rule.
///
/// The per-DCP revisit rule uses the federation-wide `max_revisit_s`; each
/// DCP's own `required_revisit_s` feeds the coverage rule through `revisit_ok`.
pub fn check_compliance(report: &FigureOfMeritReport, thresholds: &Thresholds, scenario: &Scenario) -> Vec<ComplianceResult> {
    use Direction::*;
    let mut out = vec![result(
        rules::DCP_COVERAGE,
        "federation",
        AtLeast,
        thresholds.min_dcp_coverage_fraction,
        report.federation.dcp_coverage_fraction,
        "fraction",
    )];
    for s in scenario.satellites.iter().filter(|s| !s.dedicated) {
        out.push(result(
            rules::ENGAGEMENT,
            &s.id,
            AtLeast,
            thresholds.min_engagement_fraction,
            s.engagement_fraction,
            "fraction",
        ));
    }
    for s in scenario.satellites.iter().filter(|s| s.access_mode == AccessMode::StoreAndForward) {
        out.push(result(
            rules::STORAGE,
            &s.id,
            AtLeast,
            thresholds.min_storage_bytes,
            s.storage_capacity_bytes as f64,
            "bytes",
        ));
    }
    for s in &scenario.satellites {
        out.push(result(rules::PEAK_POWER, &s.id, AtMost, thresholds.max_peak_power_w, s.peak_power_w, "W"));
    }
    for (id, d) in &report.per_dcp {
        out.push(result(rules::REVISIT, id, AtMost, thresholds.max_revisit_s, d.max_revisit_s, "s"));
    }
    for (id, s) in &report.per_satellite {
        out.push(result(
            rules::GROUND_ACCESS,
            id,
            AtLeast,
            thresholds.min_ground_access_s_per_day,
            s.ground_access_s_per_day,
            "s/day",
        ));
    }
    out.push(result(
        rules::DEDICATED_STATIONS,
        "federation",
        AtLeast,
        thresholds.min_dedicated_ground_stations as f64,
        report.federation.dedicated_ground_stations as f64,
        "count",
    ));
    for (id, s) in &report.per_satellite {
        out.push(result(
            rules::DOWNLINK,
            id,
            AtLeast,
            1.0,
            if s.downlink_sufficient { 1.0 } else { 0.0 },
            "bool",
        ));
    }
    out
}

/// Full pipeline output for one scenario.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub solution: AccessSolution,
    pub sufficiency: BTreeMap<String, bool>,
    pub report: FigureOfMeritReport,
    pub compliance: Vec<ComplianceResult>,
}

impl Evaluation {
    pub fn compliant(&self) -> bool {
        self.compliance.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<ComplianceResult> {
        self.compliance.iter().filter(|c| !c.pass).cloned().collect()
    }
}

/// Propagate, solve access, simulate storage, measure and check.
pub fn evaluate(scenario: &Scenario) -> Result<Evaluation> {
    let table = VisibilityTable::compute(scenario)?;
    evaluate_with(scenario, &table)
}

/// [`evaluate`] with precomputed geometry; the table grid must be `scenario.grid`.
pub fn evaluate_with(scenario: &Scenario, table: &VisibilityTable) -> Result<Evaluation> {
    let solution = solve(scenario, table)?;
    let sufficiency = downlink_sufficiency(scenario, &solution.windows, &solution.storage);
    let report = build_report(scenario, &solution, &sufficiency);
    let compliance = check_compliance(&report, &scenario.thresholds, scenario);
    Ok(Evaluation {
        solution,
        sufficiency,
        report,
        compliance,
    })
}

#[derive(Serialize)]
struct MetricsDocument<'a> {
    #[serde(flatten)]
    report: &'a FigureOfMeritReport,
    compliance: &'a [ComplianceResult],
}

/// Report plus compliance results as pretty JSON.
pub fn metrics_json(report: &FigureOfMeritReport, compliance: &[ComplianceResult]) -> String {
    let mut text = serde_json::to_string_pretty(&MetricsDocument { report, compliance }).expect("report serializes");
    text.push('\n');
    text
}

pub fn write_per_dcp_csv<W: Write>(out: W, report: &FigureOfMeritReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "dcp_id",
        "temporal_coverage_fraction",
        "max_revisit_s",
        "required_revisit_s",
        "revisit_ok",
    ])?;
    for (id, d) in &report.per_dcp {
        w.write_record([
            id.as_str(),
            &format!("{:.6}", d.temporal_coverage_fraction),
            &fmt_extended(d.max_revisit_s),
            &format!("{:.3}", d.required_revisit_s),
            if d.revisit_ok { "true" } else { "false" },
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_per_satellite_csv<W: Write>(out: W, report: &FigureOfMeritReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "satellite_id",
        "ground_access_s_per_day",
        "engagement_fraction",
        "downlink_sufficient",
        "storage_peak_bytes",
    ])?;
    for (id, s) in &report.per_satellite {
        w.write_record([
            id.as_str(),
            &format!("{:.3}", s.ground_access_s_per_day),
            &format!("{:.6}", s.engagement_fraction),
            if s.downlink_sufficient { "true" } else { "false" },
            &s.storage_peak_bytes.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One line per rule: `PASS rule subject observed unit (<=|>=) threshold unit`.
pub fn compliance_table(compliance: &[ComplianceResult]) -> String {
    let mut out = String::new();
    for c in compliance {
        let op = match c.direction {
            Direction::AtLeast => ">=",
            Direction::AtMost => "<=",
        };
        out.push_str(&format!(
            "{} {:<30} {:<16} {} {} {} {} {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.rule,
            c.subject,
            fmt_extended(c.observed.value),
            c.observed.unit,
            op,
            fmt_extended(c.threshold.value),
            c.threshold.unit,
        ));
    }
    out
}
