//! Federation data model and the JSON scenario format.
//!
//! In files, angles are degrees, distances km, data sizes bytes, rates bit/s
//! and times seconds. In memory, angles are radians.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FieldOfView, GroundPoint};
use crate::grid::TimeGrid;
use crate::orbit::OrbitalElements;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessMode {
    /// Real-time relay; the DCP and a ground station must be in view together.
    BentPipe,
    /// Onboard buffering with later downlink, bounded by storage capacity.
    StoreAndForward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Satellite {
    pub id: String,
    pub owner: String,
    pub elements: OrbitalElements<f64>,
    pub fov_dcp: FieldOfView<f64>,
    pub fov_ground: FieldOfView<f64>,
    pub access_mode: AccessMode,
    pub storage_capacity_bytes: u64,
    pub downlink_rate_bps: f64,
    pub dcp_uplink_rate_bps: f64,
    /// Whether the data-collection payload is the satellite's primary mission.
    pub dedicated: bool,
    /// Share of every planning period the hosted payload serves the federation.
    pub engagement_fraction: f64,
    /// Offset of the engagement duty cycle within the planning period.
    pub duty_phase_s: f64,
    pub peak_power_w: f64,
}

impl Satellite {
    /// Duty cycle: engaged for the first `engagement_fraction` of every
    /// planning period, shifted by `duty_phase_s`.
    pub fn is_engaged(&self, time_s: f64, planning_period_s: f64) -> bool {
        if self.engagement_fraction >= 1.0 {
            return true;
        }
        let into_period = (time_s - self.duty_phase_s).rem_euclid(planning_period_s);
        into_period < self.engagement_fraction * planning_period_s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataCollectionPlatform {
    pub id: String,
    pub location: GroundPoint<f64>,
    /// Data offered on each distinct access window.
    pub data_per_pass_bytes: u64,
    pub required_revisit_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStation {
    pub id: String,
    pub location: GroundPoint<f64>,
    pub min_elevation_rad: f64,
    /// Able to command the hosted payload.
    pub federated: bool,
}

/// Admission and compliance thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub min_dcp_coverage_fraction: f64,
    pub min_engagement_fraction: f64,
    pub min_storage_bytes: f64,
    pub max_peak_power_w: f64,
    pub max_revisit_s: f64,
    pub min_ground_access_s_per_day: f64,
    pub min_dedicated_ground_stations: u32,
    pub planning_period_s: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            min_dcp_coverage_fraction: 0.90,
            min_engagement_fraction: 0.10,
            min_storage_bytes: 2e9,
            max_peak_power_w: 2.0,
            max_revisit_s: 86_400.0,
            min_ground_access_s_per_day: 600.0,
            min_dedicated_ground_stations: 1,
            planning_period_s: 86_400.0,
        }
    }
}

pub const DEFAULT_REQUIRED_REVISIT_S: f64 = 3600.0;
pub const DEFAULT_DCP_MIN_ELEVATION_DEG: f64 = 0.0;
pub const DEFAULT_GROUND_MIN_ELEVATION_DEG: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub satellites: Vec<Satellite>,
    pub dcps: Vec<DataCollectionPlatform>,
    pub ground_stations: Vec<GroundStation>,
    pub grid: TimeGrid,
    pub thresholds: Thresholds,
}

impl Scenario {
    pub fn satellite(&self, id: &str) -> Option<&Satellite> {
        self.satellites.iter().find(|s| s.id == id)
    }

    pub fn dcp(&self, id: &str) -> Option<&DataCollectionPlatform> {
        self.dcps.iter().find(|d| d.id == id)
    }

    /// Copy with `id` removed.
    pub fn without_satellite(&self, id: &str) -> Scenario {
        let mut out = self.clone();
        out.satellites.retain(|s| s.id != id);
        out
    }

    pub fn with_satellite(&self, satellite: Satellite) -> Scenario {
        let mut out = self.clone();
        out.satellites.push(satellite);
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes");
        text.push('\n');
        text
    }
}

/// A broken invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub subject: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.rule, self.subject)
    }
}

/// Every rule `validate_scenario` can report.
pub const VALIDATION_RULES: &[&str] = &[
    "elements_finite",
    "eccentricity_range",
    "perigee_above_surface",
    "angles_normalized",
    "fov_range",
    "bent_pipe_storage",
    "dedicated_engagement",
    "engagement_range",
    "duty_phase_finite",
    "rates_positive",
    "peak_power_nonnegative",
    "duplicate_id",
    "location_range",
    "required_revisit_positive",
    "station_elevation_range",
    "grid_valid",
    "thresholds_positive",
    "threshold_fraction_range",
    "ground_station_required",
];

/// Lists every broken invariant; empty means valid.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |rule: &'static str, subject: &str| {
        out.push(Violation {
            rule,
            subject: subject.to_string(),
        })
    };

    let mut seen = HashSet::new();
    for sat in &s.satellites {
        if !seen.insert(sat.id.as_str()) {
            push("duplicate_id", &sat.id);
        }
        for rule in sat.elements.violations() {
            push(rule, &sat.id);
        }
        if !sat.fov_dcp.is_valid() || !sat.fov_ground.is_valid() {
            push("fov_range", &sat.id);
        }
        if sat.access_mode == AccessMode::BentPipe && sat.storage_capacity_bytes != 0 {
            push("bent_pipe_storage", &sat.id);
        }
        if !(0.0..=1.0).contains(&sat.engagement_fraction) {
            push("engagement_range", &sat.id);
        } else if sat.dedicated && sat.engagement_fraction != 1.0 {
            push("dedicated_engagement", &sat.id);
        }
        if !sat.duty_phase_s.is_finite() {
            push("duty_phase_finite", &sat.id);
        }
        if !(sat.downlink_rate_bps > 0.0 && sat.dcp_uplink_rate_bps > 0.0)
            || !sat.downlink_rate_bps.is_finite()
            || !sat.dcp_uplink_rate_bps.is_finite()
        {
            push("rates_positive", &sat.id);
        }
        if !(sat.peak_power_w >= 0.0) {
            push("peak_power_nonnegative", &sat.id);
        }
    }

    let mut seen = HashSet::new();
    for dcp in &s.dcps {
        if !seen.insert(dcp.id.as_str()) {
            push("duplicate_id", &dcp.id);
        }
        if !dcp.location.is_valid() {
            push("location_range", &dcp.id);
        }
        if !(dcp.required_revisit_s > 0.0) {
            push("required_revisit_positive", &dcp.id);
        }
    }

    let mut seen = HashSet::new();
    for gs in &s.ground_stations {
        if !seen.insert(gs.id.as_str()) {
            push("duplicate_id", &gs.id);
        }
        if !gs.location.is_valid() {
            push("location_range", &gs.id);
        }
        if !(gs.min_elevation_rad >= 0.0 && gs.min_elevation_rad < std::f64::consts::FRAC_PI_2) {
            push("station_elevation_range", &gs.id);
        }
    }
    if s.ground_stations.is_empty() {
        push("ground_station_required", "ground_stations");
    }

    if !s.grid.is_valid() {
        push("grid_valid", "grid");
    }

    let t = &s.thresholds;
    let positive = [
        t.min_dcp_coverage_fraction,
        t.min_engagement_fraction,
        t.min_storage_bytes,
        t.max_peak_power_w,
        t.max_revisit_s,
        t.min_ground_access_s_per_day,
        t.min_dedicated_ground_stations as f64,
        t.planning_period_s,
    ];
    if !positive.iter().all(|v| *v > 0.0 && v.is_finite()) {
        push("thresholds_positive", "thresholds");
    }
    if t.min_dcp_coverage_fraction > 1.0 || t.min_engagement_fraction > 1.0 {
        push("threshold_fraction_range", "thresholds");
    }
    out
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = read(path)?;
    parse_scenario(&text, path)
}

/// Parses and validates scenario JSON; `origin` only labels diagnostics.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    let scenario = Scenario::from(file);
    let violations = validate_scenario(&scenario);
    if violations.is_empty() {
        Ok(scenario)
    } else {
        Err(Error::Validation(violations))
    }
}

/// Reads a single satellite object (same schema as a `satellites` entry).
pub fn load_satellite(path: impl AsRef<Path>) -> Result<Satellite> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: SatelliteFile = serde_json::from_str(&text).map_err(|e| parse_error(path, e))?;
    Ok(Satellite::from(file))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, e: serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

// On-disk representation.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub satellites: Vec<SatelliteFile>,
    pub dcps: Vec<DcpFile>,
    pub ground_stations: Vec<GroundStationFile>,
    pub grid: GridFile,
    #[serde(default)]
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementsFile {
    pub semi_major_axis_km: f64,
    pub eccentricity: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub arg_perigee_deg: f64,
    pub mean_anomaly_deg: f64,
    #[serde(default)]
    pub epoch_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FovFile {
    pub half_angle_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_elevation_deg: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteFile {
    pub id: String,
    #[serde(default)]
    pub owner: String,
    pub elements: ElementsFile,
    pub fov_dcp: FovFile,
    pub fov_ground: FovFile,
    pub access_mode: AccessMode,
    #[serde(default)]
    pub storage_capacity_bytes: u64,
    pub downlink_rate_bps: f64,
    pub dcp_uplink_rate_bps: f64,
    pub dedicated: bool,
    pub engagement_fraction: f64,
    #[serde(default)]
    pub duty_phase_s: f64,
    pub peak_power_w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcpFile {
    pub id: String,
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub data_per_pass_bytes: u64,
    #[serde(default = "default_revisit")]
    pub required_revisit_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStationFile {
    pub id: String,
    pub lat_deg: f64,
    pub lon_deg: f64,
    #[serde(default = "default_station_elevation")]
    pub min_elevation_deg: f64,
    #[serde(default)]
    pub federated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    #[serde(default)]
    pub start_s: f64,
    pub end_s: f64,
    #[serde(default = "default_step")]
    pub step_s: f64,
}

fn default_revisit() -> f64 {
    DEFAULT_REQUIRED_REVISIT_S
}

fn default_station_elevation() -> f64 {
    DEFAULT_GROUND_MIN_ELEVATION_DEG
}

fn default_step() -> f64 {
    TimeGrid::DEFAULT_STEP_S
}

fn fov_from_file(f: FovFile, default_min_elevation_deg: f64) -> FieldOfView<f64> {
    FieldOfView {
        half_angle_rad: f.half_angle_deg.to_radians(),
        min_elevation_rad: f.min_elevation_deg.unwrap_or(default_min_elevation_deg).to_radians(),
    }
}

fn fov_to_file(f: &FieldOfView<f64>) -> FovFile {
    FovFile {
        half_angle_deg: f.half_angle_rad.to_degrees(),
        min_elevation_deg: Some(f.min_elevation_rad.to_degrees()),
    }
}

impl From<SatelliteFile> for Satellite {
    fn from(f: SatelliteFile) -> Self {
        let e = f.elements;
        let elements = OrbitalElements {
            semi_major_axis_km: e.semi_major_axis_km,
            eccentricity: e.eccentricity,
            inclination_rad: e.inclination_deg.to_radians(),
            raan_rad: e.raan_deg.to_radians(),
            arg_perigee_rad: e.arg_perigee_deg.to_radians(),
            mean_anomaly_epoch_rad: e.mean_anomaly_deg.to_radians(),
            epoch_s: e.epoch_s,
        }
        .normalized();
        Satellite {
            id: f.id,
            owner: f.owner,
            elements,
            fov_dcp: fov_from_file(f.fov_dcp, DEFAULT_DCP_MIN_ELEVATION_DEG),
            fov_ground: fov_from_file(f.fov_ground, DEFAULT_GROUND_MIN_ELEVATION_DEG),
            access_mode: f.access_mode,
            storage_capacity_bytes: f.storage_capacity_bytes,
            downlink_rate_bps: f.downlink_rate_bps,
            dcp_uplink_rate_bps: f.dcp_uplink_rate_bps,
            dedicated: f.dedicated,
            engagement_fraction: f.engagement_fraction,
            duty_phase_s: f.duty_phase_s,
            peak_power_w: f.peak_power_w,
        }
    }
}

impl From<&Satellite> for SatelliteFile {
    fn from(s: &Satellite) -> Self {
        let e = &s.elements;
        SatelliteFile {
            id: s.id.clone(),
            owner: s.owner.clone(),
            elements: ElementsFile {
                semi_major_axis_km: e.semi_major_axis_km,
                eccentricity: e.eccentricity,
                inclination_deg: e.inclination_rad.to_degrees(),
                raan_deg: e.raan_rad.to_degrees(),
                arg_perigee_deg: e.arg_perigee_rad.to_degrees(),
                mean_anomaly_deg: e.mean_anomaly_epoch_rad.to_degrees(),
                epoch_s: e.epoch_s,
            },
            fov_dcp: fov_to_file(&s.fov_dcp),
            fov_ground: fov_to_file(&s.fov_ground),
            access_mode: s.access_mode,
            storage_capacity_bytes: s.storage_capacity_bytes,
            downlink_rate_bps: s.downlink_rate_bps,
            dcp_uplink_rate_bps: s.dcp_uplink_rate_bps,
            dedicated: s.dedicated,
            engagement_fraction: s.engagement_fraction,
            duty_phase_s: s.duty_phase_s,
            peak_power_w: s.peak_power_w,
        }
    }
}

impl From<ScenarioFile> for Scenario {
    fn from(f: ScenarioFile) -> Self {
        Scenario {
            satellites: f.satellites.into_iter().map(Satellite::from).collect(),
            dcps: f
                .dcps
                .into_iter()
                .map(|d| DataCollectionPlatform {
                    id: d.id,
                    location: GroundPoint::from_degrees(d.lat_deg, d.lon_deg),
                    data_per_pass_bytes: d.data_per_pass_bytes,
                    required_revisit_s: d.required_revisit_s,
                })
                .collect(),
            ground_stations: f
                .ground_stations
                .into_iter()
                .map(|g| GroundStation {
                    id: g.id,
                    location: GroundPoint::from_degrees(g.lat_deg, g.lon_deg),
                    min_elevation_rad: g.min_elevation_deg.to_radians(),
                    federated: g.federated,
                })
                .collect(),
            grid: TimeGrid {
                start_s: f.grid.start_s,
                end_s: f.grid.end_s,
                step_s: f.grid.step_s,
            },
            thresholds: f.thresholds,
        }
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            satellites: s.satellites.iter().map(SatelliteFile::from).collect(),
            dcps: s
                .dcps
                .iter()
                .map(|d| DcpFile {
                    id: d.id.clone(),
                    lat_deg: d.location.lat_rad.to_degrees(),
                    lon_deg: d.location.lon_rad.to_degrees(),
                    data_per_pass_bytes: d.data_per_pass_bytes,
                    required_revisit_s: d.required_revisit_s,
                })
                .collect(),
            ground_stations: s
                .ground_stations
                .iter()
                .map(|g| GroundStationFile {
                    id: g.id.clone(),
                    lat_deg: g.location.lat_rad.to_degrees(),
                    lon_deg: g.location.lon_rad.to_degrees(),
                    min_elevation_deg: g.min_elevation_rad.to_degrees(),
                    federated: g.federated,
                })
                .collect(),
            grid: GridFile {
                start_s: s.grid.start_s,
                end_s: s.grid.end_s,
                step_s: s.grid.step_s,
            },
            thresholds: s.thresholds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
      "satellites": [{
        "id": "SAT-1",
        "elements": {"semi_major_axis_km": 7000, "eccentricity": 0.001, "inclination_deg": 25,
                     "raan_deg": 0, "arg_perigee_deg": 0, "mean_anomaly_deg": 0},
        "fov_dcp": {"half_angle_deg": 60},
        "fov_ground": {"half_angle_deg": 60},
        "access_mode": "store_and_forward",
        "storage_capacity_bytes": 2000000000,
        "downlink_rate_bps": 1e6,
        "dcp_uplink_rate_bps": 4e5,
        "dedicated": true,
        "engagement_fraction": 1.0,
        "peak_power_w": 1.5
      }],
      "dcps": [{"id": "DCP-1", "lat_deg": -10, "lon_deg": -50, "data_per_pass_bytes": 1000}],
      "ground_stations": [{"id": "GS-1", "lat_deg": -15.5, "lon_deg": -56, "federated": true}],
      "grid": {"end_s": 3600}
    }"#;

    fn minimal() -> Scenario {
        parse_scenario(MINIMAL, Path::new("minimal.json")).unwrap()
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let s = minimal();
        assert_eq!(s.thresholds, Thresholds::default());
        assert_eq!(s.grid.step_s, 10.0);
        assert_eq!(s.grid.start_s, 0.0);
        assert_eq!(s.dcps[0].required_revisit_s, 3600.0);
        assert_eq!(s.satellites[0].fov_dcp.min_elevation_rad, 0.0);
        assert!((s.satellites[0].fov_ground.min_elevation_rad - 5f64.to_radians()).abs() < 1e-15);
        assert!((s.ground_stations[0].min_elevation_rad - 5f64.to_radians()).abs() < 1e-15);
        assert!(validate_scenario(&s).is_empty());
    }

    #[test]
    fn eccentricity_violation_names_satellite() {
        let text = MINIMAL.replace("\"eccentricity\": 0.001", "\"eccentricity\": 1.2");
        match parse_scenario(&text, Path::new("bad.json")) {
            Err(Error::Validation(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].rule, "eccentricity_range");
                assert_eq!(v[0].subject, "SAT-1");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn parse_error_has_position() {
        let text = MINIMAL.replace("\"dcps\"", "\"dcps\" oops");
        match parse_scenario(&text, Path::new("broken.json")) {
            Err(Error::Parse { line, .. }) => assert!(line > 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        let unknown = MINIMAL.replace("\"grid\": {\"end_s\": 3600}", "\"grid\": {\"end_s\": 3600, \"stp\": 1}");
        assert!(matches!(parse_scenario(&unknown, Path::new("x")), Err(Error::Parse { .. })));
    }

    #[test]
    fn bent_pipe_with_storage_is_one_violation() {
        let mut s = minimal();
        s.satellites[0].access_mode = AccessMode::BentPipe;
        s.satellites[0].storage_capacity_bytes = 1_000_000_000;
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "bent_pipe_storage");
    }

    #[test]
    fn dedicated_with_partial_engagement_is_one_violation() {
        let mut s = minimal();
        s.satellites[0].engagement_fraction = 0.5;
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "dedicated_engagement");
    }

    /// Each rule in `VALIDATION_RULES` fires for at least one mutation.
    #[test]
    fn every_rule_is_reachable() {
        type Mutation = fn(&mut Scenario);
        let mutations: Vec<Mutation> = vec![
            |s| s.satellites[0].elements.semi_major_axis_km = f64::NAN,
            |s| s.satellites[0].elements.eccentricity = -0.1,
            |s| s.satellites[0].elements.semi_major_axis_km = 6000.0,
            |s| s.satellites[0].elements.raan_rad = 7.0,
            |s| s.satellites[0].fov_dcp.half_angle_rad = 2.0,
            |s| {
                s.satellites[0].access_mode = AccessMode::BentPipe;
                s.satellites[0].storage_capacity_bytes = 5;
            },
            |s| s.satellites[0].engagement_fraction = 0.5,
            |s| s.satellites[0].engagement_fraction = 1.5,
            |s| s.satellites[0].duty_phase_s = f64::INFINITY,
            |s| s.satellites[0].downlink_rate_bps = 0.0,
            |s| s.satellites[0].peak_power_w = -1.0,
            |s| {
                let dup = s.dcps[0].clone();
                s.dcps.push(dup)
            },
            |s| s.dcps[0].location.lat_rad = 3.0,
            |s| s.dcps[0].required_revisit_s = 0.0,
            |s| s.ground_stations[0].min_elevation_rad = -0.1,
            |s| s.grid.step_s = 0.0,
            |s| s.thresholds.planning_period_s = 0.0,
            |s| s.thresholds.min_dcp_coverage_fraction = 1.5,
            |s| s.ground_stations.clear(),
        ];
        let mut reached = HashSet::new();
        for m in mutations {
            let mut s = minimal();
            m(&mut s);
            for v in validate_scenario(&s) {
                reached.insert(v.rule);
            }
        }
        for rule in VALIDATION_RULES {
            assert!(reached.contains(rule), "rule {rule} never fired");
        }
    }

    #[test]
    fn duty_cycle_is_first_fraction_of_period() {
        let mut sat = minimal().satellites.remove(0);
        sat.dedicated = false;
        sat.engagement_fraction = 0.25;
        assert!(sat.is_engaged(0.0, 100.0));
        assert!(sat.is_engaged(24.9, 100.0));
        assert!(!sat.is_engaged(25.0, 100.0));
        assert!(sat.is_engaged(100.0, 100.0));
        sat.duty_phase_s = 50.0;
        assert!(!sat.is_engaged(0.0, 100.0));
        assert!(sat.is_engaged(60.0, 100.0));
        assert!(!sat.is_engaged(75.0, 100.0));
    }
}
