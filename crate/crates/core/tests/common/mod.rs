#![allow(dead_code)]

pub mod twobody;

use std::path::PathBuf;

use fedsat::geometry::{FieldOfView, GroundPoint};
use fedsat::orbit::OrbitalElements;
use fedsat::{AccessMode, DataCollectionPlatform, GroundStation, Satellite, Scenario, Thresholds, TimeGrid};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const GEO_KM: f64 = 42_164.17;

pub fn shipped(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(relative)
}

pub fn elements(a: f64, e: f64, inc_deg: f64, raan_deg: f64, argp_deg: f64, ma_deg: f64) -> OrbitalElements<f64> {
    OrbitalElements {
        semi_major_axis_km: a,
        eccentricity: e,
        inclination_rad: inc_deg.to_radians(),
        raan_rad: raan_deg.to_radians(),
        arg_perigee_rad: argp_deg.to_radians(),
        mean_anomaly_epoch_rad: ma_deg.to_radians(),
        epoch_s: 0.0,
    }
    .normalized()
}

pub fn fov(half_deg: f64, min_el_deg: f64) -> FieldOfView<f64> {
    FieldOfView {
        half_angle_rad: half_deg.to_radians(),
        min_elevation_rad: min_el_deg.to_radians(),
    }
}

pub fn satellite(id: &str, elements: OrbitalElements<f64>, mode: AccessMode) -> Satellite {
    Satellite {
        id: id.to_string(),
        owner: String::new(),
        elements,
        fov_dcp: fov(62.0, 0.0),
        fov_ground: fov(62.0, 5.0),
        access_mode: mode,
        storage_capacity_bytes: match mode {
            AccessMode::BentPipe => 0,
            AccessMode::StoreAndForward => 2_000_000_000,
        },
        downlink_rate_bps: 1.0e6,
        dcp_uplink_rate_bps: 400.0,
        dedicated: true,
        engagement_fraction: 1.0,
        duty_phase_s: 0.0,
        peak_power_w: 2.0,
    }
}

pub fn leo(id: &str, a: f64, inc_deg: f64, raan_deg: f64, ma_deg: f64, mode: AccessMode) -> Satellite {
    satellite(id, elements(a, 0.001, inc_deg, raan_deg, 0.0, ma_deg), mode)
}

/// Bent-pipe geostationary satellite over `lon_deg` with an Earth-disc cone.
pub fn geo(id: &str, lon_deg: f64) -> Satellite {
    let mut s = satellite(id, elements(GEO_KM, 0.0, 0.0, 0.0, 0.0, lon_deg), AccessMode::BentPipe);
    s.fov_dcp = fov(8.7, 0.0);
    s.fov_ground = fov(8.7, 5.0);
    s
}

pub fn dcp(id: &str, lat_deg: f64, lon_deg: f64) -> DataCollectionPlatform {
    DataCollectionPlatform {
        id: id.to_string(),
        location: GroundPoint::from_degrees(lat_deg, lon_deg),
        data_per_pass_bytes: 32_000,
        required_revisit_s: 3600.0,
    }
}

pub fn station(id: &str, lat_deg: f64, lon_deg: f64) -> GroundStation {
    GroundStation {
        id: id.to_string(),
        location: GroundPoint::from_degrees(lat_deg, lon_deg),
        min_elevation_rad: 5.0_f64.to_radians(),
        federated: true,
    }
}

pub fn scenario(
    satellites: Vec<Satellite>,
    dcps: Vec<DataCollectionPlatform>,
    ground_stations: Vec<GroundStation>,
    end_s: f64,
    step_s: f64,
) -> Scenario {
    Scenario {
        satellites,
        dcps,
        ground_stations,
        grid: TimeGrid::new(end_s, step_s),
        thresholds: Thresholds::default(),
    }
}

/// Random low orbit; DCP/station sites are drawn from a band the orbits reach.
pub fn random_leo(rng: &mut ChaCha8Rng, id: &str, mode: AccessMode) -> Satellite {
    let mut s = satellite(
        id,
        elements(
            rng.gen_range(6_800.0..7_600.0),
            rng.gen_range(0.0..0.02),
            rng.gen_range(0.0..100.0),
            rng.gen_range(0.0..360.0),
            rng.gen_range(0.0..360.0),
            rng.gen_range(0.0..360.0),
        ),
        mode,
    );
    s.fov_dcp = fov(rng.gen_range(40.0..66.0), 0.0);
    s.fov_ground = fov(rng.gen_range(40.0..66.0), 5.0);
    s
}

pub fn random_site(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.gen_range(-40.0..40.0), rng.gen_range(-180.0..180.0))
}

/// `n_sat` satellites, `n_dcp` DCPs, `n_gs` stations over `end_s` seconds.
pub fn random_scenario(
    rng: &mut ChaCha8Rng,
    n_sat: usize,
    n_dcp: usize,
    n_gs: usize,
    mode: AccessMode,
    end_s: f64,
    step_s: f64,
) -> Scenario {
    let sats = (0..n_sat).map(|k| random_leo(rng, &format!("SAT-{k}"), mode)).collect();
    let dcps = (0..n_dcp)
        .map(|k| {
            let (lat, lon) = random_site(rng);
            dcp(&format!("DCP-{k}"), lat, lon)
        })
        .collect();
    let stations = (0..n_gs)
        .map(|k| {
            let (lat, lon) = random_site(rng);
            station(&format!("GS-{k}"), lat, lon)
        })
        .collect();
    scenario(sats, dcps, stations, end_s, step_s)
}

pub fn with_mode(s: &Scenario, mode: AccessMode, capacity: u64) -> Scenario {
    let mut out = s.clone();
    for sat in &mut out.satellites {
        sat.access_mode = mode;
        sat.storage_capacity_bytes = match mode {
            AccessMode::BentPipe => 0,
            AccessMode::StoreAndForward => capacity,
        };
    }
    out
}

/// Windows rebuilt from the per-instant predicate, one call per grid instant.
///
/// Store-and-forward occupancy at each step is read from `storage`.
pub fn brute_force_windows(
    scenario: &Scenario,
    storage: &std::collections::BTreeMap<String, fedsat::StorageTimeline>,
) -> Vec<fedsat::AccessWindow> {
    use fedsat::access::{instant_solutions, sort_windows, Occupancy, TargetKind};
    use fedsat::{AccessWindow, WindowKind};
    use std::collections::BTreeMap;

    let grid = &scenario.grid;
    let mut open: BTreeMap<(String, String), (f64, WindowKind)> = BTreeMap::new();
    let mut out = Vec::new();
    let mut seen: BTreeMap<(String, String), WindowKind> = BTreeMap::new();
    for k in 0..=grid.count() {
        let mut satisfied = BTreeMap::new();
        if k < grid.count() {
            let occupancy: Occupancy = storage.iter().map(|(id, t)| (id.clone(), t.occupancy_before(k))).collect();
            for s in instant_solutions(scenario, grid.instant(k), &occupancy).unwrap() {
                let mode = scenario.satellite(&s.satellite_id).unwrap().access_mode;
                let kind = match (s.target_kind, mode) {
                    (TargetKind::GroundStation, _) => WindowKind::GroundContact,
                    (TargetKind::Dcp, AccessMode::BentPipe) => WindowKind::SimultaneousContact,
                    (TargetKind::Dcp, AccessMode::StoreAndForward) => WindowKind::DcpContact,
                };
                let key = (s.satellite_id, s.target_id);
                seen.insert(key.clone(), kind);
                satisfied.insert(key, s.satisfied);
            }
        }
        for (key, kind) in &seen {
            let now = satisfied.get(key).copied().unwrap_or(false);
            match (open.get(key).copied(), now) {
                (None, true) => {
                    open.insert(key.clone(), (grid.instant(k), *kind));
                }
                (Some((start, kind)), false) => {
                    out.push(AccessWindow {
                        satellite_id: key.0.clone(),
                        target_id: key.1.clone(),
                        kind,
                        start_s: start,
                        end_s: grid.instant(k),
                    });
                    open.remove(key);
                }
                _ => {}
            }
        }
    }
    sort_windows(&mut out);
    out
}

/// Objective recomputed from raw per-DCP numbers: (share of DCPs meeting
/// their revisit requirement, summed temporal coverage).
pub fn oracle_objective(report: &fedsat::FigureOfMeritReport) -> (f64, f64) {
    let n = report.per_dcp.len();
    let ok = report.per_dcp.values().filter(|d| d.max_revisit_s <= d.required_revisit_s).count();
    let share = if n == 0 { 1.0 } else { ok as f64 / n as f64 };
    (share, report.per_dcp.values().map(|d| d.temporal_coverage_fraction).sum())
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Best objective over every single-satellite removal, each run from scratch.
pub fn retirement_oracle(s: &Scenario) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for sat in &s.satellites {
        let o = oracle_objective(&fedsat::evaluate(&s.without_satellite(&sat.id)).unwrap().report);
        if better(o, best) {
            best = o;
        }
    }
    best
}

/// Best objective over every duty-phase assignment of the survivors, each
/// evaluated from scratch on the horizon after the next planning boundary.
pub fn reconfiguration_oracle(s: &Scenario, failed_id: &str, fault_time_s: f64) -> (f64, f64) {
    let period = s.thresholds.planning_period_s;
    let boundary = ((fault_time_s / period).floor() + 1.0) * period;
    let mut base = s.without_satellite(failed_id);
    base.grid.start_s = boundary;
    let movable: Vec<usize> = base
        .satellites
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.dedicated && x.engagement_fraction < 1.0)
        .map(|(i, _)| i)
        .collect();
    let mut best = oracle_objective(&fedsat::evaluate(&base).unwrap().report);
    for code in 0..8usize.pow(movable.len() as u32) {
        let mut trial = base.clone();
        let mut c = code;
        for &i in movable.iter().rev() {
            trial.satellites[i].duty_phase_s = (c % 8) as f64 * period / 8.0;
            c /= 8;
        }
        let o = oracle_objective(&fedsat::evaluate(&trial).unwrap().report);
        if better(o, best) {
            best = o;
        }
    }
    best
}

pub fn non_dedicated(mut s: Satellite, engagement: f64, phase_s: f64) -> Satellite {
    s.dedicated = false;
    s.engagement_fraction = engagement;
    s.duty_phase_s = phase_s;
    s
}
