//! Time-indexed access constraint solving.
//!
//! Every grid instant gets a satisfied/unsatisfied solution per
//! (satellite, target) pair. Maximal runs of satisfied instants become
//! [`AccessWindow`]s. Store-and-forward satellites couple the DCP predicate to
//! onboard storage, so windows and storage are produced by one sequential
//! pass per satellite; [`simulate_store_and_forward`] replays the same ledger
//! from windows alone.
//!
//! Per step, a store-and-forward satellite first ingests from every DCP in
//! contact, then drains toward the ground if any station is in contact.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{central_angle, in_fov_at, GroundPoint};
use crate::grid::TimeGrid;
use crate::orbit::{ground_track, orbital_period, propagate_to};
use crate::scenario::{AccessMode, Satellite, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Dcp,
    GroundStation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// Store-and-forward satellite collecting from a DCP.
    DcpContact,
    /// Any satellite in view of a ground station.
    GroundContact,
    /// Bent-pipe satellite seeing a DCP and some ground station at once.
    SimultaneousContact,
}

impl WindowKind {
    pub fn target_kind(self) -> TargetKind {
        match self {
            WindowKind::GroundContact => TargetKind::GroundStation,
            WindowKind::DcpContact | WindowKind::SimultaneousContact => TargetKind::Dcp,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WindowKind::DcpContact => "dcp_contact",
            WindowKind::GroundContact => "ground_contact",
            WindowKind::SimultaneousContact => "simultaneous_contact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstantSolution {
    pub time_s: f64,
    pub satellite_id: String,
    pub target_id: String,
    pub target_kind: TargetKind,
    pub satisfied: bool,
}

/// Half-open interval `[start_s, end_s)` covering a maximal run of satisfied
/// instants; `end_s` is the last satisfied instant plus one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessWindow {
    pub satellite_id: String,
    pub target_id: String,
    pub kind: WindowKind,
    pub start_s: f64,
    pub end_s: f64,
}

impl AccessWindow {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }

    /// Grid indices `[first, last]` covered by this window.
    pub fn index_range(&self, grid: &TimeGrid) -> (usize, usize) {
        let first = ((self.start_s - grid.start_s) / grid.step_s).round() as usize;
        let last = ((self.end_s - grid.start_s) / grid.step_s).round() as usize - 1;
        (first, last)
    }
}

/// Onboard storage history of one store-and-forward satellite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StorageTimeline {
    pub satellite_id: String,
    pub capacity_bytes: u64,
    pub initial_bytes: u64,
    /// Occupancy after each grid instant's ingest and drain.
    pub occupancy_bytes: Vec<u64>,
    /// Bytes ingested at each grid instant.
    pub ingested_bytes: Vec<u64>,
    pub collected_bytes_total: u64,
    pub downlinked_bytes_total: u64,
    /// Pass data still pending when a DCP contact closed on full storage.
    pub dropped_bytes_total: u64,
}

impl StorageTimeline {
    /// Occupancy at the start of step `index`.
    pub fn occupancy_before(&self, index: usize) -> u64 {
        if index == 0 {
            self.initial_bytes
        } else {
            self.occupancy_bytes[index - 1]
        }
    }

    pub fn peak_bytes(&self) -> u64 {
        self.occupancy_bytes.iter().copied().max().unwrap_or(self.initial_bytes)
    }

    pub fn final_bytes(&self) -> u64 {
        self.occupancy_bytes.last().copied().unwrap_or(self.initial_bytes)
    }
}

/// Occupancy per satellite id at the start of a step; absent ids are empty.
pub type Occupancy = BTreeMap<String, u64>;

/// Per-instant DCP predicate for a satellite.
#[inline]
fn dcp_satisfied(mode: AccessMode, dcp_in_view: bool, any_ground: bool, engaged: bool, free_bytes: u64) -> bool {
    match mode {
        AccessMode::BentPipe => dcp_in_view && any_ground && engaged,
        AccessMode::StoreAndForward => dcp_in_view && engaged && free_bytes > 0,
    }
}

fn free_bytes(sat: &Satellite, occupancy: u64) -> u64 {
    match sat.access_mode {
        AccessMode::BentPipe => 0,
        AccessMode::StoreAndForward => sat.storage_capacity_bytes.saturating_sub(occupancy),
    }
}

/// Every (satellite, target) solution at grid instant `time_s`.
///
/// Solutions are ordered by satellite (scenario order), DCPs before ground
/// stations, each in scenario order.
pub fn instant_solutions(scenario: &Scenario, time_s: f64, occupancy: &Occupancy) -> Result<Vec<InstantSolution>> {
    if scenario.grid.index_of(time_s).is_none() {
        return Err(Error::OffGrid(time_s));
    }
    let mut out = Vec::with_capacity(scenario.satellites.len() * (scenario.dcps.len() + scenario.ground_stations.len()));
    for sat in &scenario.satellites {
        let state = propagate_to(&sat.elements, time_s)?;
        let nadir = GroundPoint::subsatellite(&state);
        let radius = state.radius_km();
        let ground: Vec<bool> = scenario
            .ground_stations
            .iter()
            .map(|gs| {
                let fov = sat.fov_ground.with_mask(gs.min_elevation_rad);
                in_fov_at(central_angle(&nadir, &gs.location), radius, &fov)
            })
            .collect();
        let any_ground = ground.iter().any(|g| *g);
        let engaged = sat.is_engaged(time_s, scenario.thresholds.planning_period_s);
        let free = free_bytes(sat, occupancy.get(&sat.id).copied().unwrap_or(0));
        for dcp in &scenario.dcps {
            let in_view = in_fov_at(central_angle(&nadir, &dcp.location), radius, &sat.fov_dcp);
            out.push(InstantSolution {
                time_s,
                satellite_id: sat.id.clone(),
                target_id: dcp.id.clone(),
                target_kind: TargetKind::Dcp,
                satisfied: dcp_satisfied(sat.access_mode, in_view, any_ground, engaged, free),
            });
        }
        for (gs, visible) in scenario.ground_stations.iter().zip(ground) {
            out.push(InstantSolution {
                time_s,
                satellite_id: sat.id.clone(),
                target_id: gs.id.clone(),
                target_kind: TargetKind::GroundStation,
                satisfied: visible,
            });
        }
    }
    Ok(out)
}

/// Geometric visibility of one satellite over the grid, ignoring duty cycle
/// and storage.
#[derive(Debug, Clone)]
pub struct SatelliteVisibility {
    pub satellite_id: String,
    /// `[dcp][instant]`
    pub dcp: Vec<Vec<bool>>,
    /// `[station][instant]`
    pub ground: Vec<Vec<bool>>,
    pub any_ground: Vec<bool>,
}

/// Geometry of every satellite against every target, computed once and
/// reused while duty cycles or satellite subsets change.
#[derive(Debug, Clone)]
pub struct VisibilityTable {
    pub grid: TimeGrid,
    satellites: HashMap<String, SatelliteVisibility>,
}

impl VisibilityTable {
    pub fn compute(scenario: &Scenario) -> Result<Self> {
        Self::compute_on(scenario, &scenario.grid)
    }

    /// Visibility sampled on `grid` instead of the scenario grid.
    pub fn compute_on(scenario: &Scenario, grid: &TimeGrid) -> Result<Self> {
        let rows = scenario
            .satellites
            .par_iter()
            .map(|sat| satellite_visibility(scenario, sat, grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: *grid,
            satellites: rows.into_iter().map(|r| (r.satellite_id.clone(), r)).collect(),
        })
    }

    pub fn get(&self, satellite_id: &str) -> Option<&SatelliteVisibility> {
        self.satellites.get(satellite_id)
    }
}

fn satellite_visibility(scenario: &Scenario, sat: &Satellite, grid: &TimeGrid) -> Result<SatelliteVisibility> {
    let track = ground_track(&sat.elements, grid)?;
    let n = track.len();
    let mut dcp = vec![vec![false; n]; scenario.dcps.len()];
    let mut ground = vec![vec![false; n]; scenario.ground_stations.len()];
    let mut any_ground = vec![false; n];
    let station_fovs: Vec<_> = scenario
        .ground_stations
        .iter()
        .map(|gs| sat.fov_ground.with_mask(gs.min_elevation_rad))
        .collect();
    for (k, state) in track.iter().enumerate() {
        let nadir = GroundPoint::subsatellite(state);
        let radius = state.radius_km();
        for (j, d) in scenario.dcps.iter().enumerate() {
            dcp[j][k] = in_fov_at(central_angle(&nadir, &d.location), radius, &sat.fov_dcp);
        }
        for (j, gs) in scenario.ground_stations.iter().enumerate() {
            let v = in_fov_at(central_angle(&nadir, &gs.location), radius, &station_fovs[j]);
            ground[j][k] = v;
            any_ground[k] |= v;
        }
    }
    Ok(SatelliteVisibility {
        satellite_id: sat.id.clone(),
        dcp,
        ground,
        any_ground,
    })
}

/// Storage bookkeeping shared by the coupled solver and the window replay.
struct StorageLedger {
    capacity: u64,
    uplink_budget: u64,
    downlink_budget: u64,
    data_per_pass: Vec<u64>,
    remaining: Vec<u64>,
    was_active: Vec<bool>,
    occupancy: u64,
    collected: u64,
    downlinked: u64,
    dropped: u64,
    occupancy_trace: Vec<u64>,
    ingest_trace: Vec<u64>,
}

impl StorageLedger {
    fn new(scenario: &Scenario, sat: &Satellite, grid: &TimeGrid) -> Self {
        let n = scenario.dcps.len();
        Self {
            capacity: sat.storage_capacity_bytes,
            uplink_budget: bytes_per_step(sat.dcp_uplink_rate_bps, grid.step_s),
            downlink_budget: bytes_per_step(sat.downlink_rate_bps, grid.step_s),
            data_per_pass: scenario.dcps.iter().map(|d| d.data_per_pass_bytes).collect(),
            remaining: vec![0; n],
            was_active: vec![false; n],
            occupancy: 0,
            collected: 0,
            downlinked: 0,
            dropped: 0,
            occupancy_trace: Vec::with_capacity(grid.count()),
            ingest_trace: Vec::with_capacity(grid.count()),
        }
    }

    fn free(&self) -> u64 {
        self.capacity.saturating_sub(self.occupancy)
    }

    fn close_run(&mut self, dcp: usize, full: bool) {
        if full {
            self.dropped += self.remaining[dcp];
        }
        self.remaining[dcp] = 0;
    }

    /// One grid step: ingest from active DCP contacts, then drain.
    fn step(&mut self, active: &[bool], ground: bool) {
        let full_at_start = self.free() == 0;
        let mut ingested = 0;
        for d in 0..active.len() {
            match (self.was_active[d], active[d]) {
                (true, false) => self.close_run(d, full_at_start),
                (false, true) => self.remaining[d] = self.data_per_pass[d],
                _ => {}
            }
            if active[d] {
                let take = self.remaining[d].min(self.uplink_budget).min(self.free());
                self.remaining[d] -= take;
                self.occupancy += take;
                ingested += take;
            }
            self.was_active[d] = active[d];
        }
        self.collected += ingested;
        if ground {
            let drain = self.occupancy.min(self.downlink_budget);
            self.occupancy -= drain;
            self.downlinked += drain;
        }
        self.occupancy_trace.push(self.occupancy);
        self.ingest_trace.push(ingested);
    }

    fn finish(mut self, satellite_id: &str) -> StorageTimeline {
        let full = self.free() == 0;
        for d in 0..self.was_active.len() {
            if self.was_active[d] {
                self.close_run(d, full);
            }
        }
        StorageTimeline {
            satellite_id: satellite_id.to_string(),
            capacity_bytes: self.capacity,
            initial_bytes: 0,
            occupancy_bytes: self.occupancy_trace,
            ingested_bytes: self.ingest_trace,
            collected_bytes_total: self.collected,
            downlinked_bytes_total: self.downlinked,
            dropped_bytes_total: self.dropped,
        }
    }
}

/// Whole bytes a link moves in one step.
pub fn bytes_per_step(rate_bps: f64, step_s: f64) -> u64 {
    (rate_bps * step_s / 8.0).floor().max(0.0) as u64
}

/// Windows plus storage timelines (store-and-forward satellites only).
#[derive(Debug, Clone, PartialEq)]
pub struct AccessSolution {
    pub windows: Vec<AccessWindow>,
    pub storage: BTreeMap<String, StorageTimeline>,
}

/// Solves the access problem for `scenario.satellites` on the table's grid.
///
/// Every satellite must be present in `table`.
pub fn solve(scenario: &Scenario, table: &VisibilityTable) -> Result<AccessSolution> {
    let per_sat = scenario
        .satellites
        .par_iter()
        .map(|sat| {
            let vis = table
                .get(&sat.id)
                .ok_or_else(|| Error::UnknownSatellite(sat.id.clone()))?;
            Ok(solve_satellite(scenario, sat, vis, &table.grid))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut windows = Vec::new();
    let mut storage = BTreeMap::new();
    for (w, s) in per_sat {
        windows.extend(w);
        if let Some(s) = s {
            storage.insert(s.satellite_id.clone(), s);
        }
    }
    sort_windows(&mut windows);
    Ok(AccessSolution { windows, storage })
}

fn solve_satellite(
    scenario: &Scenario,
    sat: &Satellite,
    vis: &SatelliteVisibility,
    grid: &TimeGrid,
) -> (Vec<AccessWindow>, Option<StorageTimeline>) {
    let n = grid.count();
    let period = scenario.thresholds.planning_period_s;
    let mut dcp_flags = vec![vec![false; n]; scenario.dcps.len()];
    let mut ledger = match sat.access_mode {
        AccessMode::StoreAndForward => Some(StorageLedger::new(scenario, sat, grid)),
        AccessMode::BentPipe => None,
    };
    let mut active = vec![false; scenario.dcps.len()];
    for k in 0..n {
        let engaged = sat.is_engaged(grid.instant(k), period);
        let free = ledger.as_ref().map_or(0, StorageLedger::free);
        for d in 0..scenario.dcps.len() {
            active[d] = dcp_satisfied(sat.access_mode, vis.dcp[d][k], vis.any_ground[k], engaged, free);
            dcp_flags[d][k] = active[d];
        }
        if let Some(ledger) = ledger.as_mut() {
            ledger.step(&active, vis.any_ground[k]);
        }
    }

    let dcp_kind = match sat.access_mode {
        AccessMode::BentPipe => WindowKind::SimultaneousContact,
        AccessMode::StoreAndForward => WindowKind::DcpContact,
    };
    let mut windows = Vec::new();
    for (d, flags) in scenario.dcps.iter().zip(&dcp_flags) {
        windows.extend(runs_to_windows(flags, grid, &sat.id, &d.id, dcp_kind));
    }
    for (gs, flags) in scenario.ground_stations.iter().zip(&vis.ground) {
        windows.extend(runs_to_windows(flags, grid, &sat.id, &gs.id, WindowKind::GroundContact));
    }
    (windows, ledger.map(|l| l.finish(&sat.id)))
}

fn runs_to_windows(flags: &[bool], grid: &TimeGrid, satellite_id: &str, target_id: &str, kind: WindowKind) -> Vec<AccessWindow> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &on) in flags.iter().chain(std::iter::once(&false)).enumerate() {
        match (start, on) {
            (None, true) => start = Some(k),
            (Some(first), false) => {
                out.push(AccessWindow {
                    satellite_id: satellite_id.to_string(),
                    target_id: target_id.to_string(),
                    kind,
                    start_s: grid.instant(first),
                    end_s: grid.instant(k),
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Orders by satellite id, target id, start time, then kind.
pub fn sort_windows(windows: &mut [AccessWindow]) {
    windows.sort_by(|a, b| {
        a.satellite_id
            .cmp(&b.satellite_id)
            .then_with(|| a.target_id.cmp(&b.target_id))
            .then_with(|| a.start_s.total_cmp(&b.start_s))
            .then_with(|| a.kind.cmp(&b.kind))
    });
}

/// Maximal access windows for the whole scenario.
pub fn access_windows(scenario: &Scenario) -> Result<Vec<AccessWindow>> {
    let table = VisibilityTable::compute(scenario)?;
    Ok(solve(scenario, &table)?.windows)
}

/// Per-instant union of `windows`.
pub fn instant_mask<'a>(
    windows: impl IntoIterator<Item = &'a AccessWindow>,
    grid: &TimeGrid,
) -> Vec<bool> {
    let n = grid.count();
    let mut mask = vec![false; n];
    for w in windows {
        let (first, last) = w.index_range(grid);
        for flag in mask.iter_mut().take(last.min(n.saturating_sub(1)) + 1).skip(first) {
            *flag = true;
        }
    }
    mask
}

/// Replays storage from windows; one timeline per store-and-forward satellite.
pub fn simulate_store_and_forward(scenario: &Scenario, windows: &[AccessWindow]) -> BTreeMap<String, StorageTimeline> {
    let grid = &scenario.grid;
    let dcp_index: HashMap<&str, usize> = scenario.dcps.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect();
    scenario
        .satellites
        .iter()
        .filter(|s| s.access_mode == AccessMode::StoreAndForward)
        .map(|sat| {
            let n = grid.count();
            let mut contact = vec![vec![false; n]; scenario.dcps.len()];
            let mut ground = vec![false; n];
            for w in windows.iter().filter(|w| w.satellite_id == sat.id) {
                let (first, last) = w.index_range(grid);
                let row = match w.kind {
                    WindowKind::GroundContact => &mut ground,
                    _ => match dcp_index.get(w.target_id.as_str()) {
                        Some(&d) => &mut contact[d],
                        None => continue,
                    },
                };
                for flag in row.iter_mut().take(last.min(n.saturating_sub(1)) + 1).skip(first) {
                    *flag = true;
                }
            }
            let mut ledger = StorageLedger::new(scenario, sat, grid);
            let mut active = vec![false; scenario.dcps.len()];
            for k in 0..n {
                for d in 0..active.len() {
                    active[d] = contact[d][k];
                }
                ledger.step(&active, ground[k]);
            }
            (sat.id.clone(), ledger.finish(&sat.id))
        })
        .collect()
}

/// Whether each satellite's ground contacts can drain what it collects.
///
/// The horizon is cut into consecutive orbital periods from the grid start.
/// In every complete period the drain capacity (ground-contact instants times
/// the per-step downlink volume) must cover the bytes ingested in it. A
/// horizon shorter than one period is checked as a single partition.
/// Bent-pipe satellites store nothing and always pass.
pub fn downlink_sufficiency(
    scenario: &Scenario,
    windows: &[AccessWindow],
    storage: &BTreeMap<String, StorageTimeline>,
) -> BTreeMap<String, bool> {
    let grid = &scenario.grid;
    scenario
        .satellites
        .iter()
        .map(|sat| {
            let ok = match (sat.access_mode, storage.get(&sat.id)) {
                (AccessMode::StoreAndForward, Some(timeline)) => {
                    let ground = instant_mask(
                        windows
                            .iter()
                            .filter(|w| w.satellite_id == sat.id && w.kind == WindowKind::GroundContact),
                        grid,
                    );
                    let budget = bytes_per_step(sat.downlink_rate_bps, grid.step_s) as u128;
                    period_partitions(grid, orbital_period(&sat.elements)).into_iter().all(|(lo, hi)| {
                        let collected: u128 = timeline.ingested_bytes[lo..hi].iter().map(|b| *b as u128).sum();
                        let capacity = ground[lo..hi].iter().filter(|g| **g).count() as u128 * budget;
                        capacity >= collected
                    })
                }
                _ => true,
            };
            (sat.id.clone(), ok)
        })
        .collect()
}

/// Index ranges `[lo, hi)` of complete orbital periods within the grid span.
fn period_partitions(grid: &TimeGrid, period_s: f64) -> Vec<(usize, usize)> {
    let n = grid.count();
    let span_end = grid.start_s + grid.span_s();
    let mut out = Vec::new();
    let mut j = 0.0;
    loop {
        let lo_t = grid.start_s + j * period_s;
        let hi_t = lo_t + period_s;
        if hi_t > span_end + 1e-9 {
            break;
        }
        let lo = ((lo_t - grid.start_s) / grid.step_s).ceil() as usize;
        let hi = (((hi_t - grid.start_s) / grid.step_s).ceil() as usize).min(n);
        out.push((lo, hi));
        j += 1.0;
    }
    if out.is_empty() {
        out.push((0, n));
    }
    out
}

/// Writes `satellite_id,target_id,kind,start_s,end_s` rows.
pub fn write_windows_csv<W: Write>(out: W, windows: &[AccessWindow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["satellite_id", "target_id", "kind", "start_s", "end_s"])?;
    for win in windows {
        w.write_record([
            win.satellite_id.as_str(),
            win.target_id.as_str(),
            win.kind.as_str(),
            &format!("{:.3}", win.start_s),
            &format!("{:.3}", win.end_s),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
