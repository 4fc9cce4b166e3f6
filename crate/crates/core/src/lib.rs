//! Coverage and access simulation for federated data-collection satellites.
//!
//! A scenario lists satellites, data collection platforms (DCPs) and ground
//! stations over a uniform time grid. [`access`] turns geometry, duty cycles
//! and onboard storage into access windows, [`metrics`] reduces them to
//! figures of merit and threshold compliance, and [`federation`] admits,
//! retires and re-phases constituent satellites.
//!
//! Orbit and geometry code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which the rest of the pipeline uses.

pub mod access;
pub mod cli;
pub mod error;
pub mod federation;
pub mod geometry;
pub mod grid;
pub mod metrics;
pub mod orbit;
pub mod scalar;
pub mod scenario;

pub use access::{access_windows, simulate_store_and_forward, AccessWindow, StorageTimeline, VisibilityTable, WindowKind};
pub use error::{Error, Result};
pub use federation::{evaluate_candidate, reconfigure_on_fault, retire_minimal_impact};
pub use grid::TimeGrid;
pub use metrics::{evaluate, revisit_times, temporal_coverage, Evaluation, FigureOfMeritReport};
pub use orbit::{propagate_to, solve_kepler, EarthModel};
pub use scalar::Scalar;
pub use scenario::{load_scenario, AccessMode, DataCollectionPlatform, GroundStation, Satellite, Scenario, Thresholds};

pub type Elements = orbit::OrbitalElements<f64>;
pub type State = orbit::SatelliteState<f64>;
pub type Point = geometry::GroundPoint<f64>;
pub type Fov = geometry::FieldOfView<f64>;
