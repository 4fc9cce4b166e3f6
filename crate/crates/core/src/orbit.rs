//! Two-body Keplerian propagation over a rotating spherical Earth.
//!
//! The Earth-fixed frame coincides with the inertial frame at `t = 0` and
//! rotates about +Z at [`EarthModel::ROTATION_RATE_RAD_S`]. No J2, no drag.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::scalar::{wrap_pi, wrap_two_pi, Scalar};

/// Spherical Earth constants shared by every scenario.
#[derive(Debug, Clone, Copy)]
pub struct EarthModel;

impl EarthModel {
    pub const RADIUS_KM: f64 = 6378.137;
    pub const MU_KM3_S2: f64 = 398_600.441_8;
    pub const ROTATION_RATE_RAD_S: f64 = 7.292_115_9e-5;

    #[inline]
    pub fn radius<T: Scalar>() -> T {
        T::lit(Self::RADIUS_KM)
    }

    #[inline]
    pub fn mu<T: Scalar>() -> T {
        T::lit(Self::MU_KM3_S2)
    }

    #[inline]
    pub fn rotation_rate<T: Scalar>() -> T {
        T::lit(Self::ROTATION_RATE_RAD_S)
    }
}

/// Newton iterations allowed before the solver reports failure.
pub const KEPLER_MAX_ITERATIONS: usize = 50;

/// Classical elements at `epoch_s` (seconds since scenario start).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalElements<T> {
    pub semi_major_axis_km: T,
    pub eccentricity: T,
    pub inclination_rad: T,
    pub raan_rad: T,
    pub arg_perigee_rad: T,
    pub mean_anomaly_epoch_rad: T,
    pub epoch_s: T,
}

impl<T: Scalar> OrbitalElements<T> {
    /// Circular orbit with node, perigee and anomaly at zero.
    pub fn circular(semi_major_axis_km: T, inclination_rad: T) -> Self {
        Self {
            semi_major_axis_km,
            eccentricity: T::zero(),
            inclination_rad,
            raan_rad: T::zero(),
            arg_perigee_rad: T::zero(),
            mean_anomaly_epoch_rad: T::zero(),
            epoch_s: T::zero(),
        }
    }

    /// Same elements with every angle wrapped into `[0, 2π)`.
    pub fn normalized(mut self) -> Self {
        self.inclination_rad = wrap_two_pi(self.inclination_rad);
        self.raan_rad = wrap_two_pi(self.raan_rad);
        self.arg_perigee_rad = wrap_two_pi(self.arg_perigee_rad);
        self.mean_anomaly_epoch_rad = wrap_two_pi(self.mean_anomaly_epoch_rad);
        self
    }

    /// Names of the invariants these elements break.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let finite = [
            self.semi_major_axis_km,
            self.eccentricity,
            self.inclination_rad,
            self.raan_rad,
            self.arg_perigee_rad,
            self.mean_anomaly_epoch_rad,
            self.epoch_s,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            out.push("elements_finite");
            return out;
        }
        if !(self.eccentricity >= T::zero() && self.eccentricity < T::one()) {
            out.push("eccentricity_range");
        } else if self.semi_major_axis_km * (T::one() - self.eccentricity) <= EarthModel::radius() {
            out.push("perigee_above_surface");
        }
        let tau = T::TAU();
        let in_range = |a: T| a >= T::zero() && a < tau;
        if !(in_range(self.inclination_rad)
            && in_range(self.raan_rad)
            && in_range(self.arg_perigee_rad)
            && in_range(self.mean_anomaly_epoch_rad))
        {
            out.push("angles_normalized");
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(rule) => Err(Error::InvalidElements(rule)),
        }
    }

    /// Mean motion in rad/s.
    pub fn mean_motion(&self) -> T {
        (EarthModel::mu::<T>() / self.semi_major_axis_km.powi(3)).sqrt()
    }
}

/// Satellite sample in the Earth-fixed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteState<T> {
    pub time_s: T,
    pub position_ecef_km: [T; 3],
    pub subsatellite_lat_rad: T,
    pub subsatellite_lon_rad: T,
    pub altitude_km: T,
}

impl<T: Scalar> SatelliteState<T> {
    /// Geocentric distance.
    pub fn radius_km(&self) -> T {
        EarthModel::radius::<T>() + self.altitude_km
    }
}

/// Solves `E - e sin E = M` by Newton-Raphson from `E0 = M`.
///
/// Iterates stay inside the bracket `[M - e, M + e]`; a step that leaves it
/// is replaced by bisection. `M` is not wrapped, so `E` lies in the same
/// revolution as `M`.
pub fn solve_kepler<T: Scalar>(mean_anomaly_rad: T, eccentricity: T) -> Result<T> {
    if !(eccentricity >= T::zero() && eccentricity < T::one()) {
        return Err(Error::InvalidElements("eccentricity_range"));
    }
    if !mean_anomaly_rad.is_finite() {
        return Err(Error::InvalidElements("elements_finite"));
    }
    let m = mean_anomaly_rad;
    let e = eccentricity;
    let tol = T::solver_tolerance().max(T::epsilon() * T::lit(4.0) * (T::one() + m.abs()));
    let mut lo = m - e;
    let mut hi = m + e;
    let mut ecc = m;
    for _ in 0..KEPLER_MAX_ITERATIONS {
        let residual = ecc - e * ecc.sin() - m;
        if residual.abs() < tol {
            return Ok(ecc);
        }
        // residual is increasing in E
        if residual > T::zero() {
            hi = ecc;
        } else {
            lo = ecc;
        }
        let slope = T::one() - e * ecc.cos();
        let next = ecc - residual / slope;
        ecc = if next > lo && next < hi {
            next
        } else {
            (lo + hi) / T::lit(2.0)
        };
    }
    let residual = ecc - e * ecc.sin() - m;
    if residual.abs() < tol {
        return Ok(ecc);
    }
    Err(Error::KeplerNonConvergence {
        iterations: KEPLER_MAX_ITERATIONS,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Kepler's third law, `2π sqrt(a³/μ)`.
pub fn orbital_period<T: Scalar>(elements: &OrbitalElements<T>) -> T {
    T::TAU() / elements.mean_motion()
}

/// Eccentric anomaly at `time_s`, with the mean anomaly wrapped into `[0, 2π)`.
pub fn eccentric_anomaly_at<T: Scalar>(elements: &OrbitalElements<T>, time_s: T) -> Result<T> {
    let mean = elements.mean_anomaly_epoch_rad + elements.mean_motion() * (time_s - elements.epoch_s);
    solve_kepler(wrap_two_pi(mean), elements.eccentricity)
}

/// Inertial position (km) at `time_s`.
pub fn inertial_position<T: Scalar>(elements: &OrbitalElements<T>, time_s: T) -> Result<[T; 3]> {
    elements.validate()?;
    let e = elements.eccentricity;
    let ecc = eccentric_anomaly_at(elements, time_s)?;
    let half = ecc / T::lit(2.0);
    let true_anomaly =
        T::lit(2.0) * ((T::one() + e).sqrt() * half.sin()).atan2((T::one() - e).sqrt() * half.cos());
    let radius = elements.semi_major_axis_km * (T::one() - e * ecc.cos());

    let (sin_u, cos_u) = (elements.arg_perigee_rad + true_anomaly).sin_cos();
    let (sin_node, cos_node) = elements.raan_rad.sin_cos();
    let (sin_i, cos_i) = elements.inclination_rad.sin_cos();
    Ok([
        radius * (cos_node * cos_u - sin_node * sin_u * cos_i),
        radius * (sin_node * cos_u + cos_node * sin_u * cos_i),
        radius * (sin_u * sin_i),
    ])
}

/// Rotates an inertial vector into the Earth-fixed frame at `time_s`.
pub fn inertial_to_ecef<T: Scalar>(position: [T; 3], time_s: T) -> [T; 3] {
    let (s, c) = (EarthModel::rotation_rate::<T>() * time_s).sin_cos();
    [
        c * position[0] + s * position[1],
        -s * position[0] + c * position[1],
        position[2],
    ]
}

/// Satellite state at `time_s` seconds since scenario start.
pub fn propagate_to<T: Scalar>(elements: &OrbitalElements<T>, time_s: T) -> Result<SatelliteState<T>> {
    if !(time_s >= T::zero()) {
        return Err(Error::NegativeTime(time_s.to_f64().unwrap_or(f64::NAN)));
    }
    let ecef = inertial_to_ecef(inertial_position(elements, time_s)?, time_s);
    let norm = (ecef[0] * ecef[0] + ecef[1] * ecef[1] + ecef[2] * ecef[2]).sqrt();
    let lat = (ecef[2] / norm).max(-T::one()).min(T::one()).asin();
    let lon = wrap_pi(ecef[1].atan2(ecef[0]));
    Ok(SatelliteState {
        time_s,
        position_ecef_km: ecef,
        subsatellite_lat_rad: lat,
        subsatellite_lon_rad: lon,
        altitude_km: norm - EarthModel::radius(),
    })
}

/// One state per grid instant.
pub fn ground_track<T: Scalar>(elements: &OrbitalElements<T>, grid: &TimeGrid) -> Result<Vec<SatelliteState<T>>> {
    grid.instants().map(|t| propagate_to(elements, T::lit(t))).collect()
}
