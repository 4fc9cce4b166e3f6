//! Visibility predicates between a satellite and a ground target.
//!
//! Everything is solved in the plane containing the Earth centre, the
//! satellite and the target: with central angle `λ` between the sub-satellite
//! point and the target, Earth radius `R` and geocentric radius `r`,
//!
//! * elevation `el = atan2(cos λ - R/r, sin λ)`
//! * nadir angle `η = atan2(R sin λ, r - R cos λ)`
//!
//! and `el + η + λ = π/2` for every target above the horizon.

use crate::orbit::{EarthModel, SatelliteState};
use crate::scalar::{wrap_pi, Scalar};

/// A point on the spherical Earth (DCP or ground station).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPoint<T> {
    pub lat_rad: T,
    pub lon_rad: T,
}

impl<T: Scalar> GroundPoint<T> {
    /// Longitude is wrapped into `[-π, π)`; latitude is kept as given.
    pub fn new(lat_rad: T, lon_rad: T) -> Self {
        Self {
            lat_rad,
            lon_rad: wrap_pi(lon_rad),
        }
    }

    pub fn from_degrees(lat_deg: T, lon_deg: T) -> Self {
        Self::new(lat_deg.to_radians(), lon_deg.to_radians())
    }

    pub fn is_valid(&self) -> bool {
        let half_pi = T::FRAC_PI_2();
        self.lat_rad.is_finite()
            && self.lon_rad.is_finite()
            && self.lat_rad >= -half_pi
            && self.lat_rad <= half_pi
            && self.lon_rad >= -T::PI()
            && self.lon_rad < T::PI()
    }

    pub fn subsatellite(state: &SatelliteState<T>) -> Self {
        Self {
            lat_rad: state.subsatellite_lat_rad,
            lon_rad: state.subsatellite_lon_rad,
        }
    }
}

/// Nadir cone plus target-side elevation mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOfView<T> {
    pub half_angle_rad: T,
    pub min_elevation_rad: T,
}

impl<T: Scalar> FieldOfView<T> {
    pub fn is_valid(&self) -> bool {
        self.half_angle_rad >= T::zero()
            && self.half_angle_rad <= T::FRAC_PI_2()
            && self.min_elevation_rad >= T::zero()
            && self.min_elevation_rad < T::FRAC_PI_2()
    }

    /// Same cone with the stricter of the two elevation masks.
    pub fn with_mask(self, min_elevation_rad: T) -> Self {
        Self {
            half_angle_rad: self.half_angle_rad,
            min_elevation_rad: self.min_elevation_rad.max(min_elevation_rad),
        }
    }
}

/// Great-circle angle, haversine form.
pub fn central_angle<T: Scalar>(a: &GroundPoint<T>, b: &GroundPoint<T>) -> T {
    let two = T::lit(2.0);
    let dlat = (b.lat_rad - a.lat_rad) / two;
    let dlon = (b.lon_rad - a.lon_rad) / two;
    let h = dlat.sin().powi(2) + a.lat_rad.cos() * b.lat_rad.cos() * dlon.sin().powi(2);
    two * h.max(T::zero()).min(T::one()).sqrt().asin()
}

/// Elevation for a satellite at geocentric radius `radius_km` seen from a
/// target `central_angle_rad` away from the sub-satellite point.
#[inline]
pub fn elevation_from_central_angle<T: Scalar>(central_angle_rad: T, radius_km: T) -> T {
    let ratio = EarthModel::radius::<T>() / radius_km;
    (central_angle_rad.cos() - ratio).atan2(central_angle_rad.sin())
}

/// Angle between the satellite nadir and the line of sight to the target.
#[inline]
pub fn nadir_from_central_angle<T: Scalar>(central_angle_rad: T, radius_km: T) -> T {
    let earth = EarthModel::radius::<T>();
    (earth * central_angle_rad.sin()).atan2(radius_km - earth * central_angle_rad.cos())
}

/// Elevation of the satellite above the target's local horizon; negative below it.
pub fn elevation_angle<T: Scalar>(state: &SatelliteState<T>, target: &GroundPoint<T>) -> T {
    let lambda = central_angle(&GroundPoint::subsatellite(state), target);
    elevation_from_central_angle(lambda, state.radius_km())
}

/// Nadir angle from the satellite to the target.
pub fn nadir_angle<T: Scalar>(state: &SatelliteState<T>, target: &GroundPoint<T>) -> T {
    let lambda = central_angle(&GroundPoint::subsatellite(state), target);
    nadir_from_central_angle(lambda, state.radius_km())
}

/// Per-instant access predicate.
pub fn in_fov<T: Scalar>(state: &SatelliteState<T>, target: &GroundPoint<T>, fov: &FieldOfView<T>) -> bool {
    let lambda = central_angle(&GroundPoint::subsatellite(state), target);
    in_fov_at(lambda, state.radius_km(), fov)
}

/// [`in_fov`] for a precomputed central angle.
#[inline]
pub fn in_fov_at<T: Scalar>(central_angle_rad: T, radius_km: T, fov: &FieldOfView<T>) -> bool {
    let elevation = elevation_from_central_angle(central_angle_rad, radius_km);
    // the elevation test also rejects targets behind the limb, where the
    // nadir angle alone would be ambiguous
    elevation >= T::zero()
        && elevation >= fov.min_elevation_rad
        && nadir_from_central_angle(central_angle_rad, radius_km) <= fov.half_angle_rad
}
