//! Independent two-body reference: RK4 integration from an elements-derived state.

use fedsat::orbit::OrbitalElements;
use fedsat::EarthModel;

const MU: f64 = EarthModel::MU_KM3_S2;

pub type Vec3 = [f64; 3];

pub fn add(a: Vec3, b: Vec3, k: f64) -> Vec3 {
    [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2]]
}

pub fn norm(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub fn gravity(r: Vec3) -> Vec3 {
    let d = norm(r).powi(3);
    [-MU * r[0] / d, -MU * r[1] / d, -MU * r[2] / d]
}

/// Classical RK4 on the two-body equations.
pub fn rk4(mut r: Vec3, mut v: Vec3, dt: f64, steps: usize) -> Vec<Vec3> {
    let mut out = vec![r];
    for _ in 0..steps {
        let (k1r, k1v) = (v, gravity(r));
        let (k2r, k2v) = (add(v, k1v, dt / 2.0), gravity(add(r, k1r, dt / 2.0)));
        let (k3r, k3v) = (add(v, k2v, dt / 2.0), gravity(add(r, k2r, dt / 2.0)));
        let (k4r, k4v) = (add(v, k3v, dt), gravity(add(r, k3r, dt)));
        for i in 0..3 {
            r[i] += dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
            v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        out.push(r);
    }
    out
}

/// Initial inertial state from elements, with Kepler's equation solved by plain bisection.
pub fn initial_state(el: &OrbitalElements<f64>) -> (Vec3, Vec3) {
    let (e, m) = (el.eccentricity, el.mean_anomaly_epoch_rad);
    let (mut lo, mut hi) = (m - 1.0, m + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - e * mid.sin() - m > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let ecc = 0.5 * (lo + hi);
    let nu = 2.0 * ((1.0 + e).sqrt() * (ecc / 2.0).sin()).atan2((1.0 - e).sqrt() * (ecc / 2.0).cos());
    let p = el.semi_major_axis_km * (1.0 - e * e);
    let r = p / (1.0 + e * nu.cos());
    let rp = [r * nu.cos(), r * nu.sin(), 0.0];
    let vp = [-(MU / p).sqrt() * nu.sin(), (MU / p).sqrt() * (e + nu.cos()), 0.0];

    let (so, co) = el.raan_rad.sin_cos();
    let (si, ci) = el.inclination_rad.sin_cos();
    let (sw, cw) = el.arg_perigee_rad.sin_cos();
    let rot = [
        [co * cw - so * sw * ci, -co * sw - so * cw * ci, so * si],
        [so * cw + co * sw * ci, -so * sw + co * cw * ci, -co * si],
        [sw * si, cw * si, ci],
    ];
    let apply = |x: Vec3| {
        [
            rot[0][0] * x[0] + rot[0][1] * x[1] + rot[0][2] * x[2],
            rot[1][0] * x[0] + rot[1][1] * x[1] + rot[1][2] * x[2],
            rot[2][0] * x[0] + rot[2][1] * x[1] + rot[2][2] * x[2],
        ]
    };
    (apply(rp), apply(vp))
}

/// Largest distance (km) between the closed-form and integrated positions,
/// sampled every 30 s over one orbital period with a 1 s RK4 step.
pub fn max_deviation_over_one_period(el: &OrbitalElements<f64>) -> f64 {
    let period = fedsat::orbit::orbital_period(el);
    let (r0, v0) = initial_state(el);
    let numeric = rk4(r0, v0, 1.0, period.ceil() as usize);
    numeric
        .iter()
        .enumerate()
        .step_by(30)
        .map(|(k, r)| norm(add(fedsat::orbit::inertial_position(el, k as f64).unwrap(), *r, -1.0)))
        .fold(0.0, f64::max)
}
