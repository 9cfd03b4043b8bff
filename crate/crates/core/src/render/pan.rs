//! Direction and distance cues for one source.

use std::f64::consts::FRAC_PI_4;

use crate::geometry::{wrap_degrees, Pose, Vec3};

/// Below this horizontal separation a source counts as overhead.
pub const OVERHEAD_EPS: f64 = 1e-6;

/// Constant-power stereo gains `(L, R)` for a listener-relative azimuth in
/// degrees (`0` ahead, `+90` right). Rear directions fold onto the front
/// half-plane, so `L² + R² = 1` everywhere.
pub fn pan_gains(azimuth_deg: f64) -> (f64, f64) {
    let az = wrap_degrees(azimuth_deg);
    let folded = if az > 90.0 {
        180.0 - az
    } else if az < -90.0 {
        -180.0 - az
    } else {
        az
    };
    let p = folded / 90.0;
    let theta = (p + 1.0) * FRAC_PI_4;
    (theta.cos(), theta.sin())
}

/// Inverse-distance law clamped to unity inside `d_ref`.
pub fn distance_attenuation(d: f64, d_ref: f64) -> f64 {
    d_ref / d.max(d_ref)
}

/// Horizontal angle of `source` relative to the listener's heading, in
/// `[-180, 180)`. A source directly above or below the listener is at `0`.
pub fn source_azimuth(listener: &Pose, source: Vec3) -> f64 {
    let dx = source.x - listener.position.x;
    let dz = source.z - listener.position.z;
    if dx.hypot(dz) < OVERHEAD_EPS {
        return 0.0;
    }
    // bearing measured clockwise from -z, matching the yaw convention
    let bearing = dx.atan2(-dz).to_degrees();
    wrap_degrees(bearing - listener.yaw)
}
