//! Vector math, poses and the anchor transform.
//!
//! Coordinates are meters in a right-handed frame with `y` up; the floor is
//! the plane `y = 0`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn length_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn length(self) -> f64 {
        self.length_squared().sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).length()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Vec3::new(x, y, z)
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Wraps an angle in degrees into `[-180, 180)`.
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = (deg + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can round up to exactly 360.0 for tiny negative inputs
    if w >= 180.0 {
        w - 360.0
    } else {
        w
    }
}

/// Listener (camera) state.
///
/// `yaw` is in degrees, `0` faces `-z` and positive turns clockwise when
/// viewed from above, so `+90` faces `+x`. `pitch` is informational; the
/// renderer only uses the horizontal heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose {
    pub position: Vec3,
    pub yaw: f64,
    #[serde(default)]
    pub pitch: f64,
}

impl Pose {
    pub const MAX_PITCH: f64 = 89.0;

    pub fn new(position: Vec3, yaw: f64, pitch: f64) -> Self {
        Self { position, yaw, pitch }
    }

    /// Builds a pose from unchecked input: yaw is wrapped and pitch clamped.
    pub fn normalized(position: Vec3, yaw: f64, pitch: f64) -> Self {
        Self {
            position,
            yaw: wrap_degrees(yaw),
            pitch: pitch.clamp(-Self::MAX_PITCH, Self::MAX_PITCH),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.position.is_finite()
            && (-180.0..180.0).contains(&self.yaw)
            && (-Self::MAX_PITCH..=Self::MAX_PITCH).contains(&self.pitch)
    }

    /// Unit vector of the horizontal heading.
    pub fn forward(&self) -> Vec3 {
        let yaw = self.yaw.to_radians();
        Vec3::new(yaw.sin(), 0.0, -yaw.cos())
    }

    /// Yaw that makes a listener at `from` face `to` horizontally.
    pub fn yaw_towards(from: Vec3, to: Vec3) -> f64 {
        let d = to - from;
        if d.x.hypot(d.z) < 1e-12 {
            return 0.0;
        }
        wrap_degrees(d.x.atan2(-d.z).to_degrees())
    }
}

/// Rigid transform pinning sculpture-local coordinates into the world.
///
/// `yaw` rotates about `+y` by the right-hand rule (counter-clockwise viewed
/// from above), then `origin` translates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorFrame {
    pub origin: Vec3,
    pub yaw: f64,
}

impl Default for AnchorFrame {
    fn default() -> Self {
        Self {
            origin: Vec3::ZERO,
            yaw: 0.0,
        }
    }
}

impl AnchorFrame {
    pub fn new(origin: Vec3, yaw: f64) -> Self {
        Self { origin, yaw }
    }

    pub fn to_world(&self, p_local: Vec3) -> Vec3 {
        anchor_to_world(self, p_local)
    }

    pub fn to_local(&self, p_world: Vec3) -> Vec3 {
        let (s, c) = self.yaw.to_radians().sin_cos();
        let d = p_world - self.origin;
        // transpose of the rotation in `anchor_to_world`
        Vec3::new(c * d.x - s * d.z, d.y, s * d.x + c * d.z)
    }
}

pub fn anchor_to_world(anchor: &AnchorFrame, p_local: Vec3) -> Vec3 {
    let (s, c) = anchor.yaw.to_radians().sin_cos();
    let rotated = Vec3::new(c * p_local.x + s * p_local.z, p_local.y, -s * p_local.x + c * p_local.z);
    rotated + anchor.origin
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Vec3; 3]", into = "[Vec3; 3]")]
pub struct Triangle {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
}

impl From<[Vec3; 3]> for Triangle {
    fn from([a, b, c]: [Vec3; 3]) -> Self {
        Triangle { a, b, c }
    }
}

impl From<Triangle> for [Vec3; 3] {
    fn from(t: Triangle) -> Self {
        [t.a, t.b, t.c]
    }
}

impl Triangle {
    pub fn new(a: Vec3, b: Vec3, c: Vec3) -> Self {
        Self { a, b, c }
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.b - self.a).cross(self.c - self.a).length()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    pub fn transformed(&self, anchor: &AnchorFrame) -> Triangle {
        Triangle::new(
            anchor.to_world(self.a),
            anchor.to_world(self.b),
            anchor.to_world(self.c),
        )
    }

    /// Closest point on the triangle to `p`.
    ///
    /// Classifies `p` against the Voronoi regions of the three vertices, the
    /// three edges and the face, and projects onto the matching feature.
    pub fn closest_point(&self, p: Vec3) -> Vec3 {
        let (a, b, c) = (self.a, self.b, self.c);
        let ab = b - a;
        let ac = c - a;
        let ap = p - a;

        let d1 = ab.dot(ap);
        let d2 = ac.dot(ap);
        if d1 <= 0.0 && d2 <= 0.0 {
            return a;
        }

        let bp = p - b;
        let d3 = ab.dot(bp);
        let d4 = ac.dot(bp);
        if d3 >= 0.0 && d4 <= d3 {
            return b;
        }

        let vc = d1 * d4 - d3 * d2;
        if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
            let v = d1 / (d1 - d3);
            return a + ab * v;
        }

        let cp = p - c;
        let d5 = ab.dot(cp);
        let d6 = ac.dot(cp);
        if d6 >= 0.0 && d5 <= d6 {
            return c;
        }

        let vb = d5 * d2 - d1 * d6;
        if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
            let w = d2 / (d2 - d6);
            return a + ac * w;
        }

        let va = d3 * d6 - d5 * d4;
        if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
            let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
            return b + (c - b) * w;
        }

        let denom = 1.0 / (va + vb + vc);
        let v = vb * denom;
        let w = vc * denom;
        a + ab * v + ac * w
    }

    pub fn distance(&self, p: Vec3) -> f64 {
        p.distance(self.closest_point(p))
    }
}
