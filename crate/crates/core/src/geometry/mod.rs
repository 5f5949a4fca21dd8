//! Billiard tables with two parallel horizontal walls and the billiard map on them.
//!
//! Coordinates are normalized so that the bottom wall lies on `y = 0` and the top
//! wall on `y = 1`. Angles are in radians. The *argument* of a line is its angle
//! with the horizontal, taken in `(-pi/2, pi/2]`.

mod billiard;
mod curve;
mod table;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
use std::ops::{Add, Mul, Neg, Sub};

pub use billiard::{launch_direction, next_collision, phase_point_from_direction, trace_orbit};
pub use curve::{CircleArc, Curve, CurveError, LineSegment, SampledCurve, DEFAULT_MAX_TURN};
pub use table::{
    make_mushroom, make_stadium, ArcId, CapSide, PhasePoint, Table, TableClass, TableError, TableShape,
    TrajectorySegment, Walls,
};

/// Rays meeting a curve closer than this to tangency are rejected.
pub const TANGENCY_TOL: f64 = 1e-9;
/// Hits closer than this (in arclength) to an arc endpoint are rejected.
pub const CORNER_TOL: f64 = 1e-9;
/// Position tolerance used when solving ray/curve crossings.
pub const POSITION_TOL: f64 = 1e-12;

/// Margin kept below `pi/6` when a table records its largest admissible `eps`.
pub const EPS_MARGIN: f64 = 1e-6;

/// Exclusive upper bound on `eps`; the reflection formula needs it.
pub const EPS_LIMIT: f64 = FRAC_PI_6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("tangential collision on {arc} at r = {r}")]
    TangentialCollision { arc: ArcId, r: f64 },
    #[error("collision within corner tolerance of an endpoint of {arc} (r = {r})")]
    CornerHit { arc: ArcId, r: f64 },
    #[error("ray from ({x}, {y}) leaves the tracked arcs")]
    NoCollision { x: f64, y: f64 },
    #[error("flight returned to its own cap {arc} before reaching the opposite cap")]
    Recollision { arc: ArcId },
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Mirror image of a direction in a line with unit normal `n`.
    pub fn reflect(self, n: Self) -> Self {
        self - n * (2.0 * self.dot(n))
    }
}

impl Add for Vec2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Argument of the line spanned by `d`, normalized to `(-pi/2, pi/2]`.
pub fn line_argument(d: Vec2) -> f64 {
    let a = d.y.atan2(d.x);
    if a > FRAC_PI_2 {
        a - PI
    } else if a <= -FRAC_PI_2 {
        a + PI
    } else {
        a
    }
}

/// Argument of the line through two distinct points.
pub fn argument_between(from: Vec2, to: Vec2) -> Result<f64, GeometryError> {
    let d = to - from;
    if d.norm() == 0.0 {
        return Err(GeometryError::Domain("degenerate segment of zero length".into()));
    }
    Ok(line_argument(d))
}

/// Argument of the outgoing trajectory line after reflection at a boundary point
/// whose normal line has argument `normal_arg`.
///
/// Valid when both arguments are below `pi/6` in absolute value; the result then
/// stays below `pi/2` and no wrap-around occurs.
pub fn reflect_argument(incoming_arg: f64, normal_arg: f64) -> Result<f64, GeometryError> {
    if !(incoming_arg.abs() < EPS_LIMIT) || !(normal_arg.abs() < EPS_LIMIT) {
        return Err(GeometryError::Domain(format!(
            "reflection formula needs |incoming| < pi/6 and |normal| < pi/6, got {incoming_arg} and {normal_arg}"
        )));
    }
    Ok(2.0 * normal_arg - incoming_arg)
}
