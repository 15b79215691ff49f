//! Floating-point predicates used where exact rationals are not convenient:
//! half-planes rotated about an axis by `±α/2`.
//!
//! Every predicate has an uncertainty band of width `2ε` around its
//! boundary. Callers that discard tiles must only act on answers that are
//! outside the band.

use std::f64::consts::{PI, TAU};

use super::polytope::ConvexPolytope3;
use super::vec3::{Point3, Vec3};

pub const DEFAULT_EPSILON: f64 = 1e-9;

pub type V3 = [f64; 3];

pub fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: &V3, b: &V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: &V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &V3) -> V3 {
    scale(a, 1.0 / norm(a))
}

/// `normal · p <= offset`, with an uncertainty band `[offset - ε, offset + ε]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericHalfspace {
    pub normal: V3,
    pub offset: f64,
    pub eps: f64,
}

impl NumericHalfspace {
    pub fn new(normal: V3, offset: f64, eps: f64) -> Self {
        NumericHalfspace { normal, offset, eps }
    }

    pub fn contains(&self, p: &V3) -> bool {
        dot(&self.normal, p) <= self.offset + self.eps
    }

    pub fn strictly_contains(&self, p: &V3) -> bool {
        dot(&self.normal, p) <= self.offset - self.eps
    }

    /// `p` is outside the half-space and outside the uncertainty band.
    pub fn strictly_excludes(&self, p: &V3) -> bool {
        !self.contains(p)
    }

    /// The complementary half-space (same band).
    pub fn flipped(&self) -> NumericHalfspace {
        NumericHalfspace {
            normal: scale(&self.normal, -1.0),
            offset: -self.offset,
            eps: self.eps,
        }
    }
}

/// Closed angular interval `[start, start + width]` around an axis, with
/// angles measured in the orthonormal frame `(u, w)` perpendicular to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularInterval {
    pub start: f64,
    pub width: f64,
}

impl AngularInterval {
    pub fn end(&self) -> f64 {
        self.start + self.width
    }
}

/// Angular extent of a body as seen from a line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportWedge {
    pub axis_point: V3,
    /// Unit axis direction.
    pub axis_dir: V3,
    /// Orthonormal frame of the plane perpendicular to the axis.
    pub u: V3,
    pub w: V3,
    pub interval: AngularInterval,
}

impl SupportWedge {
    /// Angle of `p` around the axis, in `(-π, π]`.
    pub fn angle_of(&self, p: &V3) -> f64 {
        let r = sub(p, &self.axis_point);
        dot(&r, &self.w).atan2(dot(&r, &self.u))
    }

    /// Half-space bounded by the plane through the axis at angle `phi`,
    /// containing the directions `(phi - π, phi)` (clockwise side).
    pub fn clockwise_side(&self, phi: f64, eps: f64) -> NumericHalfspace {
        // Points at angle θ satisfy n·(x - a) = r sin(θ - φ) with n below;
        // the clockwise side is where this is negative.
        let n = sub(&scale(&self.w, phi.cos()), &scale(&self.u, phi.sin()));
        NumericHalfspace::new(n, dot(&n, &self.axis_point), eps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WedgeResult {
    Wedge(SupportWedge),
    /// The axis meets the body, or the body is seen under an angle of at
    /// least `π - ε`: no support half-planes exist.
    Degenerate,
}

impl WedgeResult {
    pub fn wedge(&self) -> Option<&SupportWedge> {
        match self {
            WedgeResult::Wedge(w) => Some(w),
            WedgeResult::Degenerate => None,
        }
    }
}

/// Orthonormal frame `(u, w)` with `u × w = d`.
pub fn perpendicular_frame(d: &V3) -> (V3, V3) {
    let d = normalize(d);
    let helper = if d[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalize(&cross(&helper, &d));
    let u = normalize(&sub(&u, &scale(&d, dot(&u, &d))));
    let w = cross(&d, &u);
    (u, w)
}

/// Minimal angular interval (of width `< π`) around the axis covering all
/// vertex directions of `body`.
///
/// Directions are sorted and the complement of the largest angular gap is
/// returned.
pub fn support_wedge(body: &ConvexPolytope3, axis_point: &Point3, axis_dir: &Vec3, eps: f64) -> WedgeResult {
    assert!(!axis_dir.is_zero(), "axis direction must be nonzero");
    let a = axis_point.to_f64();
    let d = normalize(&axis_dir.to_f64());
    let (u, w) = perpendicular_frame(&d);
    let mut angles = Vec::with_capacity(body.vertices().len());
    for v in body.vertices() {
        let r = sub(&v.to_f64(), &a);
        let (x, y) = (dot(&r, &u), dot(&r, &w));
        if x.hypot(y) <= eps {
            return WedgeResult::Degenerate;
        }
        angles.push(y.atan2(x));
    }
    angles.sort_by(|p, q| p.partial_cmp(q).unwrap());
    // Largest gap, including the wrap-around gap.
    let n = angles.len();
    let mut best_gap = angles[0] + TAU - angles[n - 1];
    let mut start = angles[0];
    for i in 1..n {
        let gap = angles[i] - angles[i - 1];
        if gap > best_gap {
            best_gap = gap;
            start = angles[i];
        }
    }
    let width = TAU - best_gap;
    if width >= PI - eps {
        return WedgeResult::Degenerate;
    }
    WedgeResult::Wedge(SupportWedge {
        axis_point: a,
        axis_dir: d,
        u,
        w,
        interval: AngularInterval { start, width },
    })
}

/// Signed angle difference reduced to `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % TAU;
    if d > PI {
        d -= TAU;
    } else if d <= -PI {
        d += TAU;
    }
    d
}
