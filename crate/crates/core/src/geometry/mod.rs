//! Exact rational affine geometry, plus the floating-point predicates used
//! for rotated support planes.

pub mod isometry;
pub mod numeric;
pub mod polytope;
pub mod vec3;

pub use isometry::{Isometry, Linear};
pub use numeric::{support_wedge, AngularInterval, NumericHalfspace, SupportWedge, WedgeResult, DEFAULT_EPSILON};
pub use polytope::{ConvexPolytope3, HullFacet, Plane};
pub use vec3::{parse_rat, rat, rat_int, Point3, Rat, Vec3};
