use num_traits::{Signed, Zero};

use super::isometry::Isometry;
use super::vec3::{rat_int, Point3, Rat, Vec3};
use crate::error::{Error, Result};

/// Closed half-space `normal · x <= offset`, exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: Rat,
}

impl Plane {
    pub fn eval(&self, p: &Point3) -> Rat {
        self.normal.dot(p) - self.offset
    }
}

/// A facet of a hull: its supporting plane (outward normal) and the indices
/// of its vertices in counter-clockwise order seen from outside.
#[derive(Clone, Debug)]
pub struct HullFacet {
    pub plane: Plane,
    pub vertices: Vec<usize>,
}

/// Convex hull of a finite point set, given by its vertices.
///
/// Input points need not be in convex position; the hull is implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolytope3 {
    vertices: Vec<Point3>,
}

impl ConvexPolytope3 {
    /// Panics on an empty vertex list.
    pub fn new(vertices: Vec<Point3>) -> Self {
        assert!(!vertices.is_empty(), "polytope needs at least one vertex");
        ConvexPolytope3 { vertices }
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn transform(&self, g: &Isometry) -> ConvexPolytope3 {
        ConvexPolytope3 {
            vertices: self.vertices.iter().map(|p| g.apply(p)).collect(),
        }
    }

    pub fn centroid(&self) -> Point3 {
        let n = rat_int(self.vertices.len() as i64);
        let sum = self.vertices.iter().fold(Vec3::zero(), |a, b| a + *b);
        sum * (Rat::from_integer(1) / n)
    }

    pub fn bounding_box(&self) -> (Point3, Point3) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            for i in 0..3 {
                if v.0[i] < lo.0[i] {
                    lo.0[i] = v.0[i];
                }
                if v.0[i] > hi.0[i] {
                    hi.0[i] = v.0[i];
                }
            }
        }
        (lo, hi)
    }

    /// Facets of the convex hull. Fails when the points are coplanar.
    pub fn hull_facets(&self) -> Result<Vec<HullFacet>> {
        hull_facets(&self.vertices)
    }

    /// Supporting half-spaces of the hull.
    pub fn halfspaces(&self) -> Result<Vec<Plane>> {
        Ok(self.hull_facets()?.into_iter().map(|f| f.plane).collect())
    }

    /// Exact volume of the convex hull.
    pub fn volume(&self) -> Result<Rat> {
        let facets = self.hull_facets()?;
        Ok(volume_from_facets(&self.vertices, &facets))
    }

    /// Indices of the vertices that are extreme points of the hull.
    pub fn extreme_vertices(&self) -> Result<Vec<usize>> {
        let mut idx: Vec<usize> = self
            .hull_facets()?
            .into_iter()
            .flat_map(|f| f.vertices)
            .collect();
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    /// Exact volume of the intersection with `other`; zero when the interiors
    /// are disjoint.
    pub fn intersection_volume(&self, other: &ConvexPolytope3) -> Result<Rat> {
        let mut planes = self.halfspaces()?;
        planes.extend(other.halfspaces()?);
        let pts = vertices_of_halfspaces(&planes);
        if pts.len() < 4 {
            return Ok(Rat::zero());
        }
        match hull_facets(&pts) {
            Ok(f) => Ok(volume_from_facets(&pts, &f)),
            Err(Error::DegenerateBody) => Ok(Rat::zero()),
            Err(e) => Err(e),
        }
    }
}

fn dedup_points(points: &[Point3]) -> Vec<Point3> {
    let mut v = points.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Brute-force exact hull: every plane through three points that has all
/// points on one side supports a facet. Fine for the small vertex counts
/// handled here.
fn hull_facets(points: &[Point3]) -> Result<Vec<HullFacet>> {
    let n = points.len();
    let mut planes: Vec<Plane> = Vec::new();
    let mut full_dim = false;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let normal = (points[j] - points[i]).cross(&(points[k] - points[i]));
                if normal.is_zero() {
                    continue;
                }
                let normal = normal.primitive();
                let offset = normal.dot(&points[i]);
                let (mut above, mut below) = (false, false);
                for p in points {
                    let s = normal.dot(p) - offset;
                    if s > Rat::zero() {
                        above = true;
                    } else if s < Rat::zero() {
                        below = true;
                    }
                }
                if above || below {
                    full_dim = true;
                }
                let plane = match (above, below) {
                    (false, true) => Plane { normal, offset },
                    (true, false) => Plane {
                        normal: -normal,
                        offset: -offset,
                    },
                    _ => continue,
                };
                if !planes.contains(&plane) {
                    planes.push(plane);
                }
            }
        }
    }
    if !full_dim {
        return Err(Error::DegenerateBody);
    }
    let mut facets = Vec::with_capacity(planes.len());
    for plane in planes {
        let on: Vec<usize> = (0..n)
            .filter(|&i| plane.eval(&points[i]).is_zero())
            .collect();
        // Drop duplicate points so the ring ordering is well defined.
        let mut uniq: Vec<usize> = Vec::new();
        for i in on {
            if !uniq.iter().any(|&j| points[j] == points[i]) {
                uniq.push(i);
            }
        }
        let ring = order_ring(points, &uniq, &plane.normal);
        facets.push(HullFacet {
            plane,
            vertices: ring,
        });
    }
    Ok(facets)
}

/// Orders coplanar points counter-clockwise around `normal`, keeping only
/// the corners of their convex hull.
fn order_ring(points: &[Point3], idx: &[usize], normal: &Vec3) -> Vec<usize> {
    if idx.len() <= 2 {
        return idx.to_vec();
    }
    // Gift wrapping in the facet plane.
    let start = *idx
        .iter()
        .min_by(|&&a, &&b| points[a].cmp(&points[b]))
        .unwrap();
    let mut ring = vec![start];
    let mut current = start;
    loop {
        let mut candidate = None;
        for &c in idx {
            if c == current {
                continue;
            }
            let Some(best) = candidate else {
                candidate = Some(c);
                continue;
            };
            let a = points[best] - points[current];
            let b = points[c] - points[current];
            let turn = normal.dot(&a.cross(&b));
            // c is to the right of current->best: wrap tighter.
            if turn < Rat::zero() || (turn.is_zero() && b.norm2() > a.norm2()) {
                candidate = Some(c);
            }
        }
        let next = candidate.unwrap();
        if next == start {
            break;
        }
        ring.push(next);
        current = next;
        if ring.len() > idx.len() {
            break;
        }
    }
    ring
}

fn volume_from_facets(points: &[Point3], facets: &[HullFacet]) -> Rat {
    let uniq = dedup_points(points);
    let c = uniq.iter().fold(Vec3::zero(), |a, b| a + *b) * (Rat::from_integer(1) / rat_int(uniq.len() as i64));
    let mut six_vol = Rat::zero();
    for f in facets {
        if f.vertices.len() < 3 {
            continue;
        }
        let v0 = points[f.vertices[0]] - c;
        for w in f.vertices[1..].windows(2) {
            let a = points[w[0]] - c;
            let b = points[w[1]] - c;
            six_vol += v0.dot(&a.cross(&b)).abs();
        }
    }
    six_vol / rat_int(6)
}

/// Solves the 3x3 system given by three planes (as equalities).
fn intersect_planes(a: &Plane, b: &Plane, c: &Plane) -> Option<Point3> {
    let det = a.normal.dot(&b.normal.cross(&c.normal));
    if det.is_zero() {
        return None;
    }
    let p = b.normal.cross(&c.normal) * a.offset
        + c.normal.cross(&a.normal) * b.offset
        + a.normal.cross(&b.normal) * c.offset;
    Some(p * (Rat::from_integer(1) / det))
}

/// Vertices of a bounded H-polytope by enumerating plane triples.
pub fn vertices_of_halfspaces(planes: &[Plane]) -> Vec<Point3> {
    let mut out: Vec<Point3> = Vec::new();
    let n = planes.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if let Some(p) = intersect_planes(&planes[i], &planes[j], &planes[k]) {
                    if planes.iter().all(|h| h.eval(&p) <= Rat::zero()) && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}
