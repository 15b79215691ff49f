//! Floating-point convex cells built by clipping a box with half-spaces.

use crate::geometry::numeric::{add, cross, dot, norm, scale, sub, V3};

const PLANE_TOL: f64 = 1e-12;

/// Where a face of a clipped cell came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceLabel {
    /// One of the six faces of the starting box.
    Box(usize),
    /// The bisector with orbit point number `k`.
    Site(usize),
}

#[derive(Clone, Debug)]
pub struct Face {
    pub normal: V3,
    pub offset: f64,
    pub label: FaceLabel,
    /// Counter-clockwise seen from outside.
    pub vertices: Vec<V3>,
}

impl Face {
    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        let mut acc = [0.0; 3];
        for i in 1..v.len() - 1 {
            acc = add(&acc, &cross(&sub(&v[i], &v[0]), &sub(&v[i + 1], &v[0])));
        }
        norm(&acc) / 2.0
    }
}

/// Convex polytope `{x : n·x <= d}` kept as its face polygons.
#[derive(Clone, Debug)]
pub struct ClippedCell {
    pub faces: Vec<Face>,
}

impl ClippedCell {
    /// Axis-parallel box `[lo, hi]`.
    pub fn cuboid(lo: V3, hi: V3) -> ClippedCell {
        let mut faces = Vec::with_capacity(6);
        for axis in 0..3 {
            for (k, sign) in [(0usize, -1.0), (1, 1.0)] {
                let mut n = [0.0; 3];
                n[axis] = sign;
                let d = if sign > 0.0 { hi[axis] } else { -lo[axis] };
                let (u, w) = ((axis + 1) % 3, (axis + 2) % 3);
                let c = if sign > 0.0 { hi[axis] } else { lo[axis] };
                let corner = |a: f64, b: f64| {
                    let mut p = [0.0; 3];
                    p[axis] = c;
                    p[u] = a;
                    p[w] = b;
                    p
                };
                let mut verts = vec![
                    corner(lo[u], lo[w]),
                    corner(hi[u], lo[w]),
                    corner(hi[u], hi[w]),
                    corner(lo[u], hi[w]),
                ];
                if sign < 0.0 {
                    verts.reverse();
                }
                faces.push(Face {
                    normal: n,
                    offset: d,
                    label: FaceLabel::Box(2 * axis + k),
                    vertices: verts,
                });
            }
        }
        ClippedCell { faces }
    }

    pub fn vertices(&self) -> Vec<V3> {
        let mut out: Vec<V3> = Vec::new();
        for f in &self.faces {
            for v in &f.vertices {
                if !out.iter().any(|w| norm(&sub(v, w)) < 1e-10) {
                    out.push(*v);
                }
            }
        }
        out
    }

    /// Largest distance from `p` to a vertex.
    pub fn max_radius(&self, p: &V3) -> f64 {
        self.faces
            .iter()
            .flat_map(|f| f.vertices.iter())
            .map(|v| norm(&sub(v, p)))
            .fold(0.0, f64::max)
    }

    /// Intersects with `n·x <= d`. Returns whether anything was cut off.
    pub fn clip(&mut self, n: V3, d: f64, label: FaceLabel) -> bool {
        let scale_tol = PLANE_TOL * (1.0 + d.abs());
        let any_out = self
            .faces
            .iter()
            .flat_map(|f| f.vertices.iter())
            .any(|v| dot(&n, v) > d + scale_tol);
        if !any_out {
            return false;
        }
        let mut cap: Vec<V3> = Vec::new();
        let mut new_faces = Vec::with_capacity(self.faces.len() + 1);
        for f in self.faces.drain(..) {
            let m = f.vertices.len();
            let mut out: Vec<V3> = Vec::with_capacity(m + 1);
            for i in 0..m {
                let a = f.vertices[i];
                let b = f.vertices[(i + 1) % m];
                let sa = dot(&n, &a) - d;
                let sb = dot(&n, &b) - d;
                if sa <= scale_tol {
                    out.push(a);
                    if sa.abs() <= scale_tol {
                        cap.push(a);
                    }
                }
                if (sa < -scale_tol && sb > scale_tol) || (sa > scale_tol && sb < -scale_tol) {
                    let t = sa / (sa - sb);
                    let x = add(&a, &scale(&sub(&b, &a), t));
                    out.push(x);
                    cap.push(x);
                }
            }
            if out.len() >= 3 {
                new_faces.push(Face { vertices: out, ..f });
            }
        }
        self.faces = new_faces;
        let ring = order_in_plane(&dedup(cap), &n);
        if ring.len() >= 3 {
            self.faces.push(Face {
                normal: n,
                offset: d,
                label,
                vertices: ring,
            });
        }
        true
    }

    pub fn volume(&self) -> f64 {
        let vs = self.vertices();
        if vs.is_empty() {
            return 0.0;
        }
        let c = scale(&vs.iter().fold([0.0; 3], |a, b| add(&a, b)), 1.0 / vs.len() as f64);
        let mut six = 0.0;
        for f in &self.faces {
            let v = &f.vertices;
            for i in 1..v.len().saturating_sub(1) {
                let a = sub(&v[0], &c);
                let b = sub(&v[i], &c);
                let e = sub(&v[i + 1], &c);
                six += dot(&a, &cross(&b, &e)).abs();
            }
        }
        six / 6.0
    }
}

fn dedup(points: Vec<V3>) -> Vec<V3> {
    let mut out: Vec<V3> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| norm(&sub(&p, q)) < 1e-11) {
            out.push(p);
        }
    }
    out
}

/// Sorts coplanar points counter-clockwise around `n`.
fn order_in_plane(points: &[V3], n: &V3) -> Vec<V3> {
    if points.len() < 3 {
        return points.to_vec();
    }
    let c = scale(&points.iter().fold([0.0; 3], |a, b| add(&a, b)), 1.0 / points.len() as f64);
    let (u, w) = crate::geometry::numeric::perpendicular_frame(n);
    let mut keyed: Vec<(f64, V3)> = points
        .iter()
        .map(|p| {
            let r = sub(p, &c);
            (dot(&r, &w).atan2(dot(&r, &u)), *p)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    keyed.into_iter().map(|(_, p)| p).collect()
}
