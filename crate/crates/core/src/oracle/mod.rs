//! Ground truth: Dirichlet stereohedra of sampled base points, built by
//! clipping, used to validate the computed bounds.

mod cell;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{Catalog, QuarterGroup, TileType};
use crate::error::{Error, Result};
use crate::geometry::numeric::{dot, norm, sub, V3};
use crate::geometry::{ConvexPolytope3, Isometry, Vec3};
use crate::influence::NeighborSet;
use crate::tessellation::prototile;

pub use cell::{ClippedCell, Face, FaceLabel};

pub const DEFAULT_RADIUS: f64 = 3.0;
const MIN_FACET_AREA: f64 = 1e-10;
const COINCIDENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub point: V3,
    pub generator: Isometry,
}

/// Orbit points of `base` within `radius`, the base point itself excluded.
#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub base: V3,
    pub radius: f64,
    pub points: Vec<OrbitPoint>,
}

/// Enumerates `t ∘ r` over the representatives `r` of `g` and the integer
/// translations `t` that land within `radius` of `base`.
///
/// With `check_stabilizer`, two distinct isometries sending `base` to the
/// same point are reported; otherwise coincident points are merged.
pub fn sample_orbit(cat: &Catalog, g: &QuarterGroup, base: V3, radius: f64, check_stabilizer: bool) -> Result<OrbitSample> {
    let mut pts: Vec<OrbitPoint> = Vec::new();
    for r in cat.representatives(g) {
        let q0 = r.apply_f64(&base);
        let range = |i: usize| {
            let lo = (base[i] - radius - q0[i]).floor() as i64;
            let hi = (base[i] + radius - q0[i]).ceil() as i64;
            lo..=hi
        };
        for nx in range(0) {
            for ny in range(1) {
                for nz in range(2) {
                    let q = [q0[0] + nx as f64, q0[1] + ny as f64, q0[2] + nz as f64];
                    if norm(&sub(&q, &base)) <= radius {
                        let t = Isometry::translation(Vec3::from_ints(nx, ny, nz));
                        pts.push(OrbitPoint {
                            point: q,
                            generator: t.compose(&r),
                        });
                    }
                }
            }
        }
    }
    pts.sort_by(|a, b| a.point[0].partial_cmp(&b.point[0]).unwrap());
    let mut keep = vec![true; pts.len()];
    for i in 0..pts.len() {
        if !keep[i] {
            continue;
        }
        for j in (i + 1)..pts.len() {
            if pts[j].point[0] - pts[i].point[0] > COINCIDENCE_TOL {
                break;
            }
            if keep[j] && norm(&sub(&pts[i].point, &pts[j].point)) <= COINCIDENCE_TOL {
                if check_stabilizer {
                    return Err(Error::StabilizerDetected(i, j));
                }
                keep[j] = false;
            }
        }
    }
    let points = pts
        .into_iter()
        .zip(keep)
        .filter(|(p, k)| *k && norm(&sub(&p.point, &base)) > COINCIDENCE_TOL)
        .map(|(p, _)| p)
        .collect();
    Ok(OrbitSample { base, radius, points })
}

#[derive(Clone, Debug, Serialize)]
pub struct CellFacet {
    pub generator: Isometry,
    pub area: f64,
}

#[derive(Clone, Debug)]
pub struct VoronoiCell {
    pub base: V3,
    pub cell: ClippedCell,
    pub facets: Vec<CellFacet>,
}

impl VoronoiCell {
    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn volume(&self) -> f64 {
        self.cell.volume()
    }
}

/// Clips the box `[p - 2, p + 2]^3` by the bisectors of the base point and
/// the orbit points, nearest first.
pub fn build_cell(sample: &OrbitSample) -> Result<VoronoiCell> {
    let p = sample.base;
    let mut order: Vec<(f64, usize)> = sample
        .points
        .iter()
        .enumerate()
        .map(|(i, q)| (norm(&sub(&q.point, &p)), i))
        .collect();
    order.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut cell = ClippedCell::cuboid([p[0] - 2.0, p[1] - 2.0, p[2] - 2.0], [p[0] + 2.0, p[1] + 2.0, p[2] + 2.0]);
    let mut reach = cell.max_radius(&p);
    for (dist, i) in order {
        if dist / 2.0 > reach {
            break;
        }
        let q = sample.points[i].point;
        let n = sub(&q, &p);
        let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0];
        if cell.clip(n, dot(&n, &mid), FaceLabel::Site(i)) {
            reach = cell.max_radius(&p);
        }
    }
    let boxed = cell.faces.iter().any(|f| matches!(f.label, FaceLabel::Box(_)));
    if boxed || reach > sample.radius / 2.0 {
        return Err(Error::CutoffTooSmall { radius: sample.radius });
    }
    let facets = cell
        .faces
        .iter()
        .filter_map(|f| match f.label {
            FaceLabel::Site(i) if f.area() >= MIN_FACET_AREA => Some(CellFacet {
                generator: sample.points[i].generator,
                area: f.area(),
            }),
            _ => None,
        })
        .collect();
    Ok(VoronoiCell { base: p, cell, facets })
}

/// Uniform point of the prototile at distance at least `margin` from its
/// boundary.
pub fn random_interior_point(body: &ConvexPolytope3, margin: f64, rng: &mut impl Rng) -> Result<V3> {
    let planes: Vec<(V3, f64)> = body
        .halfspaces()?
        .iter()
        .map(|h| {
            let n = h.normal.to_f64();
            let len = norm(&n);
            ([n[0] / len, n[1] / len, n[2] / len], crate::geometry::vec3::rat_to_f64(&h.offset) / len)
        })
        .collect();
    let (lo, hi) = body.bounding_box();
    let (lo, hi) = (lo.to_f64(), hi.to_f64());
    loop {
        let x = [
            rng.gen_range(lo[0]..hi[0]),
            rng.gen_range(lo[1]..hi[1]),
            rng.gen_range(lo[2]..hi[2]),
        ];
        if planes.iter().all(|(n, d)| dot(n, &x) <= d - margin) {
            return Ok(x);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub group: String,
    pub samples: usize,
    pub max_facets_observed: usize,
    pub bound: usize,
    /// Smallest Voronoi cell volume error relative to `1 / density`.
    pub max_volume_error: f64,
    pub violations: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds Dirichlet stereohedra for `samples_per_tile` random base points in
/// each prototile and checks them against the neighbor sets (one per
/// prototile, in type order).
pub fn validate(
    cat: &Catalog,
    g: &QuarterGroup,
    neighbors: &[NeighborSet],
    samples_per_tile: usize,
    seed: u64,
) -> Result<OracleReport> {
    let bound = neighbors.iter().map(|n| n.len()).max().unwrap_or(0);
    let mut report = OracleReport {
        group: g.slug.clone(),
        samples: 0,
        max_facets_observed: 0,
        bound,
        max_volume_error: 0.0,
        violations: Vec::new(),
    };
    let expected_volume = 1.0 / g.density() as f64;
    for ns in neighbors {
        let t = ns.prototile;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((t.index() as u64 + 1) << 32));
        let body = &prototile(t).body;
        let mut done = 0;
        while done < samples_per_tile {
            let p = random_interior_point(body, 1e-4, &mut rng)?;
            let sample = match sample_orbit(cat, g, p, DEFAULT_RADIUS, true) {
                Err(Error::StabilizerDetected(..)) => continue,
                r => r?,
            };
            let cell = build_cell(&sample)?;
            done += 1;
            report.samples += 1;
            report.max_facets_observed = report.max_facets_observed.max(cell.facet_count());
            let err = (cell.volume() - expected_volume).abs() / expected_volume;
            report.max_volume_error = report.max_volume_error.max(err);
            if cell.facet_count() > bound {
                report.violations.push(format!(
                    "prototile {t}, base {p:?}: {} facets exceed bound {bound}",
                    cell.facet_count()
                ));
            }
            for f in &cell.facets {
                if !ns.contains(&f.generator) {
                    report.violations.push(format!(
                        "prototile {t}, base {p:?}: neighbor {} not in the counted set",
                        f.generator
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Union of the facet generators of `n` sampled cells in one prototile.
pub fn observed_neighbors(cat: &Catalog, g: &QuarterGroup, t: TileType, n: usize, seed: u64) -> Result<BTreeSet<Isometry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let body = &prototile(t).body;
    let mut out = BTreeSet::new();
    let mut done = 0;
    while done < n {
        let p = random_interior_point(body, 1e-4, &mut rng)?;
        let sample = match sample_orbit(cat, g, p, DEFAULT_RADIUS, true) {
            Err(Error::StabilizerDetected(..)) => continue,
            r => r?,
        };
        out.extend(build_cell(&sample)?.facets.into_iter().map(|f| f.generator));
        done += 1;
    }
    Ok(out)
}
