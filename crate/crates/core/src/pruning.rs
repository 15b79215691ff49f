//! Extended Voronoi regions as sets of tiles: starting from the initial
//! population, discard every tile that lies entirely in a region excluded by
//! a translation strip or a rotation dihedron of the group.
//!
//! All decisions are exact. A tile is discarded when its vertices lie in the
//! closed excluded region: its interior then misses every Voronoi cell of a
//! base point in the prototile.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Catalog, QuarterGroup, RotationAxis, StageId, TileType};
use crate::error::{Error, Result};
use crate::geometry::{rat, ConvexPolytope3, Plane, Rat, Vec3};
use crate::tessellation::{initial_population, prototile, Tile};

/// Points `x` with `lo <= v·x <= hi` may belong to a Voronoi cell of a base
/// point in the prototile; the rest are excluded by the translation `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationStrip {
    pub v: Vec3,
    pub lo: Rat,
    pub hi: Rat,
}

impl TranslationStrip {
    pub fn new(proto: &ConvexPolytope3, v: Vec3) -> TranslationStrip {
        assert!(!v.is_zero(), "translation vector must be nonzero");
        let mut vals = proto.vertices().iter().map(|p| v.dot(p));
        let first = vals.next().expect("nonempty prototile");
        let (m, big_m) = vals.fold((first, first), |(a, b), x| (a.min(x), b.max(x)));
        let half = v.norm2() * rat(1, 2);
        TranslationStrip {
            v,
            lo: m - half,
            hi: big_m + half,
        }
    }

    /// Every vertex on or beyond the same boundary plane.
    pub fn forbids(&self, vertices: &[Vec3]) -> bool {
        let vals: Vec<Rat> = vertices.iter().map(|p| self.v.dot(p)).collect();
        vals.iter().all(|s| *s >= self.hi) || vals.iter().all(|s| *s <= self.lo)
    }
}

pub fn forbidden_by_translation(tile: &Tile, proto: &ConvexPolytope3, v: Vec3) -> bool {
    TranslationStrip::new(proto, v).forbids(&tile.vertices)
}

/// Component of `v - a` orthogonal to the axis direction `d`.
fn perpendicular(v: &Vec3, a: &Vec3, d: &Vec3) -> Vec3 {
    let r = *v - *a;
    r - *d * (r.dot(d) / d.norm2())
}

/// The two extreme vertex directions of a body seen from a line, as
/// perpendicular components `(first, last)` in counter-clockwise order
/// around `d`. Vertices on the line are ignored. `None` when the remaining
/// directions do not fit in an open half-plane.
pub fn extreme_directions(body: &ConvexPolytope3, a: &Vec3, d: &Vec3) -> Option<(Vec3, Vec3)> {
    let dirs: Vec<Vec3> = body
        .vertices()
        .iter()
        .map(|v| perpendicular(v, a, d))
        .filter(|p| !p.is_zero())
        .collect();
    // `q` is counter-clockwise of `p` by an angle in [0, π), or clockwise.
    let ccw = |p: &Vec3, q: &Vec3| {
        let s = d.dot(&p.cross(q));
        s > rat(0, 1) || (s == rat(0, 1) && p.dot(q) > rat(0, 1))
    };
    let first = dirs.iter().find(|p| dirs.iter().all(|q| ccw(p, q)))?;
    let last = dirs.iter().find(|p| dirs.iter().all(|q| ccw(q, p)))?;
    Some((*first, *last))
}

/// The region excluded by a rotation whose axis misses the interior of the
/// prototile and sees it under an angle below π.
///
/// `h1` and `h2` are the closed half-spaces beyond the support half-planes
/// of the prototile, rotated away from it by half the rotation angle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenDihedron {
    pub axis: RotationAxis,
    /// The excluded region is the intersection of `h1` and `h2` (otherwise
    /// their union).
    pub convex: bool,
    pub h1: Plane,
    pub h2: Plane,
}

impl ForbiddenDihedron {
    /// `None` when no support half-planes exist, or for rotation orders
    /// other than 2 and 3.
    pub fn new(proto: &ConvexPolytope3, axis: &RotationAxis) -> Option<ForbiddenDihedron> {
        let (a, d) = (axis.point, axis.direction);
        let (first, last) = extreme_directions(proto, &a, &d)?;
        // Rotating a perpendicular vector by ±α/2 stays rational up to a
        // positive factor: a quarter turn is `d ×`, and a sixth of a turn
        // is minus the third-turn rotation taken the other way.
        let (u1, u2, convex) = match axis.order {
            2 => (first.cross(&d), d.cross(&last), true),
            3 => {
                let r = axis.rotation()?;
                let c = first.dot(&last);
                let wide = c <= rat(0, 1) || c * c * rat(4, 1) <= first.norm2() * last.norm2();
                (-r.apply_linear(&first), -r.apply_linear(&r.apply_linear(&last)), wide)
            }
            _ => return None,
        };
        let n1 = d.cross(&u1);
        let n2 = u2.cross(&d);
        Some(ForbiddenDihedron {
            axis: *axis,
            convex,
            h1: Plane {
                normal: n1,
                offset: n1.dot(&a),
            },
            h2: Plane {
                normal: n2,
                offset: n2.dot(&a),
            },
        })
    }

    pub fn forbids(&self, vertices: &[Vec3]) -> bool {
        let zero = rat(0, 1);
        let in1 = vertices.iter().all(|p| self.h1.eval(p) <= zero);
        let in2 = vertices.iter().all(|p| self.h2.eval(p) <= zero);
        if self.convex {
            in1 && in2
        } else {
            in1 || in2
        }
    }
}

pub fn forbidden_by_rotation(tile: &Tile, dihedron: &ForbiddenDihedron) -> bool {
    dihedron.forbids(&tile.vertices)
}

#[derive(Clone, Debug)]
pub enum Cut {
    Strip(TranslationStrip),
    Dihedron(ForbiddenDihedron),
}

impl Cut {
    pub fn forbids(&self, tile: &Tile) -> bool {
        match self {
            Cut::Strip(s) => s.forbids(&tile.vertices),
            Cut::Dihedron(d) => d.forbids(&tile.vertices),
        }
    }
}

/// Cuts contributed by one transformation set; axes that meet the
/// prototile are skipped.
pub fn stage_cuts(cat: &Catalog, stage: StageId, proto: &ConvexPolytope3) -> Vec<Cut> {
    let set = cat.transformation_set(stage);
    let strips = set
        .translations
        .iter()
        .map(|v| Cut::Strip(TranslationStrip::new(proto, *v)));
    let dihedra = set
        .axes
        .iter()
        .filter_map(|a| ForbiddenDihedron::new(proto, a).map(Cut::Dihedron));
    strips.chain(dihedra).collect()
}

/// Keeps the tiles no cut forbids, preserving order.
pub fn prune(tiles: Vec<Tile>, cuts: &[Cut]) -> Vec<Tile> {
    tiles
        .into_par_iter()
        .filter(|t| !cuts.iter().any(|c| c.forbids(t)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCount {
    pub id: String,
    pub remaining: usize,
}

/// An extended Voronoi region of a prototile, as a set of tiles.
#[derive(Clone, Debug)]
pub struct Region {
    pub group: String,
    pub prototile: TileType,
    pub survivors: Vec<Tile>,
    pub stage_log: Vec<StageCount>,
}

impl Region {
    pub fn initial(cat: &Catalog, g: &QuarterGroup, t: TileType) -> Result<Region> {
        let tiles = initial_population(cat)?;
        Ok(Region {
            group: g.slug.clone(),
            prototile: t,
            stage_log: vec![StageCount {
                id: "initial".into(),
                remaining: tiles.len(),
            }],
            survivors: tiles,
        })
    }

    pub fn len(&self) -> usize {
        self.survivors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.survivors.is_empty()
    }

    /// Applies a list of cuts as one logged stage.
    pub fn apply(&mut self, label: &str, cuts: &[Cut]) {
        let tiles = std::mem::take(&mut self.survivors);
        self.survivors = prune(tiles, cuts);
        self.log(label);
    }

    /// Records the current survivor count under `label`.
    pub fn log(&mut self, label: &str) {
        self.stage_log.push(StageCount {
            id: label.to_string(),
            remaining: self.survivors.len(),
        });
    }

    pub fn contains_prototile(&self) -> bool {
        self.survivors
            .iter()
            .any(|t| t.tile_type == self.prototile && t.placement.is_identity())
    }
}

/// Prunes the initial population with the given transformation sets of `g`,
/// in order.
pub fn run_pipeline(cat: &Catalog, g: &QuarterGroup, t: TileType, stages: &[StageId]) -> Result<Region> {
    for &s in stages {
        if !g.has_stage(s) {
            return Err(Error::StageNotApplicable {
                group: g.slug.clone(),
                stage: s,
            });
        }
    }
    let proto = &prototile(t).body;
    let mut region = Region::initial(cat, g, t)?;
    for &s in stages {
        let cuts = stage_cuts(cat, s, proto);
        region.apply(&s.to_string(), &cuts);
    }
    Ok(region)
}

/// Default stage lists: the cumulative prefixes that produce each column of
/// the bound table. Entry `k` is `None` when the group has no stage for
/// column `k + 1` among the rotation columns.
pub fn column_stages(g: &QuarterGroup) -> [Option<Vec<StageId>>; 3] {
    let mut base: Vec<StageId> = [StageId::S1, StageId::S2, StageId::S3]
        .into_iter()
        .filter(|s| g.has_stage(*s))
        .collect();
    let col1 = Some(base.clone());
    let col2 = if g.has_stage(StageId::S4) {
        base.push(StageId::S4);
        Some(base.clone())
    } else {
        None
    };
    let diag = [StageId::S5, StageId::S6].into_iter().find(|s| g.has_stage(*s));
    let col3 = diag.map(|s| {
        base.push(s);
        base.clone()
    });
    [col1, col2, col3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Isometry;

    #[test]
    fn strip_bounds_for_a0() {
        let s = TranslationStrip::new(&prototile(TileType::A).body, Vec3::from_ints(1, 0, 0));
        assert_eq!(s.lo, rat(-1, 2));
        assert_eq!(s.hi, rat(3, 4));
    }

    #[test]
    fn prototile_never_forbidden() {
        let cat = Catalog::builtin();
        for t in TileType::ALL {
            let own = Tile::prototile(t);
            for s in StageId::ALL {
                for c in stage_cuts(cat, s, &prototile(t).body) {
                    assert!(!c.forbids(&own), "{t} {s} {c:?}");
                }
            }
        }
    }

    #[test]
    fn far_tile_is_cut_by_strip() {
        let proto = &prototile(TileType::A).body;
        let t = Tile::new(TileType::A, Isometry::translation(Vec3([rat(7, 8), rat(0, 1), rat(0, 1)])));
        assert!(forbidden_by_translation(&t, proto, Vec3::from_ints(1, 0, 0)));
        let near = Tile::new(TileType::A, Isometry::translation(Vec3([rat(1, 2), rat(0, 1), rat(0, 1)])));
        assert!(!forbidden_by_translation(&near, proto, Vec3::from_ints(1, 0, 0)));
    }

    #[test]
    fn half_diagonal_cuts_opposite_corner() {
        let proto = &prototile(TileType::A).body;
        let t = Tile::new(TileType::A, Isometry::translation(Vec3::from_ints(-1, -1, -1)));
        assert!(forbidden_by_translation(&t, proto, Vec3([rat(1, 2), rat(1, 2), rat(1, 2)])));
    }

    #[test]
    fn axis_along_an_edge_is_used() {
        let ax = RotationAxis {
            point: Vec3::zero(),
            direction: Vec3::from_ints(1, 1, 1),
            order: 3,
        };
        let d = ForbiddenDihedron::new(&prototile(TileType::A).body, &ax).unwrap();
        assert!(!d.forbids(prototile(TileType::A).body.vertices()));
    }

    #[test]
    fn axis_through_interior_is_skipped() {
        let body = &prototile(TileType::A).body;
        let ax = RotationAxis {
            point: body.centroid(),
            direction: Vec3::from_ints(0, 0, 1),
            order: 2,
        };
        assert!(ForbiddenDihedron::new(body, &ax).is_none());
    }

    #[test]
    fn diad_excludes_the_far_side() {
        // Axis x = 1/2 parallel to z; the prototile sits at x <= 1/4.
        let ax = RotationAxis {
            point: Vec3([rat(1, 2), rat(0, 1), rat(0, 1)]),
            direction: Vec3::from_ints(0, 0, 1),
            order: 2,
        };
        let d = ForbiddenDihedron::new(&prototile(TileType::A).body, &ax).unwrap();
        assert!(d.convex);
        let far = Tile::new(TileType::A, Isometry::translation(Vec3::from_ints(1, 0, 0)));
        assert!(d.forbids(&far.vertices));
        assert!(!d.forbids(&Tile::prototile(TileType::A).vertices));
    }

    #[test]
    fn unknown_stage_rejected() {
        let cat = Catalog::builtin();
        let g = cat.group("P2_13").unwrap();
        let r = run_pipeline(cat, g, TileType::A, &[StageId::S4]);
        assert!(matches!(r, Err(Error::StageNotApplicable { .. })));
    }

    #[test]
    fn empty_stage_list_keeps_population() {
        let cat = Catalog::builtin();
        let g = cat.group("P2_13").unwrap();
        let r = run_pipeline(cat, g, TileType::A, &[]).unwrap();
        assert_eq!(r.len(), 3072);
    }

    #[test]
    fn column_stage_lists() {
        let cat = Catalog::builtin();
        let cols = column_stages(cat.group("P4_132").unwrap());
        assert_eq!(cols[0].as_deref(), Some(&[StageId::S1, StageId::S3][..]));
        assert!(cols[1].is_none());
        assert_eq!(cols[2].as_deref(), Some(&[StageId::S1, StageId::S3, StageId::S6][..]));
        let cols = column_stages(cat.normalizer());
        assert_eq!(cols[2].as_ref().unwrap().len(), 5);
    }
}
