//! Planar projection filter: the subgroup of a quarter group that keeps
//! every plane `x_k = const` acts on that plane as a wallpaper group, and a
//! tile whose projection is excluded by one planar element can be dropped.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Catalog, PlaneGroupType, QuarterGroup};
use crate::geometry::{rat, Isometry, Rat, Vec3};
use crate::pruning::Region;
use crate::tessellation::{prototile, Tile};

pub type Vec2 = [Rat; 2];

/// Coordinate axis along which we project.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two coordinates kept by the projection, in increasing order.
    pub fn kept(self) -> [usize; 2] {
        match self {
            Axis::X => [1, 2],
            Axis::Y => [0, 2],
            Axis::Z => [0, 1],
        }
    }

    pub fn project(self, p: &Vec3) -> Vec2 {
        let [i, j] = self.kept();
        [p.0[i], p.0[j]]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarKind {
    Translation { vector: Vec2 },
    HalfTurn { center: Vec2 },
    /// `vector` is parallel to the axis through `point`; zero for a mirror.
    Glide { point: Vec2, direction: Vec2, vector: Vec2 },
    /// Quarter turns and anything else without a closer description.
    Other,
}

/// An element of the plane subgroup, acting by `x ↦ m x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanarElement {
    pub kind: PlanarKind,
    pub m: [[i32; 2]; 2],
    pub t: Vec2,
    /// The 3D isometry it comes from.
    pub source: Isometry,
}

fn dot2(a: &Vec2, b: &Vec2) -> Rat {
    a[0] * b[0] + a[1] * b[1]
}

fn apply_m(m: &[[i32; 2]; 2], v: &Vec2) -> Vec2 {
    let e = |r: usize| rat(m[r][0] as i64, 1) * v[0] + rat(m[r][1] as i64, 1) * v[1];
    [e(0), e(1)]
}

impl PlanarElement {
    /// The planar action of `g`, when `g` maps every plane `x_k = c` to
    /// itself.
    pub fn from_isometry(g: &Isometry, k: Axis) -> Option<PlanarElement> {
        let l = g.linear();
        let kk = k.index();
        let fixes_axis = (0..3).all(|r| l[r][kk] == i32::from(r == kk)) && (0..3).all(|c| l[kk][c] == i32::from(c == kk));
        if !fixes_axis || g.translation_part().0[kk] != rat(0, 1) {
            return None;
        }
        let [i, j] = k.kept();
        let m = [[l[i][i], l[i][j]], [l[j][i], l[j][j]]];
        let t = k.project(g.translation_part());
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let trace = m[0][0] + m[1][1];
        let half = rat(1, 2);
        let kind = if m == [[1, 0], [0, 1]] {
            PlanarKind::Translation { vector: t }
        } else if m == [[-1, 0], [0, -1]] {
            PlanarKind::HalfTurn {
                center: [t[0] * half, t[1] * half],
            }
        } else if det == -1 && trace == 0 {
            let mt = apply_m(&m, &t);
            let vector = [(t[0] + mt[0]) * half, (t[1] + mt[1]) * half];
            let point = [(t[0] - mt[0]) * rat(1, 4), (t[1] - mt[1]) * rat(1, 4)];
            // Fixed direction of the reflection part.
            let direction = if m[0][0] == 1 {
                [rat(1, 1), rat(0, 1)]
            } else if m[0][0] == -1 {
                [rat(0, 1), rat(1, 1)]
            } else {
                [rat(1, 1), rat(m[1][0] as i64, 1)]
            };
            PlanarKind::Glide { point, direction, vector }
        } else {
            PlanarKind::Other
        };
        Some(PlanarElement { kind, m, t, source: *g })
    }

    pub fn apply(&self, p: &Vec2) -> Vec2 {
        let mp = apply_m(&self.m, p);
        [mp[0] + self.t[0], mp[1] + self.t[1]]
    }

    /// `|x - p|² - |x - g p|²`: nonnegative exactly when `x` is at least as
    /// close to `g p` as to `p`.
    pub fn excess(&self, x: &Vec2, p: &Vec2) -> Rat {
        let gp = self.apply(p);
        let d = [gp[0] - p[0], gp[1] - p[1]];
        rat(2, 1) * dot2(x, &d) + dot2(p, p) - dot2(&gp, &gp)
    }

    /// Whether every point of `conv(xs)` is at least as close to `g p` as to
    /// `p`, for every `p` in `conv(ps)`.
    ///
    /// The excess is affine in each argument separately, so vertex pairs
    /// suffice.
    pub fn excludes(&self, xs: &[Vec2], ps: &[Vec2]) -> bool {
        let zero = rat(0, 1);
        ps.iter().all(|p| xs.iter().all(|x| self.excess(x, p) >= zero))
    }

    /// Distance-squared proxy from the origin to the locus of the element.
    fn locus_norm2(&self) -> Rat {
        match &self.kind {
            PlanarKind::Translation { .. } | PlanarKind::Other => rat(0, 1),
            PlanarKind::HalfTurn { center } => dot2(center, center),
            PlanarKind::Glide { point, .. } => dot2(point, point),
        }
    }
}

/// Elements of `G` keeping each plane `x_k = c`, of the form `τ ∘ r` with
/// `r` a representative and `τ` an integer translation in `[-3, 3]^3`,
/// whose locus lies within distance 3 of the origin. The identity is left
/// out.
pub fn plane_subgroup(cat: &Catalog, g: &QuarterGroup, k: Axis) -> Vec<PlanarElement> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in cat.representatives(g) {
        for nx in -3..=3 {
            for ny in -3..=3 {
                for nz in -3..=3 {
                    let e = Isometry::translation(Vec3::from_ints(nx, ny, nz)).compose(&r);
                    if e.is_identity() {
                        continue;
                    }
                    let Some(pe) = PlanarElement::from_isometry(&e, k) else { continue };
                    if pe.locus_norm2() <= rat(9, 1) && seen.insert((pe.m, pe.t)) {
                        out.push(pe);
                    }
                }
            }
        }
    }
    out
}

/// Wallpaper type read off from the kinds of elements present.
pub fn infer_plane_type(elements: &[PlanarElement]) -> PlaneGroupType {
    let half_turns = elements.iter().any(|e| matches!(e.kind, PlanarKind::HalfTurn { .. }));
    let glides = elements.iter().any(|e| matches!(e.kind, PlanarKind::Glide { .. }));
    match (half_turns, glides) {
        (false, false) => PlaneGroupType::P1,
        (true, false) => PlaneGroupType::P2,
        (false, true) => PlaneGroupType::Pg,
        (true, true) => PlaneGroupType::Pgg,
    }
}

fn projected(vertices: &[Vec3], k: Axis) -> Vec<Vec2> {
    vertices.iter().map(|v| k.project(v)).collect()
}

/// Whether the projection of `tile` is excluded by some single element,
/// for base points in the prototile.
pub fn tile_excluded(tile: &Tile, proto_proj: &[Vec2], elements: &[PlanarElement], k: Axis) -> bool {
    let xs = projected(&tile.vertices, k);
    elements.iter().any(|e| e.excludes(&xs, proto_proj))
}

/// Drops the tiles whose projection along `k` is excluded by the plane
/// subgroup, logging one stage.
pub fn project_filter(cat: &Catalog, g: &QuarterGroup, region: &mut Region, k: Axis) {
    let elements = plane_subgroup(cat, g, k);
    let proto_proj = projected(prototile(region.prototile).body.vertices(), k);
    let tiles = std::mem::take(&mut region.survivors);
    region.survivors = tiles
        .into_par_iter()
        .filter(|t| !tile_excluded(t, &proto_proj, &elements, k))
        .collect();
    region.log(&format!("proj-{k}"));
}

/// Applies the filter for the three coordinate projections.
pub fn project_all(cat: &Catalog, g: &QuarterGroup, region: &mut Region) {
    for k in Axis::ALL {
        project_filter(cat, g, region, k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TileType;
    use crate::pruning::run_pipeline;

    #[test]
    fn plane_types_match_catalog() {
        let cat = Catalog::builtin();
        for g in cat.groups() {
            for k in Axis::ALL {
                assert_eq!(infer_plane_type(&plane_subgroup(cat, g, k)), g.plane_group, "{} {k}", g.slug);
            }
        }
    }

    #[test]
    fn p1_filter_changes_nothing() {
        let cat = Catalog::builtin();
        let g = cat.group("P2_13").unwrap();
        for t in TileType::ALL {
            let mut r = run_pipeline(cat, g, t, &g.transformation_sets).unwrap();
            let before = r.len();
            project_all(cat, g, &mut r);
            assert_eq!(r.len(), before, "{t}");
        }
    }

    #[test]
    fn glide_decomposition() {
        // (x, y) ↦ (x + 1/2, -y + 1/2): axis y = 1/4, glide 1/2 along x.
        let g = Isometry::new([[1, 0, 0], [0, -1, 0], [0, 0, 1]], Vec3([rat(1, 2), rat(1, 2), rat(0, 1)])).unwrap();
        let pe = PlanarElement::from_isometry(&g, Axis::Z).unwrap();
        match pe.kind {
            PlanarKind::Glide { point, vector, .. } => {
                assert_eq!(point, [rat(0, 1), rat(1, 4)]);
                assert_eq!(vector, [rat(1, 2), rat(0, 1)]);
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn translation_test_matches_strip() {
        let g = Isometry::translation(Vec3::from_ints(1, 0, 0));
        let pe = PlanarElement::from_isometry(&g, Axis::Z).unwrap();
        let ps = [[rat(0, 1), rat(0, 1)], [rat(1, 4), rat(0, 1)]];
        assert!(pe.excludes(&[[rat(3, 4), rat(5, 1)]], &ps));
        assert!(!pe.excludes(&[[rat(3, 4) - rat(1, 64), rat(0, 1)]], &ps));
    }

    #[test]
    fn vertical_moves_are_not_planar() {
        let g = Isometry::translation(Vec3::from_ints(0, 0, 1));
        assert!(PlanarElement::from_isometry(&g, Axis::Z).is_none());
        assert!(PlanarElement::from_isometry(&g, Axis::X).is_some());
    }
}
