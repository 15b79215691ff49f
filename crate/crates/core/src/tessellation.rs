//! The auxiliary tessellation: the four prototiles that subdivide the
//! fundamental domain of N(Q), and the initial population of tiles inside
//! `[-1, 1]^3`.

use std::collections::HashSet;

use once_cell::sync::Lazy;
use serde::Serialize;

use crate::catalog::{triad_powers, Catalog, TileType};
use crate::error::{Error, Result};
use crate::geometry::{rat, ConvexPolytope3, Isometry, Point3, Rat, Vec3};

#[derive(Clone, Debug)]
pub struct Prototile {
    pub tile_type: TileType,
    pub body: ConvexPolytope3,
}

fn pt(c: [(i64, i64); 3]) -> Point3 {
    Vec3([rat(c[0].0, c[0].1), rat(c[1].0, c[1].1), rat(c[2].0, c[2].1)])
}

static PROTOTILES: Lazy<[Prototile; 4]> = Lazy::new(|| {
    let o = (0, 1);
    let a = vec![
        pt([o, o, o]),
        pt([(1, 8), (1, 8), (1, 8)]),
        pt([(1, 4), (1, 16), (1, 16)]),
        pt([(1, 4), (1, 8), o]),
        pt([(3, 16), (3, 16), o]),
        pt([(1, 4), o, o]),
    ];
    let b = vec![
        pt([o, o, o]),
        pt([(1, 4), o, o]),
        pt([(1, 4), (1, 8), o]),
        pt([(3, 16), (3, 16), o]),
        pt([(1, 4), o, (-1, 8)]),
        pt([(1, 8), o, (-1, 4)]),
        pt([(1, 16), (1, 16), (-1, 4)]),
        pt([o, o, (-1, 4)]),
    ];
    let c = vec![
        pt([o, o, o]),
        pt([(1, 4), o, o]),
        pt([(1, 4), (-1, 16), (-1, 16)]),
        pt([(1, 4), o, (-1, 8)]),
        pt([(1, 8), o, (-1, 4)]),
        pt([o, (-3, 16), (-3, 16)]),
        pt([o, (-1, 8), (-1, 4)]),
        pt([o, o, (-1, 4)]),
    ];
    let d = vec![
        pt([o, o, o]),
        pt([o, (-3, 16), (-3, 16)]),
        pt([(-1, 16), (-1, 16), (-1, 4)]),
        pt([o, (-1, 8), (-1, 4)]),
        pt([(-1, 8), (-1, 8), (-1, 8)]),
        pt([o, o, (-1, 4)]),
    ];
    let mk = |tile_type, v| Prototile {
        tile_type,
        body: ConvexPolytope3::new(v),
    };
    [
        mk(TileType::A, a),
        mk(TileType::B, b),
        mk(TileType::C, c),
        mk(TileType::D, d),
    ]
});

pub fn prototile(t: TileType) -> &'static Prototile {
    &PROTOTILES[t.index()]
}

/// Voronoi cell of the origin in the degenerate N(Q)-orbit through it, a
/// body-centred cubic lattice of side 1/2.
pub fn truncated_octahedron() -> ConvexPolytope3 {
    let mut v = Vec::with_capacity(24);
    let q = rat(1, 4);
    let e = rat(1, 8);
    let z = rat(0, 1);
    for s in [1, -1] {
        for u in [1, -1] {
            let a = q * rat(s, 1);
            let b = e * rat(u, 1);
            for perm in [[a, b, z], [a, z, b], [z, a, b], [b, a, z], [b, z, a], [z, b, a]] {
                v.push(Vec3(perm));
            }
        }
    }
    ConvexPolytope3::new(v)
}

/// A tile of the auxiliary tessellation: the image of a prototile under an
/// element of N(Q).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tile {
    #[serde(rename = "type")]
    pub tile_type: TileType,
    #[serde(rename = "matrix")]
    pub placement: Isometry,
    pub vertices: Vec<Point3>,
    #[serde(skip)]
    pub vertices_f64: Vec<[f64; 3]>,
}

impl Tile {
    pub fn new(tile_type: TileType, placement: Isometry) -> Tile {
        let vertices: Vec<Point3> = prototile(tile_type)
            .body
            .vertices()
            .iter()
            .map(|p| placement.apply(p))
            .collect();
        let vertices_f64 = vertices.iter().map(|p| p.to_f64()).collect();
        Tile {
            tile_type,
            placement,
            vertices,
            vertices_f64,
        }
    }

    /// The prototile itself, as a tile.
    pub fn prototile(t: TileType) -> Tile {
        Tile::new(t, Isometry::identity())
    }

    pub fn body(&self) -> ConvexPolytope3 {
        ConvexPolytope3::new(self.vertices.clone())
    }

    pub fn transform(&self, g: &Isometry) -> Tile {
        Tile::new(self.tile_type, g.compose(&self.placement))
    }

    pub fn in_box(&self, lo: &Point3, hi: &Point3) -> bool {
        self.vertices
            .iter()
            .all(|v| (0..3).all(|i| lo.0[i] <= v.0[i] && v.0[i] <= hi.0[i]))
    }
}

/// Translations applied to the unit-cube tiles to fill `[-1, 1]^3`.
pub fn population_translations() -> [Vec3; 8] {
    [
        Vec3::from_ints(0, 0, 0),
        Vec3::from_ints(-1, 0, 0),
        Vec3::from_ints(0, -1, 0),
        Vec3::from_ints(0, 0, -1),
        Vec3::from_ints(-1, -1, 0),
        Vec3::from_ints(-1, 0, -1),
        Vec3::from_ints(0, -1, -1),
        Vec3::from_ints(-1, -1, -1),
    ]
}

/// Initial tiles of one type, ordered by (coset, column, triad power,
/// translation).
pub fn initial_tiles(cat: &Catalog, t: TileType) -> Vec<Tile> {
    let mut out = Vec::with_capacity(768);
    for row in cat.horizontal_isometries(t) {
        for h in row {
            for r in triad_powers() {
                let base = r.compose(h);
                for v in population_translations() {
                    out.push(Tile::new(t, Isometry::translation(v).compose(&base)));
                }
            }
        }
    }
    out
}

/// All 3072 initial tiles, grouped by type in the order A, B, C, D.
pub fn initial_population(cat: &Catalog) -> Result<Vec<Tile>> {
    let lo = Vec3::from_ints(-1, -1, -1);
    let hi = Vec3::from_ints(1, 1, 1);
    let mut all = Vec::with_capacity(3072);
    for t in TileType::ALL {
        let tiles = initial_tiles(cat, t);
        let distinct: HashSet<&Isometry> = tiles.iter().map(|x| &x.placement).collect();
        if tiles.len() != 768 || distinct.len() != 768 {
            return Err(Error::PopulationInvariantViolation(format!(
                "type {t}: {} tiles, {} distinct",
                tiles.len(),
                distinct.len()
            )));
        }
        if let Some(bad) = tiles.iter().find(|x| !x.in_box(&lo, &hi)) {
            return Err(Error::PopulationInvariantViolation(format!(
                "type {t} tile {} leaves [-1,1]^3",
                bad.placement
            )));
        }
        if !tiles.iter().any(|x| x.placement.is_identity()) {
            return Err(Error::PopulationInvariantViolation(format!("prototile {t} missing")));
        }
        all.extend(tiles);
    }
    Ok(all)
}

pub fn tiles_in_box<'a>(tiles: &'a [Tile], lo: &Point3, hi: &Point3) -> Vec<&'a Tile> {
    tiles.iter().filter(|t| t.in_box(lo, hi)).collect()
}

/// Sum of the four prototile volumes (a fundamental domain of N(Q)).
pub fn fundamental_domain_volume() -> Result<Rat> {
    let mut total = rat(0, 1);
    for t in TileType::ALL {
        total += prototile(t).body.volume()?;
    }
    Ok(total)
}
