//! Property checks shared by the property suite and the acceptance run.
//! Each returns a list of counterexamples, empty when the property holds.

#![allow(dead_code)]

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use quarter_stereo::catalog::{Catalog, QuarterGroup, RotationAxis, StageId, TileType};
use quarter_stereo::geometry::numeric::DEFAULT_EPSILON;
use quarter_stereo::geometry::{Isometry, Vec3};
use quarter_stereo::oracle::random_interior_point;
use quarter_stereo::projection::{infer_plane_type, plane_subgroup, project_all, Axis};
use quarter_stereo::pruning::{column_stages, run_pipeline, Cut, ForbiddenDihedron, Region, TranslationStrip};
use quarter_stereo::report::{compute_region, wedge_check};
use quarter_stereo::tessellation::{initial_population, prototile, Tile};

pub fn cat() -> &'static Catalog {
    Catalog::builtin()
}

fn keys(tiles: &[Tile]) -> HashSet<(TileType, Isometry)> {
    tiles.iter().map(|t| (t.tile_type, t.placement)).collect()
}

/// Every further column keeps a subset of the previous one's tiles, and the
/// projection filter keeps a subset of the full 3D region.
pub fn monotonicity() -> Vec<String> {
    let mut bad = Vec::new();
    for g in cat().groups() {
        for t in TileType::ALL {
            let mut prev = keys(&initial_population(cat()).unwrap());
            let mut steps: Vec<Region> = column_stages(g)
                .iter()
                .flatten()
                .map(|s| run_pipeline(cat(), g, t, s).unwrap())
                .collect();
            steps.push(compute_region(cat(), g, t, &g.transformation_sets, true).unwrap());
            for (i, r) in steps.iter().enumerate() {
                let cur = keys(&r.survivors);
                if !cur.is_subset(&prev) {
                    bad.push(format!("{} {t}: step {i} adds tiles", g.slug));
                }
                if !r.contains_prototile() {
                    bad.push(format!("{} {t}: step {i} drops the prototile", g.slug));
                }
                prev = cur;
            }
        }
    }
    bad
}

/// The floating-point wedge agrees with the exact extreme directions at
/// `ε/10`, `ε` and `10ε`. Pruning itself is exact, so survivor counts do not
/// depend on `ε`.
pub fn eps_conservativeness() -> Vec<String> {
    let mut bad = Vec::new();
    for g in cat().groups() {
        let checks: Vec<_> = [DEFAULT_EPSILON / 10.0, DEFAULT_EPSILON, DEFAULT_EPSILON * 10.0]
            .iter()
            .map(|&e| wedge_check(cat(), g, e))
            .collect();
        for c in &checks {
            if c.disagree > 0 {
                bad.push(format!("{} at eps {:e}: {} disagreements", g.slug, c.eps, c.disagree));
            }
        }
        if checks.iter().any(|c| (c.agree, c.touching) != (checks[0].agree, checks[0].touching)) {
            bad.push(format!("{}: wedge classification depends on eps", g.slug));
        }
    }
    bad
}

/// `R(x, y, z) = (z, x, y)`.
pub fn triad() -> Isometry {
    Isometry::new([[0, 0, 1], [1, 0, 0], [0, 1, 0]], Vec3::from_ints(0, 0, 0)).unwrap()
}

/// The initial population is R-invariant, and every single cut commutes
/// with R: the cut built from `R(T0)` and the rotated translation or axis
/// forbids `R(T)` exactly when the original cut forbids `T`. The listed
/// axis sets themselves are not closed under R, so this is checked per cut
/// rather than per stage.
pub fn triad_equivariance() -> Vec<String> {
    let mut bad = Vec::new();
    let r = triad();
    let pop = initial_population(cat()).unwrap();
    let rotated: Vec<Tile> = pop.iter().map(|t| t.transform(&r)).collect();
    if keys(&rotated) != keys(&pop) {
        bad.push("initial population is not R-invariant".into());
        return bad;
    }
    for t in TileType::ALL {
        let proto = &prototile(t).body;
        let moved = proto.transform(&r);
        for s in StageId::ALL {
            let set = cat().transformation_set(s);
            let mut pairs: Vec<(String, Option<Cut>, Option<Cut>)> = set
                .translations
                .iter()
                .map(|v| {
                    (
                        format!("{v:?}"),
                        Some(Cut::Strip(TranslationStrip::new(proto, *v))),
                        Some(Cut::Strip(TranslationStrip::new(&moved, r.apply_linear(v)))),
                    )
                })
                .collect();
            for a in &set.axes {
                let image = RotationAxis {
                    point: r.apply(&a.point),
                    direction: r.apply_linear(&a.direction),
                    order: a.order,
                };
                pairs.push((
                    format!("{:?}", a.point),
                    ForbiddenDihedron::new(proto, a).map(Cut::Dihedron),
                    ForbiddenDihedron::new(&moved, &image).map(Cut::Dihedron),
                ));
            }
            for (name, c, c_moved) in pairs {
                match (c, c_moved) {
                    (None, None) => {}
                    (Some(c), Some(cm)) => {
                        let diff = pop
                            .par_iter()
                            .zip(rotated.par_iter())
                            .filter(|(x, rx)| c.forbids(x) != cm.forbids(rx))
                            .count();
                        if diff > 0 {
                            bad.push(format!("{t} {s} {name}: {diff} tiles differ"));
                        }
                    }
                    _ => bad.push(format!("{t} {s} {name}: cut exists on one side only")),
                }
            }
        }
    }
    bad
}

/// Interior point of a tile, as a random convex combination of its vertices.
fn random_point_in(tile: &Tile, rng: &mut impl Rng) -> [f64; 3] {
    let w: Vec<f64> = tile.vertices_f64.iter().map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    let s: f64 = w.iter().sum();
    let mut x = [0.0; 3];
    for (v, wi) in tile.vertices_f64.iter().zip(&w) {
        for k in 0..3 {
            x[k] += v[k] * wi / s;
        }
    }
    x
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}

/// Some orbit point of `p` other than `p` is at least as close to `x`.
/// Brute force over representatives and the lattice translates near `x`.
fn excluded_by_orbit(reps: &[Isometry], p: &[f64; 3], x: &[f64; 3]) -> bool {
    let own = dist2(x, p);
    reps.iter().any(|r| {
        let q0 = r.apply_f64(p);
        let base: Vec<f64> = (0..3).map(|k| (x[k] - q0[k]).round()).collect();
        (-1..=1).any(|i| {
            (-1..=1).any(|j| {
                (-1..=1).any(|l| {
                    let q = [q0[0] + base[0] + i as f64, q0[1] + base[1] + j as f64, q0[2] + base[2] + l as f64];
                    dist2(&q, p) > 1e-18 && dist2(x, &q) <= own + 1e-12
                })
            })
        })
    })
}

/// Random (discarded tile point, prototile base point) pairs: the point must
/// be no closer to the base point than to some other orbit point.
pub fn discard_soundness(pairs: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pop = initial_population(cat()).unwrap();
    let mut cases: Vec<(&QuarterGroup, TileType, Vec<Tile>, Vec<Isometry>)> = Vec::new();
    for g in cat().groups() {
        let reps = cat().representatives(g);
        for t in TileType::ALL {
            let kept = keys(&compute_region(cat(), g, t, &g.transformation_sets, true).unwrap().survivors);
            let dropped: Vec<Tile> = pop
                .iter()
                .filter(|x| !kept.contains(&(x.tile_type, x.placement)))
                .cloned()
                .collect();
            cases.push((g, t, dropped, reps.clone()));
        }
    }
    let mut bad = Vec::new();
    for i in 0..pairs {
        let (g, t, dropped, reps) = &cases[i % cases.len()];
        let tile = &dropped[rng.gen_range(0..dropped.len())];
        let x = random_point_in(tile, &mut rng);
        let p = random_interior_point(&prototile(*t).body, 1e-6, &mut rng).unwrap();
        if !excluded_by_orbit(reps, &p, &x) {
            bad.push(format!("{} {t}: tile {} point {x:?} base {p:?}", g.slug, tile.placement));
        }
    }
    bad
}

/// Running the projection filter a second time changes nothing.
pub fn projection_idempotence() -> Vec<String> {
    let mut bad = Vec::new();
    for g in cat().groups() {
        for t in TileType::ALL {
            let mut r = compute_region(cat(), g, t, &g.transformation_sets, true).unwrap();
            let once = keys(&r.survivors);
            project_all(cat(), g, &mut r);
            if keys(&r.survivors) != once {
                bad.push(format!("{} {t}", g.slug));
            }
        }
    }
    bad
}

/// The wallpaper type read off the plane subgroup matches the catalog label
/// on all three coordinate planes.
pub fn plane_types() -> Vec<String> {
    let mut bad = Vec::new();
    for g in cat().groups() {
        for k in Axis::ALL {
            let got = infer_plane_type(&plane_subgroup(cat(), g, k));
            if got != g.plane_group {
                bad.push(format!("{} axis {k}: {got} vs {}", g.slug, g.plane_group));
            }
        }
    }
    bad
}
