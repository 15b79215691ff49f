//! OFF, JSON and SVG writers for prototiles, regions, planar audits and
//! Voronoi cells.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::vec3::rat_to_f64;
use crate::geometry::ConvexPolytope3;
use crate::oracle::VoronoiCell;
use crate::projection::{Axis, PlanarElement, PlanarKind, Vec2};
use crate::pruning::{Region, StageCount};
use crate::tessellation::{prototile, Tile};

/// OFF text for a union of convex polytopes, faces listed per body.
pub fn polytopes_to_off(bodies: &[ConvexPolytope3]) -> Result<String> {
    if bodies.is_empty() {
        return Err(Error::ExportEmpty);
    }
    let mut verts: Vec<[f64; 3]> = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for b in bodies {
        let base = verts.len();
        verts.extend(b.vertices().iter().map(|v| v.to_f64()));
        for f in b.hull_facets()? {
            faces.push(f.vertices.iter().map(|i| base + i).collect());
        }
    }
    Ok(off_text(&verts, &faces))
}

pub fn polytope_to_off(body: &ConvexPolytope3) -> Result<String> {
    polytopes_to_off(std::slice::from_ref(body))
}

/// Only the vertices that occur in faces are written, so interior points
/// of the input are dropped.
fn off_text(verts: &[[f64; 3]], faces: &[Vec<usize>]) -> String {
    let mut used = vec![usize::MAX; verts.len()];
    let mut kept = Vec::new();
    for f in faces {
        for &i in f {
            if used[i] == usize::MAX {
                used[i] = kept.len();
                kept.push(verts[i]);
            }
        }
    }
    let mut s = String::from("OFF\n");
    let _ = writeln!(s, "{} {} 0", kept.len(), faces.len());
    for v in &kept {
        let _ = writeln!(s, "{} {} {}", v[0], v[1], v[2]);
    }
    for f in faces {
        let idx: Vec<String> = f.iter().map(|i| used[*i].to_string()).collect();
        let _ = writeln!(s, "{} {}", f.len(), idx.join(" "));
    }
    s
}

pub fn region_to_off(region: &Region) -> Result<String> {
    let bodies: Vec<ConvexPolytope3> = region.survivors.iter().map(Tile::body).collect();
    polytopes_to_off(&bodies)
}

pub fn cell_to_off(cell: &VoronoiCell) -> Result<String> {
    let faces = &cell.cell.faces;
    if faces.is_empty() {
        return Err(Error::ExportEmpty);
    }
    let mut verts: Vec<[f64; 3]> = Vec::new();
    let mut idx = Vec::new();
    for f in faces {
        let mut ring = Vec::new();
        for v in &f.vertices {
            let i = match verts.iter().position(|w| (0..3).all(|k| (w[k] - v[k]).abs() < 1e-10)) {
                Some(i) => i,
                None => {
                    verts.push(*v);
                    verts.len() - 1
                }
            };
            ring.push(i);
        }
        idx.push(ring);
    }
    Ok(off_text(&verts, &idx))
}

#[derive(Serialize)]
pub struct TileRecord {
    #[serde(rename = "type")]
    pub tile_type: String,
    /// Linear part row by row, then translation.
    pub id: String,
}

#[derive(Serialize)]
pub struct RegionRecord<'a> {
    pub group: &'a str,
    pub prototile: String,
    pub stages: &'a [StageCount],
    pub survivors: Vec<TileRecord>,
}

pub fn region_record(region: &Region) -> RegionRecord<'_> {
    RegionRecord {
        group: &region.group,
        prototile: region.prototile.to_string(),
        stages: &region.stage_log,
        survivors: region
            .survivors
            .iter()
            .map(|t| TileRecord {
                tile_type: t.tile_type.to_string(),
                id: t.placement.to_record(),
            })
            .collect(),
    }
}

pub fn region_to_json(region: &Region) -> Result<String> {
    Ok(serde_json::to_string_pretty(&region_record(region))?)
}

fn to_f(v: &Vec2) -> [f64; 2] {
    [rat_to_f64(&v[0]), rat_to_f64(&v[1])]
}

fn polygon_points(ps: &[[f64; 2]], scale: f64) -> String {
    // Angular sort around the centroid turns a vertex set into a polygon.
    let n = ps.len() as f64;
    let c = ps.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0] / n, a[1] + p[1] / n]);
    let mut v = ps.to_vec();
    v.sort_by(|a, b| {
        let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
        let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
        ta.partial_cmp(&tb).unwrap()
    });
    v.iter()
        .map(|p| format!("{:.3},{:.3}", p[0] * scale, -p[1] * scale))
        .collect::<Vec<_>>()
        .join(" ")
}

/// SVG of one coordinate projection: kept and discarded tiles, the
/// projected prototile, and the loci of the planar elements.
pub fn planar_audit_svg(region: &Region, discarded: &[Tile], elements: &[PlanarElement], k: Axis) -> Result<String> {
    if region.survivors.is_empty() && discarded.is_empty() {
        return Err(Error::ExportEmpty);
    }
    let scale = 400.0;
    let proj = |t: &Tile| -> Vec<[f64; 2]> { t.vertices.iter().map(|v| to_f(&k.project(v))).collect() };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        -1.1 * scale,
        -1.1 * scale,
        2.2 * scale,
        2.2 * scale
    );
    for t in discarded {
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="#eeeeee" stroke="#cccccc" stroke-width="0.5"/>"##,
            polygon_points(&proj(t), scale)
        );
    }
    for t in &region.survivors {
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.3" stroke="#3182bd" stroke-width="0.5"/>"##,
            polygon_points(&proj(t), scale)
        );
    }
    let own: Vec<[f64; 2]> = prototile(region.prototile)
        .body
        .vertices()
        .iter()
        .map(|v| to_f(&k.project(v)))
        .collect();
    let _ = writeln!(s, r##"<polygon points="{}" fill="#de2d26"/>"##, polygon_points(&own, scale));
    for e in elements {
        match &e.kind {
            PlanarKind::HalfTurn { center } => {
                let c = to_f(center);
                if c[0].abs() <= 1.0 && c[1].abs() <= 1.0 {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="black"/>"#,
                        c[0] * scale,
                        -c[1] * scale
                    );
                }
            }
            PlanarKind::Glide { point, direction, .. } => {
                let (p, d) = (to_f(point), to_f(direction));
                let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let (a, b) = (
                    [p[0] - 2.0 * d[0] / len, p[1] - 2.0 * d[1] / len],
                    [p[0] + 2.0 * d[0] / len, p[1] + 2.0 * d[1] / len],
                );
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-dasharray="4 3" stroke-width="0.7"/>"#,
                    a[0] * scale,
                    -a[1] * scale,
                    b[0] * scale,
                    -b[1] * scale
                );
            }
            PlanarKind::Translation { .. } | PlanarKind::Other => {}
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
