use std::collections::HashSet;

use serde::Deserialize;

use super::types::*;
use super::{triad_powers, Catalog};
use crate::error::{Error, ParseError, Result};
use crate::geometry::{parse_rat, rat, Isometry, Vec3};

/// Raw text of every catalog data file.
#[derive(Clone, Debug)]
pub struct CatalogSources {
    pub horizontal_a: String,
    /// Overrides for types B, C and D, in that order.
    pub overrides: [String; 3],
    pub s3: String,
    pub s4: String,
    pub s5: String,
    pub s6: String,
    pub groups: String,
}

impl CatalogSources {
    pub fn builtin() -> CatalogSources {
        CatalogSources {
            horizontal_a: include_str!("../../data/horizontal_a.txt").to_string(),
            overrides: [
                include_str!("../../data/overrides_b.txt").to_string(),
                include_str!("../../data/overrides_c.txt").to_string(),
                include_str!("../../data/overrides_d.txt").to_string(),
            ],
            s3: include_str!("../../data/s3_triads.txt").to_string(),
            s4: include_str!("../../data/s4_coordinate_diads.txt").to_string(),
            s5: include_str!("../../data/s5_diagonal_diads.txt").to_string(),
            s6: include_str!("../../data/s6_diagonal_diads.txt").to_string(),
            groups: include_str!("../../data/groups.toml").to_string(),
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn record_err(file: &str, line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Record {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parses records `C<k> <column> l11 .. l33 t1 t2 t3`.
pub fn parse_horizontal_table(text: &str, file: &str) -> Result<Vec<(CosetId, usize, Isometry)>, ParseError> {
    let mut out = Vec::new();
    for (line, fields) in data_lines(text) {
        if fields.len() != 14 {
            return Err(record_err(file, line, format!("expected 14 fields, found {}", fields.len())));
        }
        let coset: CosetId = fields[0].parse().map_err(|e: Error| record_err(file, line, e.to_string()))?;
        let col: usize = fields[1]
            .parse()
            .ok()
            .filter(|c| (1..=4).contains(c))
            .ok_or_else(|| record_err(file, line, format!("bad column {:?}", fields[1])))?;
        let iso = Isometry::parse_record(&fields[2..]).map_err(|e| record_err(file, line, e.to_string()))?;
        out.push((coset, col - 1, iso));
    }
    Ok(out)
}

/// Parses records `px py pz dx dy dz order`.
pub fn parse_axes(text: &str, file: &str) -> Result<Vec<RotationAxis>, ParseError> {
    let mut out = Vec::new();
    for (line, fields) in data_lines(text) {
        if fields.len() != 7 {
            return Err(record_err(file, line, format!("expected 7 fields, found {}", fields.len())));
        }
        let mut v = [rat(0, 1); 6];
        for (k, f) in fields[..6].iter().enumerate() {
            v[k] = parse_rat(f).map_err(|e| record_err(file, line, e.to_string()))?;
        }
        let order: u8 = match fields[6] {
            "2" => 2,
            "3" => 3,
            o => return Err(record_err(file, line, format!("bad rotation order {o:?}"))),
        };
        let direction = Vec3([v[3], v[4], v[5]]);
        if direction.is_zero() {
            return Err(record_err(file, line, "zero direction"));
        }
        out.push(RotationAxis {
            point: Vec3([v[0], v[1], v[2]]),
            direction,
            order,
        });
    }
    Ok(out)
}

#[derive(Deserialize)]
struct GroupsFile {
    group: Vec<QuarterGroup>,
}

pub(super) fn build(src: &CatalogSources) -> Result<Catalog> {
    let horizontal = build_horizontal(src)?;
    let sets = build_sets(src)?;
    let parsed: GroupsFile =
        toml::from_str(&src.groups).map_err(|e| Error::Catalog(format!("groups.toml: {e}")))?;
    let groups = parsed.group;
    for g in &groups {
        check_group(g)?;
    }
    let cat = Catalog::from_parts(horizontal, groups, sets)?;
    check_coset_structure(&cat)?;
    check_axes(&cat)?;
    Ok(cat)
}

fn build_horizontal(src: &CatalogSources) -> Result<[[[Isometry; 4]; 8]; 4]> {
    let a = parse_horizontal_table(&src.horizontal_a, "horizontal_a.txt")?;
    let mut table = [[[Isometry::identity(); 4]; 8]; 4];
    let mut seen = HashSet::new();
    for (c, col, iso) in a {
        if !seen.insert((c, col)) {
            return Err(Error::Catalog(format!("duplicate type-A entry {c} column {}", col + 1)));
        }
        table[0][c.index()][col] = iso;
    }
    if seen.len() != 32 {
        return Err(Error::Catalog(format!("type-A table has {} entries, expected 32", seen.len())));
    }
    for (k, (text, name)) in src
        .overrides
        .iter()
        .zip(["overrides_b.txt", "overrides_c.txt", "overrides_d.txt"])
        .enumerate()
    {
        table[k + 1] = table[0];
        for (c, col, iso) in parse_horizontal_table(text, name)? {
            let base = table[0][c.index()][col];
            if base.mod_lattice_key() != iso.mod_lattice_key() {
                return Err(Error::Catalog(format!(
                    "{name}: {c} column {} is not the type-A entry up to an integer translation",
                    col + 1
                )));
            }
            table[k + 1][c.index()][col] = iso;
        }
    }
    Ok(table)
}

fn build_sets(src: &CatalogSources) -> Result<Vec<TransformationSet>> {
    let s1 = (0..3)
        .flat_map(|i| {
            [1, -1].map(move |s| {
                let mut v = [0i64; 3];
                v[i] = s;
                Vec3::from_ints(v[0], v[1], v[2])
            })
        })
        .collect();
    let h = |s: i64| rat(s, 2);
    let mut s2 = Vec::with_capacity(8);
    for x in [1, -1] {
        for y in [1, -1] {
            for z in [1, -1] {
                s2.push(Vec3([h(x), h(y), h(z)]));
            }
        }
    }
    let set = |id, translations, axes| TransformationSet { id, translations, axes };
    Ok(vec![
        set(StageId::S1, s1, vec![]),
        set(StageId::S2, s2, vec![]),
        set(StageId::S3, vec![], parse_axes(&src.s3, "s3_triads.txt")?),
        set(StageId::S4, vec![], parse_axes(&src.s4, "s4_coordinate_diads.txt")?),
        set(StageId::S5, vec![], parse_axes(&src.s5, "s5_diagonal_diads.txt")?),
        set(StageId::S6, vec![], parse_axes(&src.s6, "s6_diagonal_diads.txt")?),
    ])
}

fn check_group(g: &QuarterGroup) -> Result<()> {
    let fail = |msg: String| Err(Error::Catalog(format!("group {}: {msg}", g.slug)));
    if !g.cosets.contains(&CosetId::C1) {
        return fail("C1 missing".into());
    }
    let uniq: HashSet<_> = g.cosets.iter().collect();
    if uniq.len() != g.cosets.len() || ![1, 2, 4, 8].contains(&g.cosets.len()) {
        return fail(format!("bad coset list {:?}", g.cosets));
    }
    let body_centred = g.cosets.contains(&CosetId::C3) && g.slug.starts_with('I');
    if body_centred != (g.lattice == Lattice::I) {
        return fail(format!("lattice {:?} inconsistent with cosets", g.lattice));
    }
    if g.aspects != g.computed_aspects() {
        return fail(format!("aspects {} but cosets imply {}", g.aspects, g.computed_aspects()));
    }
    let has_translation_stage = g.has_stage(StageId::S1);
    if !has_translation_stage || !g.has_stage(StageId::S3) {
        return fail("every group uses S1 and S3".into());
    }
    if g.has_stage(StageId::S2) != (g.lattice == Lattice::I) {
        return fail("S2 is used exactly by body-centred groups".into());
    }
    Ok(())
}

/// N(Q)/Q has order 8 and each group's cosets form a subgroup of it.
fn check_coset_structure(cat: &Catalog) -> Result<()> {
    let rep = |c: CosetId| cat.horizontal_isometries(TileType::A)[c.index()][0];
    let mut product = [[CosetId::C1; 8]; 8];
    for a in CosetId::ALL {
        for b in CosetId::ALL {
            product[a.index()][b.index()] = cat.classify_coset(&rep(a).compose(&rep(b)))?;
        }
    }
    for a in CosetId::ALL {
        // Every entry of a coset and its triad conjugates classify consistently.
        for h in &cat.horizontal_isometries(TileType::A)[a.index()] {
            for r in triad_powers() {
                if cat.classify_coset(&r.compose(h))? != a {
                    return Err(Error::Catalog(format!("{a}: representatives disagree")));
                }
            }
        }
    }
    for g in cat.groups() {
        for &a in &g.cosets {
            for &b in &g.cosets {
                let c = product[a.index()][b.index()];
                if !g.cosets.contains(&c) {
                    return Err(Error::Catalog(format!(
                        "group {}: {a}·{b} = {c} leaves the group",
                        g.slug
                    )));
                }
            }
        }
    }
    Ok(())
}

fn check_axes(cat: &Catalog) -> Result<()> {
    for set in cat.transformation_sets() {
        for ax in &set.axes {
            let d = ax.direction.primitive();
            let abs: Vec<i64> = d.0.iter().map(|c| c.to_integer().abs()).collect();
            let ok = match set.id {
                StageId::S3 => ax.order == 3 && abs == [1, 1, 1],
                StageId::S4 => ax.order == 2 && abs.iter().sum::<i64>() == 1,
                StageId::S5 | StageId::S6 => {
                    ax.order == 2 && abs.iter().filter(|&&v| v == 1).count() == 2 && abs.contains(&0)
                }
                _ => false,
            };
            if !ok {
                return Err(Error::Catalog(format!("{}: axis {:?} has the wrong shape", set.id, ax)));
            }
            let rot = ax
                .rotation()
                .ok_or_else(|| Error::Catalog(format!("{}: no rotation for {:?}", set.id, ax)))?;
            for g in cat.groups().iter().filter(|g| g.has_stage(set.id)) {
                if !cat.is_member(g, &rot)? {
                    return Err(Error::Catalog(format!(
                        "{}: rotation about {:?} is not in {}",
                        set.id, ax, g.slug
                    )));
                }
            }
        }
    }
    let s5 = &cat.transformation_set(StageId::S5).axes;
    for ax in &cat.transformation_set(StageId::S6).axes {
        if !s5.iter().any(|b| b.same_line(ax)) {
            return Err(Error::Catalog(format!("S6 axis {ax:?} is not an S5 line")));
        }
    }
    Ok(())
}
