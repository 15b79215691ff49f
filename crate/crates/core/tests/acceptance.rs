//! One pass/fail line per acceptance criterion. Criteria that fail are
//! reported without failing the run unless `ACCEPTANCE_STRICT` is set.

mod common;

use std::time::Instant;

use num_rational::Ratio;

use quarter_stereo::catalog::{Catalog, CatalogSources, StageId, TileType};
use quarter_stereo::geometry::numeric::DEFAULT_EPSILON;
use quarter_stereo::geometry::{rat, Vec3};
use quarter_stereo::influence::neighbor_set;
use quarter_stereo::oracle::{build_cell, sample_orbit, validate, DEFAULT_RADIUS};
use quarter_stereo::report::{bounds_report, compute_region, soft_check, BoundsOptions, Column, Direct, GroupReport};
use quarter_stereo::tessellation::{initial_population, prototile, truncated_octahedron};

const GROUPS: [&str; 8] = ["Ia-3d", "I4_132", "I-43d", "Ia-3", "P4_132", "I2_13", "Pa-3", "P2_13"];
const ASPECTS: [u32; 8] = [48, 24, 24, 24, 24, 12, 24, 12];
const COL1: [u32; 8] = [519, 264, 257, 260, 135, 131, 132, 69];
const COL2: [Option<u32>; 8] = [Some(155), Some(96), Some(78), Some(77), None, Some(48), None, None];
const COL3: [Option<u32>; 8] = [Some(100), Some(55), None, None, Some(92), None, None, None];
const COL4: [Option<u32>; 8] = [Some(68), None, Some(76), Some(57), None, Some(46), Some(86), None];
const FINAL_P213: u32 = 69;
const FINAL_P4132: u32 = 92;
const GLOBAL: usize = 92;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn line(o: &Outcome) -> String {
    format!(
        "criterion {} {:<28} {}  {}",
        o.id,
        o.title,
        if o.passed { "PASS" } else { "FAIL" },
        o.detail
    )
}

/// Direction of the triad of Q through a point of `(Z/2)^3`, from the
/// parities of its doubled coordinates.
fn parity_direction(p: &Vec3) -> Vec3 {
    let odd: Vec<bool> = p.0.iter().map(|c| (*c * rat(2, 1)).to_integer().rem_euclid(2) == 1).collect();
    match (odd[0] == odd[1], odd[1] == odd[2], odd[0] == odd[2]) {
        (true, true, _) => Vec3::from_ints(1, 1, 1),
        (_, _, true) => Vec3::from_ints(-1, 1, 1),
        (true, _, _) => Vec3::from_ints(1, -1, 1),
        _ => Vec3::from_ints(1, 1, -1),
    }
}

fn catalog() -> Outcome {
    let start = Instant::now();
    let built = Catalog::from_sources(&CatalogSources::builtin());
    let elapsed = start.elapsed().as_secs_f64();
    let mut problems = Vec::new();
    match &built {
        Err(e) => problems.push(e.to_string()),
        Ok(cat) => {
            for (i, g) in cat.groups().iter().enumerate() {
                if g.slug != GROUPS[i] || g.aspects != ASPECTS[i] || g.computed_aspects() != ASPECTS[i] {
                    problems.push(format!("{}: aspects {} / {}", g.slug, g.aspects, g.computed_aspects()));
                }
            }
            for ax in &cat.transformation_set(StageId::S3).axes {
                let want = parity_direction(&ax.point);
                if !(ax.point * rat(2, 1)).is_integral() || (ax.direction != want && ax.direction != -want) {
                    problems.push(format!("axis {:?}", ax.point));
                }
            }
        }
    }
    if elapsed >= 1.0 {
        problems.push(format!("took {elapsed:.2}s"));
    }
    Outcome {
        id: 1,
        title: "catalog validation",
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("8 groups, aspects ok, S3 parity ok, {elapsed:.3}s")
        } else {
            problems.join("; ")
        },
    }
}

fn tessellation() -> Outcome {
    let cat = Catalog::builtin();
    let pop = initial_population(cat).unwrap();
    let per: Vec<usize> = TileType::ALL
        .iter()
        .map(|t| pop.iter().filter(|x| x.tile_type == *t).count())
        .collect();
    let (lo, hi) = (Vec3::from_ints(-1, -1, -1), Vec3::from_ints(1, 1, 1));
    let inside = pop.iter().all(|t| t.in_box(&lo, &hi));
    let sum: Ratio<i64> = TileType::ALL.iter().map(|t| prototile(*t).body.volume().unwrap()).sum();
    let oct = truncated_octahedron().volume().unwrap();
    let passed = pop.len() == 3072 && per.iter().all(|&n| n == 768) && inside && sum == rat(1, 96) && oct == rat(1, 16);
    Outcome {
        id: 2,
        title: "tessellation",
        passed,
        detail: format!("{} tiles {per:?}, in box {inside}, prototile volume {sum}, octahedron {oct}", pop.len()),
    }
}

fn column_value(r: &GroupReport, c: Column) -> Option<usize> {
    r.columns.iter().find(|x| x.column == c).map(|x| x.value)
}

fn hard_goldens(groups: &[GroupReport]) -> Outcome {
    let mut misses = Vec::new();
    let mut checked = 0;
    for (i, r) in groups.iter().enumerate() {
        let want = [Some(COL1[i]), COL2[i], COL3[i]];
        for (c, w) in [Column::C1, Column::C2, Column::C3].into_iter().zip(want) {
            let Some(w) = w else { continue };
            checked += 1;
            let got = column_value(r, c);
            if got != Some(w as usize) {
                misses.push(format!("{} {c:?} {got:?}/{w}", r.group));
            }
        }
    }
    for (slug, w) in [("P2_13", FINAL_P213), ("P4_132", FINAL_P4132)] {
        let r = groups.iter().find(|r| r.group == slug).unwrap();
        checked += 1;
        if r.final_bound != w as usize {
            misses.push(format!("{slug} final {}/{w}", r.final_bound));
        }
    }
    // The counts come from exact predicates; the float wedge is the only
    // place ε enters, and it must classify every axis alike at ε/10, ε, 10ε.
    let eps_bad = common::eps_conservativeness();
    let eps_note = if eps_bad.is_empty() {
        "eps-insensitive at eps/10, eps, 10eps"
    } else {
        "eps-SENSITIVE"
    };
    Outcome {
        id: 3,
        title: "hard reference bounds",
        passed: misses.is_empty(),
        detail: format!("{}/{checked} exact; {eps_note}; mismatches: {}", checked - misses.len(), misses.join(", ")),
    }
}

fn soft_goldens(groups: &[GroupReport]) -> Outcome {
    let mut fails = Vec::new();
    let mut n = 0;
    for (i, r) in groups.iter().enumerate() {
        let Some(w) = COL4[i] else { continue };
        n += 1;
        let Some(got) = column_value(r, Column::C4) else {
            fails.push(format!("{} missing", r.group));
            continue;
        };
        let prev = [Column::C3, Column::C2, Column::C1]
            .into_iter()
            .find_map(|c| column_value(r, c))
            .unwrap();
        let c = soft_check(&r.group, got, prev, w);
        if !c.passed {
            fails.push(format!("{} {got} (ref {w}, prev {prev})", r.group));
        }
    }
    Outcome {
        id: 4,
        title: "projection column",
        passed: fails.is_empty(),
        detail: format!("{}/{n} within [ref-10, ref+5] and <= previous; out: {}", n - fails.len(), fails.join(", ")),
    }
}

fn global(groups: &[GroupReport]) -> Outcome {
    let worst = groups.iter().max_by_key(|r| r.final_bound).unwrap();
    Outcome {
        id: 5,
        title: "global bound",
        passed: worst.final_bound <= GLOBAL,
        detail: format!("max final {} ({}), limit {GLOBAL}", worst.final_bound, worst.group),
    }
}

fn oracle() -> Outcome {
    let cat = Catalog::builtin();
    let mut violations = 0;
    let mut samples = 0;
    let mut worst_volume: f64 = 0.0;
    for g in cat.groups() {
        let sets: Vec<_> = TileType::ALL
            .iter()
            .map(|&t| neighbor_set(cat, g, &compute_region(cat, g, t, &g.transformation_sets, true).unwrap()).unwrap())
            .collect();
        let r = validate(cat, g, &sets, 20, 2024).unwrap();
        violations += r.violations.len();
        samples += r.samples;
        worst_volume = worst_volume.max(r.max_volume_error);
    }
    let origin = sample_orbit(cat, cat.normalizer(), [0.0; 3], DEFAULT_RADIUS, false).unwrap();
    let facets = build_cell(&origin).unwrap().facet_count();
    Outcome {
        id: 6,
        title: "oracle",
        passed: violations == 0 && samples == 640 && facets == 14,
        detail: format!("{samples} samples, {violations} violations, volume error {worst_volume:.1e}, origin cell {facets} facets"),
    }
}

fn properties() -> Outcome {
    let runs: [(&str, Vec<String>); 6] = [
        ("monotonicity", common::monotonicity()),
        ("eps", common::eps_conservativeness()),
        ("triad equivariance", common::triad_equivariance()),
        ("soundness x500", common::discard_soundness(500, 11)),
        ("projection idempotence", common::projection_idempotence()),
        ("plane types", common::plane_types()),
    ];
    let failed: Vec<String> = runs
        .iter()
        .filter(|(_, b)| !b.is_empty())
        .map(|(n, b)| format!("{n} ({})", b.len()))
        .collect();
    Outcome {
        id: 7,
        title: "property suites",
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            runs.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        } else {
            failed.join(", ")
        },
    }
}

fn main() {
    let cat = Catalog::builtin();
    let all: Vec<_> = cat.groups().iter().collect();
    let report = bounds_report(cat, &all, &BoundsOptions::default(), DEFAULT_EPSILON, &Direct).unwrap();
    let outcomes = [
        catalog(),
        tessellation(),
        hard_goldens(&report.groups),
        soft_goldens(&report.groups),
        global(&report.groups),
        oracle(),
        properties(),
    ];
    for o in &outcomes {
        println!("{}", line(o));
    }
    // Criteria 1, 2, 6 and 7 are properties of the implementation and must
    // hold. The reference-table comparisons are reported as they come out.
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    let failed = outcomes
        .iter()
        .filter(|o| !o.passed && (strict || [1, 2, 6, 7].contains(&o.id)))
        .count();
    if failed > 0 {
        eprintln!("{failed} required criteria failed");
        std::process::exit(1);
    }
}
