mod cache;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::Ordering;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quarter_stereo::catalog::{Catalog, QuarterGroup, StageId, TileType};
use quarter_stereo::export;
use quarter_stereo::influence::neighbor_set;
use quarter_stereo::oracle::{build_cell, sample_orbit, validate, OracleReport, DEFAULT_RADIUS};
use quarter_stereo::projection::{plane_subgroup, project_filter, Axis};
use quarter_stereo::pruning::run_pipeline;
use quarter_stereo::report::{bounds_report, compute_region, markdown, BoundsOptions, Direct, RegionSource};
use quarter_stereo::tessellation::{prototile, truncated_octahedron};
use quarter_stereo::Error;

use cache::CachedSource;
use config::RunConfig;

const EXIT_MISMATCH: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_DATA: u8 = 4;

#[derive(Parser)]
#[command(name = "qstereo", version, about = "Facet bounds for Dirichlet stereohedra of the quarter cubic groups")]
struct Cli {
    /// TOML file with run settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the bound table and compare with the reference values.
    Bounds(BoundsArgs),
    /// Check the bounds against sampled Dirichlet stereohedra.
    Oracle(OracleArgs),
    /// Write geometry files.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Args, Clone, Default)]
struct GroupSel {
    /// Group name or alias; repeatable.
    #[arg(long = "group", short)]
    groups: Vec<String>,
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    sel: GroupSel,
    /// Comma-separated stage list replacing the default columns.
    #[arg(long, value_delimiter = ',')]
    stages: Option<Vec<String>>,
    #[arg(long)]
    no_projection: bool,
    /// Tolerance of the floating-point wedge cross-check.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    sel: GroupSel,
    /// Samples per prototile.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Off,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
    Z,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Axis {
        match a {
            AxisArg::X => Axis::X,
            AxisArg::Y => Axis::Y,
            AxisArg::Z => Axis::Z,
        }
    }
}

#[derive(Subcommand)]
enum ExportCmd {
    /// One prototile as OFF.
    Prototile {
        #[arg(long)]
        tile: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// The truncated octahedron as OFF.
    Octahedron {
        #[arg(long)]
        out: PathBuf,
    },
    /// Surviving tiles of one prototile's region.
    Region {
        #[arg(long)]
        group: String,
        #[arg(long)]
        tile: String,
        #[arg(long, value_delimiter = ',')]
        stages: Option<Vec<String>>,
        #[arg(long)]
        no_projection: bool,
        #[arg(long, value_enum, default_value = "off")]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// SVG of one coordinate projection filter.
    Audit {
        #[arg(long)]
        group: String,
        #[arg(long)]
        tile: String,
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dirichlet stereohedron of one base point as OFF.
    Cell {
        #[arg(long)]
        group: String,
        /// Base point `x,y,z`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        base: Vec<f64>,
        /// Merge coincident orbit points instead of rejecting the base point.
        #[arg(long)]
        allow_stabilizer: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn select<'a>(cat: &'a Catalog, cfg: &RunConfig, sel: &GroupSel) -> anyhow::Result<Vec<&'a QuarterGroup>> {
    let names = if sel.all {
        vec!["all".to_string()]
    } else if !sel.groups.is_empty() {
        sel.groups.clone()
    } else {
        cfg.groups.clone()
    };
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(cat.groups().iter().collect());
    }
    let mut out: Vec<&QuarterGroup> = Vec::new();
    for n in &names {
        let g = cat.group(n)?;
        if !out.iter().any(|x| x.slug == g.slug) {
            out.push(g);
        }
    }
    // Reports are ordered like the catalog whatever the flag order.
    out.sort_by_key(|g| cat.groups().iter().position(|x| x.slug == g.slug));
    Ok(out)
}

fn parse_stages(s: &[String]) -> anyhow::Result<Vec<StageId>> {
    s.iter().map(|x| Ok(x.parse::<StageId>()?)).collect()
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct Meta {
    elapsed_seconds: f64,
    cache_hits: usize,
    cache_misses: usize,
}

fn cmd_bounds(cat: &Catalog, mut cfg: RunConfig, a: BoundsArgs) -> anyhow::Result<u8> {
    if let Some(s) = a.stages {
        cfg.stages = Some(s);
    }
    if a.no_projection {
        cfg.projection = false;
    }
    if let Some(e) = a.eps {
        cfg.eps = e;
    }
    if let Some(o) = a.out {
        cfg.out_dir = o;
    }
    if a.no_cache {
        cfg.cache = false;
    }
    if let Some(d) = a.cache_dir {
        cfg.cache_dir = d;
    }
    if !(cfg.eps > 0.0 && cfg.eps.is_finite()) {
        bail!(Error::Catalog(format!("epsilon must be positive, got {}", cfg.eps)));
    }
    let groups = select(cat, &cfg, &a.sel)?;
    let opts = BoundsOptions {
        projection: cfg.projection,
        stages: cfg.stages.as_deref().map(parse_stages).transpose()?,
    };
    let start = Instant::now();
    let cached = CachedSource::new(cfg.cache_dir.clone(), cfg.eps);
    let source: &dyn RegionSource = if cfg.cache { &cached } else { &Direct };
    let report = bounds_report(cat, &groups, &opts, cfg.eps, source)?;
    let md = markdown(&report);
    write(&cfg.out_dir.join("bounds.json"), &serde_json::to_string_pretty(&report)?)?;
    write(&cfg.out_dir.join("bounds.md"), &md)?;
    let meta = Meta {
        elapsed_seconds: start.elapsed().as_secs_f64(),
        cache_hits: cached.hits.load(Ordering::Relaxed),
        cache_misses: cached.misses.load(Ordering::Relaxed),
    };
    write(&cfg.out_dir.join("meta.json"), &serde_json::to_string_pretty(&meta)?)?;
    print!("{md}");
    Ok(if report.global_violation() {
        EXIT_VIOLATION
    } else if !report.hard_failures().is_empty() {
        EXIT_MISMATCH
    } else {
        0
    })
}

fn cmd_oracle(cat: &Catalog, mut cfg: RunConfig, a: OracleArgs) -> anyhow::Result<u8> {
    if let Some(s) = a.samples {
        cfg.samples = s;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(o) = a.out {
        cfg.out_dir = o;
    }
    let groups = select(cat, &cfg, &a.sel)?;
    let mut reports: Vec<OracleReport> = Vec::new();
    for g in groups {
        let sets = TileType::ALL
            .iter()
            .map(|&t| {
                let r = compute_region(cat, g, t, &g.transformation_sets, cfg.projection)?;
                neighbor_set(cat, g, &r)
            })
            .collect::<quarter_stereo::Result<Vec<_>>>()?;
        let r = validate(cat, g, &sets, cfg.samples, cfg.seed)?;
        println!(
            "{:8} samples {:4}  max facets {:3}  bound {:3}  volume error {:.1e}  {}",
            r.group,
            r.samples,
            r.max_facets_observed,
            r.bound,
            r.max_volume_error,
            if r.passed() { "ok" } else { "VIOLATED" }
        );
        for v in &r.violations {
            println!("  {v}");
        }
        reports.push(r);
    }
    write(&cfg.out_dir.join("oracle.json"), &serde_json::to_string_pretty(&reports)?)?;
    Ok(if reports.iter().all(OracleReport::passed) { 0 } else { EXIT_VIOLATION })
}

fn cmd_export(cat: &Catalog, cmd: ExportCmd) -> anyhow::Result<u8> {
    let (path, text) = match cmd {
        ExportCmd::Prototile { tile, out } => {
            let t: TileType = tile.parse()?;
            (out, export::polytope_to_off(&prototile(t).body)?)
        }
        ExportCmd::Octahedron { out } => (out, export::polytope_to_off(&truncated_octahedron())?),
        ExportCmd::Region {
            group,
            tile,
            stages,
            no_projection,
            format,
            out,
        } => {
            let g = cat.group(&group)?;
            let stages = match stages {
                Some(s) => parse_stages(&s)?,
                None => g.transformation_sets.clone(),
            };
            let r = compute_region(cat, g, tile.parse()?, &stages, !no_projection)?;
            let text = match format {
                Format::Off => export::region_to_off(&r)?,
                Format::Json => export::region_to_json(&r)?,
            };
            (out, text)
        }
        ExportCmd::Audit { group, tile, axis, out } => {
            let g = cat.group(&group)?;
            let k = Axis::from(axis);
            let mut r = run_pipeline(cat, g, tile.parse()?, &g.transformation_sets)?;
            let before = r.survivors.clone();
            project_filter(cat, g, &mut r, k);
            let kept: std::collections::HashSet<_> = r.survivors.iter().map(|t| (t.tile_type, t.placement)).collect();
            let dropped: Vec<_> = before
                .into_iter()
                .filter(|t| !kept.contains(&(t.tile_type, t.placement)))
                .collect();
            let elements = plane_subgroup(cat, g, k);
            (out, export::planar_audit_svg(&r, &dropped, &elements, k)?)
        }
        ExportCmd::Cell {
            group,
            base,
            allow_stabilizer,
            out,
        } => {
            let g = cat.group(&group)?;
            if base.len() != 3 {
                bail!("--base takes three coordinates, got {}", base.len());
            }
            let sample = sample_orbit(cat, g, [base[0], base[1], base[2]], DEFAULT_RADIUS, !allow_stabilizer)?;
            let cell = build_cell(&sample)?;
            println!("{} facets, volume {:.6}", cell.facet_count(), cell.volume());
            (out, export::cell_to_off(&cell)?)
        }
    };
    write(&path, &text)?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Parse(_)
            | Error::Catalog(_)
            | Error::NotInNormalizer(_)
            | Error::PopulationInvariantViolation(_)
            | Error::UnknownGroup(_)
            | Error::StageNotApplicable { .. },
        ) => EXIT_DATA,
        Some(Error::BoundViolated { .. }) => EXIT_VIOLATION,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cat = Catalog::builtin();
    match cli.command {
        Command::Bounds(a) => cmd_bounds(cat, cfg, a),
        Command::Oracle(a) => cmd_oracle(cat, cfg, a),
        Command::Export(c) => cmd_export(cat, c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
