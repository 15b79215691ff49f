//! Survivor cache: one JSON file per (group, prototile, stages, projection,
//! ε), named by the SHA-256 of that key.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use quarter_stereo::catalog::{Catalog, QuarterGroup, StageId, TileType};
use quarter_stereo::geometry::Isometry;
use quarter_stereo::pruning::{Region, StageCount};
use quarter_stereo::report::{compute_region, RegionSource};
use quarter_stereo::tessellation::Tile;
use quarter_stereo::Result;

const FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    stages: Vec<(String, usize)>,
    /// Tile type and placement record.
    survivors: Vec<(String, String)>,
}

pub struct CachedSource {
    pub dir: PathBuf,
    pub eps: f64,
    pub hits: AtomicUsize,
    pub misses: AtomicUsize,
}

impl CachedSource {
    pub fn new(dir: PathBuf, eps: f64) -> CachedSource {
        CachedSource {
            dir,
            eps,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    fn key(&self, g: &QuarterGroup, t: TileType, stages: &[StageId], projection: bool) -> String {
        let stages: Vec<String> = stages.iter().map(|s| s.to_string()).collect();
        format!(
            "v{FORMAT}|{}|{t}|{}|proj={projection}|eps={:e}",
            g.slug,
            stages.join(","),
            self.eps
        )
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.json"))
    }

    fn load(&self, key: &str, g: &QuarterGroup, t: TileType) -> Option<Region> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.key != key {
            return None;
        }
        let mut survivors = Vec::with_capacity(e.survivors.len());
        for (ty, rec) in &e.survivors {
            let fields: Vec<&str> = rec.split_whitespace().collect();
            survivors.push(Tile::new(ty.parse().ok()?, Isometry::parse_record(&fields).ok()?));
        }
        Some(Region {
            group: g.slug.clone(),
            prototile: t,
            survivors,
            stage_log: e
                .stages
                .into_iter()
                .map(|(id, remaining)| StageCount { id, remaining })
                .collect(),
        })
    }

    fn store(&self, key: &str, r: &Region) {
        let e = Entry {
            key: key.to_string(),
            stages: r.stage_log.iter().map(|s| (s.id.clone(), s.remaining)).collect(),
            survivors: r
                .survivors
                .iter()
                .map(|x| (x.tile_type.to_string(), x.placement.to_record()))
                .collect(),
        };
        // A cache that cannot be written is only a missed speed-up.
        if std::fs::create_dir_all(&self.dir).is_ok() {
            if let Ok(text) = serde_json::to_string(&e) {
                let _ = std::fs::write(self.path(key), text);
            }
        }
    }
}

impl RegionSource for CachedSource {
    fn region(&self, cat: &Catalog, g: &QuarterGroup, t: TileType, stages: &[StageId], projection: bool) -> Result<Region> {
        let key = self.key(g, t, stages, projection);
        if let Some(r) = self.load(&key, g, t) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(r);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let r = compute_region(cat, g, t, stages, projection)?;
        self.store(&key, &r);
        Ok(r)
    }
}
