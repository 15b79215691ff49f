use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use quarter_stereo::geometry::numeric::DEFAULT_EPSILON;

/// Settings read from a TOML file. Command-line flags win over the file.
#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Group names, or `["all"]`.
    pub groups: Vec<String>,
    /// Replaces the default stage columns, e.g. `["S1", "S2", "S3"]`.
    pub stages: Option<Vec<String>>,
    pub eps: f64,
    pub projection: bool,
    pub samples: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub cache: bool,
    pub cache_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            groups: vec!["all".into()],
            stages: None,
            eps: DEFAULT_EPSILON,
            projection: true,
            samples: 20,
            seed: 1,
            out_dir: PathBuf::from("out"),
            cache: true,
            cache_dir: PathBuf::from(".qstereo-cache"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
