use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricConfig;
use crate::providers::ProviderConfig;

/// How hypotheses are ranked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Approach {
    /// In-order alignment over per-panorama grounding.
    #[default]
    #[serde(rename = "I", alias = "alignment")]
    Alignment,
    /// A 1-5 rating of the whole path.
    #[serde(rename = "II", alias = "rating")]
    Rating,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    #[default]
    Oracle,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderSettings {
    #[serde(default)]
    pub mode: ProviderMode,
    /// Oracle grounding flip probability.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub noise_seed: u64,
    /// Use the rule-based extractor even in remote mode.
    #[serde(default)]
    pub rule_based_extraction: bool,
    #[serde(default = "ProviderConfig::default_extraction")]
    pub extraction: ProviderConfig,
    #[serde(default = "ProviderConfig::default_embedding")]
    pub embedding: ProviderConfig,
    #[serde(default = "ProviderConfig::default_grounding")]
    pub grounding: ProviderConfig,
    #[serde(default = "ProviderConfig::default_rating")]
    pub rating: ProviderConfig,
    /// Directory that panorama references are resolved against.
    #[serde(default)]
    pub panorama_root: Option<PathBuf>,
}

impl Default for ProviderSettings {
    fn default() -> Self {
        ProviderSettings {
            mode: ProviderMode::Oracle,
            noise: 0.0,
            noise_seed: 0,
            rule_based_extraction: false,
            extraction: ProviderConfig::default_extraction(),
            embedding: ProviderConfig::default_embedding(),
            grounding: ProviderConfig::default_grounding(),
            rating: ProviderConfig::default_rating(),
            panorama_root: None,
        }
    }
}

impl ProviderSettings {
    /// Points every remote capability at the same cache directory.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        let dir = dir.into();
        for c in [
            &mut self.extraction,
            &mut self.embedding,
            &mut self.grounding,
            &mut self.rating,
        ] {
            c.cache_dir = Some(dir.clone());
        }
        self
    }
}

/// Where a run's scenes come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SceneSource {
    /// A synthetic world file written by `gen-world`.
    World { world: PathBuf },
    /// Episode records plus a viewpoint sidecar; one scene per scan.
    Dataset {
        episodes: PathBuf,
        viewpoints: PathBuf,
    },
}

/// Freshly generated synthetic scenes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSuite {
    pub scenes: usize,
    pub episodes_per_scene: usize,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_branching")]
    pub branching: f64,
    #[serde(default = "default_types")]
    pub landmark_types: usize,
    #[serde(default = "default_hops")]
    pub max_hops: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_nodes() -> usize {
    40
}
fn default_branching() -> f64 {
    2.6
}
fn default_types() -> usize {
    24
}
fn default_hops() -> usize {
    5
}
fn default_k() -> usize {
    3
}

impl SyntheticSuite {
    pub fn new(scenes: usize, episodes_per_scene: usize, seed: u64) -> Self {
        SyntheticSuite {
            scenes,
            episodes_per_scene,
            nodes: default_nodes(),
            branching: default_branching(),
            landmark_types: default_types(),
            max_hops: default_hops(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Goal candidates retrieved per episode.
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub approach: Approach,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub metric: MetricConfig,
    #[serde(default)]
    pub providers: ProviderSettings,
    #[serde(default)]
    pub scenes: Vec<SceneSource>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSuite>,
    /// Restrict the run to these episode ids; empty runs everything.
    #[serde(default)]
    pub episodes: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: default_k(),
            approach: Approach::default(),
            seed: 0,
            workers: 0,
            metric: MetricConfig::default(),
            providers: ProviderSettings::default(),
            scenes: Vec::new(),
            synthetic: None,
            episodes: Vec::new(),
        }
    }
}

impl RunConfig {
    /// Reads TOML, or JSON when the extension is `.json`. Relative paths inside are
    /// resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::parse(path, &e))?
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        };
        cfg.validate()?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for source in &mut cfg.scenes {
            match source {
                SceneSource::World { world } => rebase(world),
                SceneSource::Dataset {
                    episodes,
                    viewpoints,
                } => {
                    rebase(episodes);
                    rebase(viewpoints);
                }
            }
        }
        let p = &mut cfg.providers;
        if let Some(root) = &mut p.panorama_root {
            rebase(root);
        }
        for c in [
            &mut p.extraction,
            &mut p.embedding,
            &mut p.grounding,
            &mut p.rating,
        ] {
            if let Some(dir) = &mut c.cache_dir {
                rebase(dir);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        self.metric.validate()?;
        if !(0.0..=1.0).contains(&self.providers.noise) {
            return Err(Error::Config("providers.noise must be in [0, 1]".into()));
        }
        if self.providers.mode == ProviderMode::Remote {
            for c in [
                &self.providers.extraction,
                &self.providers.embedding,
                &self.providers.grounding,
                &self.providers.rating,
            ] {
                c.validate()?;
            }
        }
        if let Some(s) = &self.synthetic {
            if s.scenes == 0 {
                return Err(Error::Config("synthetic.scenes must be at least 1".into()));
            }
        }
        Ok(())
    }
}
