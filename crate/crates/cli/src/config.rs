//! Declarative run configuration: one TOML file with a section per stage.
//! Every field has a default, so an empty file (or none at all) is a valid
//! full-pipeline run.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use viewscope_core::baselines::BaselineConfig;
use viewscope_core::candgen::{GenConfig, TiltPrior};
use viewscope_core::emd::EmdConfig;
use viewscope_core::pdf::PdfConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Drives every seeded stage; per-room streams are derived from it.
    pub seed: u64,
    /// Worker threads for room fan-out and rendering; 0 means all cores.
    pub workers: usize,
    pub paths: Paths,
    pub suite: SuiteParams,
    pub pdf: PdfConfig,
    pub tilt: TiltPrior,
    pub generate: GenConfig,
    pub select: SelectParams,
    pub baseline: BaselineConfig,
    pub emd: EmdConfig,
    pub weights: WeightParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 7,
            workers: 0,
            paths: Paths::default(),
            suite: SuiteParams::default(),
            pdf: PdfConfig::default(),
            tilt: TiltPrior::default(),
            generate: GenConfig::default(),
            select: SelectParams::default(),
            baseline: BaselineConfig::default(),
            emd: EmdConfig::default(),
            weights: WeightParams::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    pub out: PathBuf,
    /// External scene file; when unset the generated suite scene is used.
    pub scene: Option<PathBuf>,
    /// External example-set directory; when unset the suite's rendered
    /// ground-truth set is used.
    pub examples: Option<PathBuf>,
}

impl Default for Paths {
    fn default() -> Self {
        Paths { out: PathBuf::from("out"), scene: None, examples: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteParams {
    pub rooms: usize,
    pub cameras_per_room: usize,
    pub example_width: u32,
    pub example_height: u32,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { rooms: 5, cameras_per_room: 40, example_width: 80, example_height: 60 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectParams {
    pub k: usize,
    /// Per-category coverage slots; defaults to floor(k / categories),
    /// at least 1, for every category.
    pub h: Option<Vec<usize>>,
}

impl Default for SelectParams {
    fn default() -> Self {
        SelectParams { k: 40, h: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightParams {
    pub mode: WeightMode,
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams { mode: WeightMode::Nyu40 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Bundled 40-class rebalance table; requires the 40-class category set.
    Nyu40,
    Uniform,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    /// Command-line overrides; flags win over file values.
    pub fn with_overrides(mut self, seed: Option<u64>, workers: Option<usize>) -> RunConfig {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(w) = workers {
            self.workers = w;
        }
        // The global seed is the single source of randomness.
        self.generate.seed = self.seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.pdf.validate().map_err(|e| anyhow::anyhow!("[pdf] {e}"))?;
        self.generate
            .validate()
            .map_err(|e| anyhow::anyhow!("[generate] {e}"))?;
        self.baseline
            .validate()
            .map_err(|e| anyhow::anyhow!("[baseline] {e}"))?;
        if self.select.k == 0 {
            bail!("[select] k must be at least 1");
        }
        if self.suite.rooms == 0 || self.suite.cameras_per_room == 0 {
            bail!("[suite] rooms and cameras_per_room must be at least 1");
        }
        if self.suite.example_width == 0 || self.suite.example_height == 0 {
            bail!("[suite] example resolution must be nonzero");
        }
        if self.emd.bins == 0 || self.emd.bins > 64 {
            bail!("[emd] bins must be in 1..=64");
        }
        if self.emd.threshold <= 0.0 || self.emd.d_max <= 0.0 {
            bail!("[emd] threshold and d_max must be positive");
        }
        Ok(())
    }

    /// Stable fingerprint of the effective config, embedded in artifacts so
    /// downstream stages can detect mixed-config output directories.
    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes infallibly");
        let digest = Sha256::digest(canon.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}
