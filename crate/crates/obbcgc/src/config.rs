//! Run configuration file (`--config`), TOML or JSON by extension.
//!
//! ```toml
//! [assignment]
//! candidate_iou = 0.3
//! threshold = 0.7
//! force_best_per_gt = true
//!
//! [bench]
//! seed = 0
//! trials = 200
//!
//! [anchor_grid]
//! stride = 16.0
//! scales = [32.0, 64.0, 128.0]
//! ratios = [0.5, 1.0, 2.0]
//!
//! [io]
//! annotations = ["P0001.txt"]
//! image_size = [1024.0, 1024.0]
//! out_dir = "out"
//! ```
//!
//! Every section and field is optional; missing values take their defaults.

use std::path::{Path, PathBuf};

use obbcgc_core::anchors::AnchorGrid;
use obbcgc_core::assignment::AssignmentConfig;
use obbcgc_core::bench::BenchConfig;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoPaths {
    pub annotations: Vec<PathBuf>,
    pub image_size: Option<(f64, f64)>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub assignment: AssignmentConfig,
    pub bench: BenchConfig,
    pub anchor_grid: AnchorGrid,
    pub io: IoPaths,
}

impl RunConfig {
    pub fn validate(&self) -> obbcgc_core::Result<()> {
        self.assignment.validate()?;
        self.bench.validate()?;
        self.anchor_grid.validate()
    }

    pub fn from_toml(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        };
        let cfg = parsed.map_err(|message| Error::Config {
            path: path.to_owned(),
            message,
        })?;
        cfg.validate().map_err(|e| Error::Config {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_uses_defaults() {
        let cfg =
            RunConfig::from_toml("[assignment]\nthreshold = 0.6\n[bench]\ntrials = 3\n").unwrap();
        assert_eq!(cfg.assignment.threshold, 0.6);
        assert_eq!(cfg.assignment.candidate_iou, 0.3);
        assert_eq!(cfg.bench.trials, 3);
        assert_eq!(cfg.bench.steps, BenchConfig::default().steps);
        assert_eq!(cfg.anchor_grid, AnchorGrid::default());
    }

    #[test]
    fn json_and_unknown_fields() {
        let cfg = RunConfig::from_json(
            r#"{"anchor_grid": {"stride": 8.0, "scales": [4.0], "ratios": [1.0]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.anchor_grid.stride, 8.0);
        assert!(RunConfig::from_toml("[io]\nbogus = 1\n").is_err());
    }

    #[test]
    fn serialized_default_reloads() {
        let cfg = RunConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
    }
}
