//! Group configuration files.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use oc_geometry::conformal::GroupWord;
use oc_geometry::kleinian::SchottkyGroup;
use oc_geometry::siegel::SiegelPoint;

/// `{generators, base_point, word_length, s_margin}`. The base point serves
/// as both `z` and `w` and defaults to `(0, -1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub generators: Vec<GroupWord>,
    #[serde(default = "SiegelPoint::base")]
    pub base_point: SiegelPoint,
    pub word_length: usize,
    /// `s - δ̂` for the Patterson–Sullivan weights.
    pub s_margin: f64,
}

impl GroupConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: GroupConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if !(cfg.s_margin > 0.0) {
            bail!("s_margin must be positive, got {}", cfg.s_margin);
        }
        if cfg.word_length == 0 {
            bail!("word_length must be at least 1");
        }
        Ok(cfg)
    }

    pub fn group(&self) -> anyhow::Result<SchottkyGroup> {
        let mut g = SchottkyGroup::new(self.generators.clone())?;
        g.base_z = self.base_point;
        g.base_w = self.base_point;
        g.validate()?;
        Ok(g)
    }
}
