use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Result};
use serde::Serialize;

use phylotriple::eval::BootstrapScheme;
use phylotriple::species_tree::TreeMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Builtin,
    /// Write the editing programs as LP files and stop.
    ExportOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BootstrapSpec {
    pub scheme: BootstrapScheme,
    pub replicates: usize,
}

/// Limits and modes shared by every stage.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StageOptions {
    /// Components with more genes are repaired heuristically.
    pub component_limit: usize,
    /// Components up to this size are edited by exact subset recursion.
    pub exact_limit: usize,
    /// Per solver call; `None` for no limit.
    #[serde(serialize_with = "secs")]
    pub time_limit: Option<Duration>,
    pub tree_mode: TreeMode,
}

fn secs<S: serde::Serializer>(d: &Option<Duration>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_some(&d.as_secs_f64()),
        None => s.serialize_none(),
    }
}

impl Default for StageOptions {
    fn default() -> Self {
        StageOptions {
            component_limit: 50,
            exact_limit: 16,
            time_limit: Some(Duration::from_secs(1800)),
            tree_mode: TreeMode::MinVertices,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    pub orthology: PathBuf,
    pub species_map: PathBuf,
    pub out: PathBuf,
    pub stages: StageOptions,
    pub solver: SolverChoice,
    pub bootstrap: Option<BootstrapSpec>,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(orthology: impl Into<PathBuf>, species_map: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            orthology: orthology.into(),
            species_map: species_map.into(),
            out: out.into(),
            stages: StageOptions::default(),
            solver: SolverChoice::Builtin,
            bootstrap: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [&self.orthology, &self.species_map] {
            if !p.is_file() {
                bail!("{}: no such file", p.display());
            }
        }
        if self.stages.component_limit == 0 {
            bail!("component limit must be positive");
        }
        if self.stages.time_limit.is_some_and(|t| t.is_zero()) {
            bail!("time limit must be positive");
        }
        if self.bootstrap.is_some_and(|b| b.replicates == 0) {
            bail!("bootstrap needs at least one replicate");
        }
        Ok(())
    }
}
