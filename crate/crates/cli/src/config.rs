//! Experiment configuration, read from JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};
use ssflab_core::disorder::DisorderDistribution;
use ssflab_core::lattice::{Coord, Gauge};
use ssflab_core::wegner::Amplitude;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SingularDecay,
    SsfIdentities,
    FtBounds,
    Wegner,
    Ids,
    Lemma3,
    Weyl,
    TraceBound,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::SingularDecay,
        ExperimentKind::SsfIdentities,
        ExperimentKind::FtBounds,
        ExperimentKind::Wegner,
        ExperimentKind::Ids,
        ExperimentKind::Lemma3,
        ExperimentKind::Weyl,
        ExperimentKind::TraceBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SingularDecay => "singular-decay",
            ExperimentKind::SsfIdentities => "ssf-identities",
            ExperimentKind::FtBounds => "ft-bounds",
            ExperimentKind::Wegner => "wegner",
            ExperimentKind::Ids => "ids",
            ExperimentKind::Lemma3 => "lemma3",
            ExperimentKind::Weyl => "weyl",
            ExperimentKind::TraceBound => "trace-bound",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    #[serde(default)]
    pub model: ModelBlock,
    #[serde(default)]
    pub numeric: NumericBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub dimension: usize,
    pub side: usize,
    pub spacing: f64,
    /// Explicit site list; replaces the `side^d` box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<Coord>>,
    #[serde(default)]
    pub single_site: SingleSiteBlock,
    #[serde(default)]
    pub background: Background,
    #[serde(default = "default_disorder")]
    pub disorder: DisorderDistribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnetic_field: Option<MagneticField>,
}

impl Default for ModelBlock {
    fn default() -> Self {
        Self {
            dimension: 1,
            side: 16,
            spacing: 1.0,
            mask: None,
            single_site: SingleSiteBlock::default(),
            background: Background::default(),
            disorder: default_disorder(),
            magnetic_field: None,
        }
    }
}

fn default_disorder() -> DisorderDistribution {
    DisorderDistribution::uniform(0.0, 1.0).expect("unit interval")
}

/// Single-site profile `u`, as offsets from the cell and values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleSiteBlock {
    pub offsets: Vec<Coord>,
    pub profile: Vec<f64>,
}

impl Default for SingleSiteBlock {
    fn default() -> Self {
        Self {
            offsets: vec![[0, 0, 0]],
            profile: vec![1.0],
        }
    }
}

/// `V_per`: a constant or one value per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Background {
    Constant(f64),
    Values(Vec<f64>),
}

impl Default for Background {
    fn default() -> Self {
        Background::Constant(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagneticField {
    /// Field strength `B`; the flux per plaquette is `B h²`.
    pub strength: f64,
    #[serde(default = "default_gauge")]
    pub gauge: Gauge,
}

fn default_gauge() -> Gauge {
    Gauge::Landau
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<Vec<f64>>,
    /// Semigroup time, or `F_t` parameter for `ft-bounds`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    /// Upper limits `T` of the SSF integral bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_leading: Option<usize>,
    /// Random instances for the randomized suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense_cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// File-name stem; the experiment kind when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Write CSV tables next to the record.
    #[serde(default = "yes")]
    pub tables: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { name: None, tables: true }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn stem(&self) -> String {
        self.output
            .name
            .clone()
            .unwrap_or_else(|| self.experiment.name().to_string())
    }
}
