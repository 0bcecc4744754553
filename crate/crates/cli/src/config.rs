//! The JSON run configuration. A config file captures everything the flags
//! express and round-trips losslessly.

use serde::{Deserialize, Serialize};

use reur_core::{LatticeParams, StateParams, WavePacket};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Report,
    ThermalSweep,
    NSweep,
    Smeared,
    Fig1,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: std::path::PathBuf,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
        }
    }
}

fn default_beta_min() -> f64 {
    0.05
}
fn default_beta_max() -> f64 {
    10.0
}
fn default_points() -> usize {
    50
}
fn default_n_list() -> Vec<usize> {
    vec![8, 64, 512, 4096]
}

/// Grid parameters for the sweep commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    #[serde(default = "default_beta_min")]
    pub beta_min: f64,
    #[serde(default = "default_beta_max")]
    pub beta_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    /// Fixed total length for the mode-count sweep (the spacing shrinks as
    /// the count grows). Without it the spacing stays fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// Report per-length values in the mode-count sweep.
    #[serde(default)]
    pub per_length: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            beta_min: default_beta_min(),
            beta_max: default_beta_max(),
            points: default_points(),
            n_list: default_n_list(),
            length: None,
            per_length: false,
        }
    }
}

/// One complete run: model, state, command and options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub lattice: LatticeParams,
    pub state: StateParams,
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packet: Option<WavePacket>,
    /// Negative-control knob: shifts the reported lhs before validation so
    /// the violation detector can be exercised end to end.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject_lhs_bias: Option<f64>,
}
