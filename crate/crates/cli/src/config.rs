//! JSON scenario configuration for `gta map`.
//!
//! Every section except `environment` and `band` may be omitted and takes
//! the defaults below. Unknown keys are rejected.

use gta_core::coverage::UavPosition;
use gta_core::geometry::{DEFAULT_TX_HEIGHT_M, DEFAULT_UAV_HEIGHT_M};
use gta_core::budget::DEFAULT_TX_POWER_DBM;
use gta_core::{
    link_budget_threshold, BlockerField, Environment, FrequencyBand, GridSpec, LinkPair,
    OutageSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub environment: Environment,
    pub band: FrequencyBand,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub blockers: BlockerField,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub outage: OutageConfig,
    /// Replaces the table entry for `environment`/`band`, e.g. with a fresh fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<LinkPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    /// UAV height, m.
    pub h_d: f64,
    /// Transmitter height, m.
    pub h_r: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig { h_d: DEFAULT_UAV_HEIGHT_M, h_r: DEFAULT_TX_HEIGHT_M }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetConfig {
    pub p_t: f64,
    pub g_t: f64,
    pub g_r: f64,
    /// Receiver sensitivity, dBm.
    pub sensitivity: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { p_t: DEFAULT_TX_POWER_DBM, g_t: 0.0, g_r: 0.0, sensitivity: -90.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub cell_size: f64,
    /// Ground projection of the UAV.
    pub uav_x: f64,
    pub uav_y: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        GridConfig {
            x_min: g.x_min,
            x_max: g.x_max,
            y_min: g.y_min,
            y_max: g.y_max,
            cell_size: g.cell_size,
            uav_x: g.uav_position.x,
            uav_y: g.uav_position.y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutageConfig {
    pub n_trials: usize,
    pub seed: u64,
    /// Overrides the threshold derived from `budget`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_path_loss_db: Option<f64>,
}

impl Default for OutageConfig {
    fn default() -> Self {
        OutageConfig { n_trials: 1000, seed: 0, max_path_loss_db: None }
    }
}

impl ScenarioConfig {
    pub fn new(environment: Environment, band: FrequencyBand) -> Self {
        ScenarioConfig {
            environment,
            band,
            geometry: GeometryConfig::default(),
            blockers: BlockerField::default(),
            budget: BudgetConfig::default(),
            grid: GridConfig::default(),
            outage: OutageConfig::default(),
            params: None,
        }
    }

    /// Model parameters for the map: the override if present, else the table.
    pub fn link_pair(&self) -> LinkPair {
        self.params.unwrap_or_else(|| LinkPair::lookup(self.environment, self.band))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Data(format!("invalid scenario config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes");
        text.push('\n');
        text
    }

    pub fn validate(&self) -> Result<()> {
        self.grid_spec().validate()?;
        self.blockers.validate()?;
        if !self.blockers.is_empty() && self.geometry.h_d <= self.blockers.h_b {
            return Err(CliError::Data(format!(
                "UAV height {} m must exceed blocker height {} m",
                self.geometry.h_d, self.blockers.h_b
            )));
        }
        let b = &self.budget;
        if ![b.p_t, b.g_t, b.g_r, b.sensitivity].iter().all(|v| v.is_finite()) {
            return Err(CliError::Data("link budget values must be finite".into()));
        }
        self.outage_spec(None).validate()?;
        if let Some(pair) = &self.params {
            pair.los.validate()?;
            pair.nlos.validate()?;
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> GridSpec {
        let g = &self.grid;
        GridSpec {
            x_min: g.x_min,
            x_max: g.x_max,
            y_min: g.y_min,
            y_max: g.y_max,
            cell_size: g.cell_size,
            uav_position: UavPosition { x: g.uav_x, y: g.uav_y, h_d: self.geometry.h_d },
            h_r: self.geometry.h_r,
        }
    }

    /// Maximum tolerable path loss: the explicit override, else the link budget.
    pub fn outage_threshold(&self) -> f64 {
        let b = &self.budget;
        self.outage
            .max_path_loss_db
            .unwrap_or_else(|| link_budget_threshold(b.p_t, b.g_t, b.g_r, b.sensitivity))
    }

    pub fn outage_spec(&self, seed_override: Option<u64>) -> OutageSpec {
        OutageSpec {
            max_path_loss_db: self.outage_threshold(),
            n_trials: self.outage.n_trials,
            seed: seed_override.unwrap_or(self.outage.seed),
        }
    }
}
