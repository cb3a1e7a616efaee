//! Ground-to-air millimeter-wave channel model for a UAV receiver above
//! ground transmitters.
//!
//! * [`scenario`]: environment/band/link keys and the embedded fitted tables.
//! * [`pathloss`], [`geometry`], [`budget`]: log-distance path loss with
//!   lognormal shadowing, human-blockage LOS probability, LOS/NLOS averaging
//!   and link-budget identities.
//! * [`fit`]: least-squares re-derivation of the tables from scatter data.
//! * [`coverage`]: mean path-loss rasters and Monte Carlo outage maps.
//!
//! Units throughout: meters, dB, dBm.

pub mod budget;
pub mod coverage;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod pathloss;
pub mod scenario;

pub use budget::{link_budget_threshold, path_loss_from_budget, received_power, LinkBudget};
pub use coverage::{
    analytic_outage, mean_coverage_map, outage_map, CellLink, GridSpec, OutageSpec, RasterLayer,
    Statistic, UavPosition,
};
pub use error::{Error, Result};
pub use fit::{fit_log_distance, fit_report, fit_scenario, FitReport, FitResult, MeasurementSample, ScenarioFit};
pub use geometry::{los_probability, BlockerField, LinkGeometry};
pub use pathloss::{
    average_path_loss, mean_path_loss, sample_path_loss, scenario_path_loss, ScenarioPathLoss,
    FIT_RANGE_M,
};
pub use scenario::{lookup_params, Environment, FrequencyBand, LinkPair, LinkType, ModelParams, Scenario};
