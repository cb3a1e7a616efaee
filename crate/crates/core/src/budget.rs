//! Link-budget identities. Powers in dBm, gains and losses in dB.

use serde::{Deserialize, Serialize};

/// Transmit power used for the published tables, in dBm.
pub const DEFAULT_TX_POWER_DBM: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Transmit power, dBm.
    pub p_t: f64,
    /// Received power, dBm.
    pub p_r: f64,
    /// Transmit antenna gain, dB.
    pub g_t: f64,
    /// Receive antenna gain, dB.
    pub g_r: f64,
}

/// `PL = P_t - P_r + G_t + G_r`.
pub fn path_loss_from_budget(budget: &LinkBudget) -> f64 {
    (budget.p_t + budget.g_t + budget.g_r) - budget.p_r
}

/// Received power for a given path loss: `P_r = P_t + G_t + G_r - PL`.
pub fn received_power(p_t: f64, g_t: f64, g_r: f64, path_loss: f64) -> f64 {
    // Same grouping as `path_loss_from_budget`, so both round through one
    // shared `P_t + G_t + G_r` term.
    (p_t + g_t + g_r) - path_loss
}

/// Largest path loss that still closes the link at the given receiver sensitivity.
pub fn link_budget_threshold(p_t: f64, g_t: f64, g_r: f64, sensitivity: f64) -> f64 {
    p_t + g_t + g_r - sensitivity
}
