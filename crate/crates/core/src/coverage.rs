//! Path-loss rasters and Monte Carlo outage maps for one UAV over a ground grid.
//!
//! Cells are evaluated at their geometric centres, in row-major order
//! (`y` outer, `x` inner). Per-cell work runs on the current rayon pool.
//! Outage trials for cell `k` draw from ChaCha8 stream `k` of the
//! spec seed, so results do not depend on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    los_probability, BlockerField, LinkGeometry, DEFAULT_TX_HEIGHT_M, DEFAULT_UAV_HEIGHT_M,
};
use crate::pathloss::{average_path_loss, is_extrapolated, mean_path_loss};
use crate::scenario::{Environment, FrequencyBand, LinkPair};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UavPosition {
    pub x: f64,
    pub y: f64,
    /// Altitude above ground, meters.
    pub h_d: f64,
}

/// Axis-aligned ground grid, a UAV hovering above it and the transmitter height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub cell_size: f64,
    pub uav_position: UavPosition,
    /// Ground transmitter height, meters.
    pub h_r: f64,
}

impl Default for GridSpec {
    /// 1 km square centred under a UAV at 120 m, 10 m cells.
    fn default() -> Self {
        GridSpec {
            x_min: -500.0,
            x_max: 500.0,
            y_min: -500.0,
            y_max: 500.0,
            cell_size: 10.0,
            uav_position: UavPosition { x: 0.0, y: 0.0, h_d: DEFAULT_UAV_HEIGHT_M },
            h_r: DEFAULT_TX_HEIGHT_M,
        }
    }
}

fn axis_cells(span: f64, cell: f64) -> usize {
    let ratio = span / cell;
    let nearest = ratio.round();
    // 1.0 / 0.1 is 10.000000000000002; don't turn that into 11 cells.
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.x_min,
            self.x_max,
            self.y_min,
            self.y_max,
            self.cell_size,
            self.uav_position.x,
            self.uav_position.y,
            self.uav_position.h_d,
            self.h_r,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Grid("non-finite grid value".into()));
        }
        if self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(Error::Grid(format!(
                "empty extent x=[{}, {}], y=[{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.cell_size <= 0.0 {
            return Err(Error::Grid(format!("cell_size must be > 0, got {}", self.cell_size)));
        }
        if self.h_r < 0.0 || self.uav_position.h_d <= self.h_r {
            return Err(Error::Geometry(format!(
                "UAV height h_d={} must exceed transmitter height h_r={} >= 0",
                self.uav_position.h_d, self.h_r
            )));
        }
        Ok(())
    }

    /// Columns (x) by rows (y).
    pub fn dims(&self) -> (usize, usize) {
        (
            axis_cells(self.x_max - self.x_min, self.cell_size),
            axis_cells(self.y_max - self.y_min, self.cell_size),
        )
    }

    pub fn cell_count(&self) -> usize {
        let (nx, ny) = self.dims();
        nx * ny
    }

    /// Centre of row-major cell `index`.
    pub fn cell_center(&self, index: usize) -> (f64, f64) {
        let (nx, _) = self.dims();
        let (col, row) = (index % nx, index / nx);
        (
            self.x_min + (col as f64 + 0.5) * self.cell_size,
            self.y_min + (row as f64 + 0.5) * self.cell_size,
        )
    }

    pub fn cell_centers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.cell_count()).map(move |i| self.cell_center(i))
    }

    /// Link geometry between the transmitter in cell `index` and the UAV.
    pub fn cell_geometry(&self, index: usize) -> Result<LinkGeometry> {
        let (x, y) = self.cell_center(index);
        let r_2d = (x - self.uav_position.x).hypot(y - self.uav_position.y);
        LinkGeometry::new(r_2d, self.uav_position.h_d, self.h_r)
    }

    /// Number of cells whose 3D distance falls outside the fitted range.
    pub fn extrapolated_cells(&self) -> Result<usize> {
        (0..self.cell_count()).try_fold(0, |acc, i| {
            Ok(acc + usize::from(is_extrapolated(self.cell_geometry(i)?.d_3d())))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageSpec {
    /// Largest tolerable path loss, dB.
    pub max_path_loss_db: f64,
    /// Monte Carlo trials per cell.
    pub n_trials: usize,
    pub seed: u64,
}

impl OutageSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidParameter("n_trials must be >= 1".into()));
        }
        if self.max_path_loss_db.is_nan() {
            return Err(Error::InvalidParameter("outage threshold is NaN".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// Blockage-averaged mean path loss, dB.
    MeanPathLoss,
    /// Fraction of trials exceeding the outage threshold.
    Outage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterLayer {
    pub grid: GridSpec,
    pub statistic: Statistic,
    /// Row-major, `grid.cell_count()` entries.
    pub values: Vec<f64>,
}

impl RasterLayer {
    pub fn new(grid: GridSpec, statistic: Statistic, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.cell_count() {
            return Err(Error::Grid(format!(
                "{} values for {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        let bad = match statistic {
            Statistic::MeanPathLoss => values.iter().position(|v| !v.is_finite()),
            Statistic::Outage => values.iter().position(|v| !(0.0..=1.0).contains(v)),
        };
        if let Some(i) = bad {
            return Err(Error::Grid(format!("cell {i} holds invalid value {}", values[i])));
        }
        Ok(RasterLayer { grid, statistic, values })
    }

    /// `(min, max)` over all cells.
    pub fn value_range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// LOS/NLOS mixture at one location: LOS probability plus each link's mean
/// path loss and shadowing variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellLink {
    pub p_los: f64,
    pub los_mean_db: f64,
    pub los_sigma_sq: f64,
    pub nlos_mean_db: f64,
    pub nlos_sigma_sq: f64,
}

impl CellLink {
    pub fn evaluate(pair: &LinkPair, geometry: &LinkGeometry, blockers: &BlockerField) -> Result<Self> {
        let d = geometry.d_3d();
        Ok(CellLink {
            p_los: los_probability(geometry, blockers)?,
            los_mean_db: mean_path_loss(&pair.los, d)?,
            los_sigma_sq: pair.los.sigma_sq,
            nlos_mean_db: mean_path_loss(&pair.nlos, d)?,
            nlos_sigma_sq: pair.nlos.sigma_sq,
        })
    }

    /// A link that is always LOS with the given mean and variance.
    pub fn single(mean_db: f64, sigma_sq: f64) -> Self {
        CellLink {
            p_los: 1.0,
            los_mean_db: mean_db,
            los_sigma_sq: sigma_sq,
            nlos_mean_db: mean_db,
            nlos_sigma_sq: sigma_sq,
        }
    }

    pub fn mean_db(&self) -> Result<f64> {
        average_path_loss(self.p_los, self.los_mean_db, self.nlos_mean_db)
    }

    /// Fraction of `n_trials` draws whose path loss exceeds `threshold_db`.
    ///
    /// Each trial draws one uniform for the LOS state and one standard normal
    /// for shadowing, using the variance of the drawn link type.
    pub fn simulate_outage<R: Rng + ?Sized>(&self, threshold_db: f64, n_trials: usize, rng: &mut R) -> f64 {
        let (los_sigma, nlos_sigma) = (self.los_sigma_sq.sqrt(), self.nlos_sigma_sq.sqrt());
        let mut outages = 0usize;
        for _ in 0..n_trials {
            let u: f64 = rng.random();
            let z: f64 = rng.sample(StandardNormal);
            let pl = if u < self.p_los {
                self.los_mean_db + los_sigma * z
            } else {
                self.nlos_mean_db + nlos_sigma * z
            };
            if pl > threshold_db {
                outages += 1;
            }
        }
        outages as f64 / n_trials as f64
    }

    /// Closed-form counterpart of [`CellLink::simulate_outage`].
    pub fn analytic_outage(&self, threshold_db: f64) -> f64 {
        self.p_los * analytic_outage(self.los_mean_db, self.los_sigma_sq, threshold_db)
            + (1.0 - self.p_los) * analytic_outage(self.nlos_mean_db, self.nlos_sigma_sq, threshold_db)
    }
}

/// `P(mean + N(0, sigma_sq) > threshold)`; a step function when `sigma_sq` is 0.
pub fn analytic_outage(mean_pl: f64, sigma_sq: f64, threshold: f64) -> f64 {
    debug_assert!(sigma_sq >= 0.0, "negative variance {sigma_sq}");
    if sigma_sq == 0.0 {
        return if mean_pl > threshold { 1.0 } else { 0.0 };
    }
    let z = (threshold - mean_pl) / (2.0 * sigma_sq).sqrt();
    0.5 * libm::erfc(z)
}

/// Deterministic RNG for Monte Carlo cell `cell` under `seed`.
pub fn cell_rng(seed: u64, cell: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell as u64);
    rng
}

fn check_inputs(grid: &GridSpec, pair: &LinkPair, blockers: &BlockerField) -> Result<()> {
    grid.validate()?;
    pair.los.validate()?;
    pair.nlos.validate()?;
    blockers.validate()
}

/// Blockage-averaged mean path loss for every cell, using the tabulated parameters.
pub fn mean_coverage_map(
    grid: &GridSpec,
    environment: Environment,
    band: FrequencyBand,
    blockers: &BlockerField,
) -> Result<RasterLayer> {
    mean_coverage_map_with(grid, &LinkPair::lookup(environment, band), blockers)
}

pub fn mean_coverage_map_with(
    grid: &GridSpec,
    pair: &LinkPair,
    blockers: &BlockerField,
) -> Result<RasterLayer> {
    check_inputs(grid, pair, blockers)?;
    let values = (0..grid.cell_count())
        .into_par_iter()
        .map(|i| CellLink::evaluate(pair, &grid.cell_geometry(i)?, blockers)?.mean_db())
        .collect::<Result<Vec<f64>>>()?;
    RasterLayer::new(*grid, Statistic::MeanPathLoss, values)
}

/// Monte Carlo outage fraction for every cell, using the tabulated parameters.
pub fn outage_map(
    grid: &GridSpec,
    environment: Environment,
    band: FrequencyBand,
    blockers: &BlockerField,
    spec: &OutageSpec,
) -> Result<RasterLayer> {
    outage_map_with(grid, &LinkPair::lookup(environment, band), blockers, spec)
}

pub fn outage_map_with(
    grid: &GridSpec,
    pair: &LinkPair,
    blockers: &BlockerField,
    spec: &OutageSpec,
) -> Result<RasterLayer> {
    check_inputs(grid, pair, blockers)?;
    spec.validate()?;
    let values = (0..grid.cell_count())
        .into_par_iter()
        .map(|i| {
            let cell = CellLink::evaluate(pair, &grid.cell_geometry(i)?, blockers)?;
            let mut rng = cell_rng(spec.seed, i);
            Ok(cell.simulate_outage(spec.max_path_loss_db, spec.n_trials, &mut rng))
        })
        .collect::<Result<Vec<f64>>>()?;
    RasterLayer::new(*grid, Statistic::Outage, values)
}
