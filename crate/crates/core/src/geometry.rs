//! Link geometry and the human-blockage line-of-sight model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// UAV altitude used for the published fits, meters.
pub const DEFAULT_UAV_HEIGHT_M: f64 = 120.0;
/// Ground transmitter height used for the published fits, meters.
pub const DEFAULT_TX_HEIGHT_M: f64 = 1.7;

/// Horizontal separation plus the two antenna heights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Horizontal transmitter-UAV distance, meters.
    pub r_2d: f64,
    /// UAV height, meters.
    pub h_d: f64,
    /// Ground transmitter height, meters.
    pub h_r: f64,
}

impl LinkGeometry {
    pub fn new(r_2d: f64, h_d: f64, h_r: f64) -> Result<Self> {
        let geometry = LinkGeometry { r_2d, h_d, h_r };
        geometry.validate()?;
        Ok(geometry)
    }

    /// Geometry at horizontal distance `r_2d` with the default antenna heights.
    pub fn at_distance(r_2d: f64) -> Result<Self> {
        Self::new(r_2d, DEFAULT_UAV_HEIGHT_M, DEFAULT_TX_HEIGHT_M)
    }

    pub fn validate(&self) -> Result<()> {
        let LinkGeometry { r_2d, h_d, h_r } = *self;
        if !(r_2d.is_finite() && h_d.is_finite() && h_r.is_finite()) {
            return Err(Error::Geometry(format!(
                "non-finite geometry (r_2d={r_2d}, h_d={h_d}, h_r={h_r})"
            )));
        }
        if r_2d < 0.0 {
            return Err(Error::Geometry(format!("r_2d must be >= 0, got {r_2d}")));
        }
        if h_r < 0.0 {
            return Err(Error::Geometry(format!("h_r must be >= 0, got {h_r}")));
        }
        if h_d <= h_r {
            return Err(Error::Geometry(format!(
                "UAV height h_d={h_d} must exceed transmitter height h_r={h_r}"
            )));
        }
        Ok(())
    }

    /// Straight-line transmitter-UAV distance, never below `h_d - h_r`.
    pub fn d_3d(&self) -> f64 {
        self.r_2d.hypot(self.h_d - self.h_r)
    }
}

/// Statistics of the human-blocker field around the ground transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlockerField {
    /// Blocker density, blockers per m².
    pub lambda_density: f64,
    /// Blocker diameter, meters.
    pub g_b: f64,
    /// Blocker height, meters.
    pub h_b: f64,
}

impl BlockerField {
    pub fn new(lambda_density: f64, g_b: f64, h_b: f64) -> Result<Self> {
        let field = BlockerField { lambda_density, g_b, h_b };
        field.validate()?;
        Ok(field)
    }

    /// No blockers. Diameter and height take typical adult values so the
    /// field only needs a density to become active.
    pub fn empty() -> Self {
        BlockerField { lambda_density: 0.0, g_b: 0.5, h_b: 1.8 }
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_density == 0.0 || self.g_b == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let BlockerField { lambda_density, g_b, h_b } = *self;
        if !(lambda_density >= 0.0 && lambda_density.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "blocker density must be finite and >= 0, got {lambda_density}"
            )));
        }
        if !(g_b >= 0.0 && g_b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "blocker diameter must be finite and >= 0, got {g_b}"
            )));
        }
        if !(h_b > 0.0 && h_b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "blocker height must be finite and > 0, got {h_b}"
            )));
        }
        Ok(())
    }
}

impl Default for BlockerField {
    fn default() -> Self {
        Self::empty()
    }
}

/// Probability that no human blocker obstructs the link:
/// `exp(-lambda * g_b * r_2d * (h_b - h_r) / (h_d - h_r))`, clamped to `[0, 1]`.
///
/// Blockers shorter than the transmitter cannot obstruct, so `h_b <= h_r`
/// gives 1. An empty field gives 1 for any valid geometry; otherwise the UAV
/// must fly above the blockers.
pub fn los_probability(geometry: &LinkGeometry, blockers: &BlockerField) -> Result<f64> {
    geometry.validate()?;
    blockers.validate()?;
    if blockers.is_empty() {
        return Ok(1.0);
    }
    if geometry.h_d <= blockers.h_b {
        return Err(Error::Geometry(format!(
            "UAV height h_d={} must exceed blocker height h_b={}",
            geometry.h_d, blockers.h_b
        )));
    }
    let shadow_length =
        geometry.r_2d * (blockers.h_b - geometry.h_r) / (geometry.h_d - geometry.h_r);
    let exponent = -blockers.lambda_density * blockers.g_b * shadow_length;
    Ok(exponent.exp().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_blockers() -> BlockerField {
        BlockerField::new(0.01, 0.5, 1.8).unwrap()
    }

    #[test]
    fn d_3d_is_hypotenuse() {
        let g = LinkGeometry::at_distance(100.0).unwrap();
        assert!((g.d_3d() - 154.902840516241).abs() < 1e-9);
        let overhead = LinkGeometry::at_distance(0.0).unwrap();
        assert!((overhead.d_3d() - 118.3).abs() < 1e-12);
    }

    #[test]
    fn geometry_rejects_bad_heights() {
        assert!(LinkGeometry::new(10.0, 1.7, 1.7).is_err());
        assert!(LinkGeometry::new(10.0, 1.0, 1.7).is_err());
        assert!(LinkGeometry::new(-1.0, 120.0, 1.7).is_err());
        assert!(LinkGeometry::new(10.0, 120.0, -0.1).is_err());
        assert!(LinkGeometry::new(f64::NAN, 120.0, 1.7).is_err());
    }

    #[test]
    fn blocker_field_validation() {
        assert!(BlockerField::new(-0.1, 0.5, 1.8).is_err());
        assert!(BlockerField::new(0.1, -0.5, 1.8).is_err());
        assert!(BlockerField::new(0.1, 0.5, 0.0).is_err());
        assert!(BlockerField::new(0.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn empty_field_is_always_los() {
        let field = BlockerField::empty();
        for r in [0.0, 1.0, 100.0, 1e5] {
            let g = LinkGeometry::at_distance(r).unwrap();
            assert_eq!(los_probability(&g, &field).unwrap(), 1.0);
        }
        // No blockers means the height constraint never binds.
        let low_uav = LinkGeometry::new(50.0, 1.75, 1.7).unwrap();
        assert_eq!(los_probability(&low_uav, &field).unwrap(), 1.0);
    }

    #[test]
    fn zero_horizontal_distance_is_los() {
        let g = LinkGeometry::at_distance(0.0).unwrap();
        assert_eq!(los_probability(&g, &worked_blockers()).unwrap(), 1.0);
    }

    #[test]
    fn worked_example() {
        let g = LinkGeometry::at_distance(100.0).unwrap();
        let p = los_probability(&g, &worked_blockers()).unwrap();
        assert!((p - 0.999577).abs() < 1e-6, "{p}");
    }

    #[test]
    fn short_blockers_cannot_block() {
        let g = LinkGeometry::at_distance(300.0).unwrap();
        let short = BlockerField::new(0.5, 0.5, 1.0).unwrap();
        assert_eq!(los_probability(&g, &short).unwrap(), 1.0);
    }

    #[test]
    fn uav_below_blockers_rejected() {
        let g = LinkGeometry::new(10.0, 1.8, 1.7).unwrap();
        let err = los_probability(&g, &worked_blockers()).unwrap_err();
        assert!(matches!(err, Error::Geometry(_)));
    }
}
