//! Log-distance path loss with lognormal shadowing, and the LOS/NLOS mix.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{los_probability, BlockerField, LinkGeometry};
use crate::scenario::{Environment, FrequencyBand, LinkPair, ModelParams};

/// 3D distance range (meters) over which the tabulated parameters were fitted.
pub const FIT_RANGE_M: (f64, f64) = (200.0, 500.0);

/// True when `d_3d` lies outside [`FIT_RANGE_M`].
pub fn is_extrapolated(d_3d: f64) -> bool {
    !(FIT_RANGE_M.0..=FIT_RANGE_M.1).contains(&d_3d)
}

fn check_distance(d_3d: f64) -> Result<()> {
    if d_3d > 0.0 && d_3d.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveDistance(d_3d))
    }
}

/// Deterministic part of the model: `alpha + beta * 10 log10(d_3d)`.
pub fn mean_path_loss(params: &ModelParams, d_3d: f64) -> Result<f64> {
    check_distance(d_3d)?;
    Ok(params.alpha + params.beta * 10.0 * d_3d.log10())
}

/// One shadowed realisation: the mean plus `N(0, sigma_sq)` in dB.
///
/// Exactly one standard-normal variate is consumed from `rng` per call, even
/// when `sigma_sq` is zero.
pub fn sample_path_loss<R: Rng + ?Sized>(
    params: &ModelParams,
    d_3d: f64,
    rng: &mut R,
) -> Result<f64> {
    params.validate()?;
    let mean = mean_path_loss(params, d_3d)?;
    let z: f64 = rng.sample(StandardNormal);
    Ok(mean + params.sigma() * z)
}

/// `p_los * pl_los + (1 - p_los) * pl_nlos`.
pub fn average_path_loss(p_los: f64, pl_los: f64, pl_nlos: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_los) {
        return Err(Error::Probability(p_los));
    }
    let mixed = p_los * pl_los + (1.0 - p_los) * pl_nlos;
    // Keep the result inside the hull despite rounding.
    Ok(mixed.clamp(pl_los.min(pl_nlos), pl_los.max(pl_nlos)))
}

/// Every intermediate of the LOS/NLOS evaluation for one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPathLoss {
    /// Blockage-averaged mean path loss, dB.
    pub mean_db: f64,
    pub p_los: f64,
    pub pl_los_db: f64,
    pub pl_nlos_db: f64,
    /// Distance the log-distance models were evaluated at, meters.
    pub d_3d: f64,
    /// Set when `d_3d` falls outside the fitted range.
    pub extrapolated: bool,
}

/// LOS/NLOS mean path loss for one environment and band at `geometry`.
pub fn scenario_path_loss(
    environment: Environment,
    band: FrequencyBand,
    geometry: &LinkGeometry,
    blockers: &BlockerField,
) -> Result<ScenarioPathLoss> {
    path_loss_with_params(&LinkPair::lookup(environment, band), geometry, blockers)
}

/// As [`scenario_path_loss`], with caller-supplied parameters (e.g. a fresh fit).
pub fn path_loss_with_params(
    pair: &LinkPair,
    geometry: &LinkGeometry,
    blockers: &BlockerField,
) -> Result<ScenarioPathLoss> {
    geometry.validate()?;
    let d_3d = geometry.d_3d();
    let pl_los_db = mean_path_loss(&pair.los, d_3d)?;
    let pl_nlos_db = mean_path_loss(&pair.nlos, d_3d)?;
    let p_los = los_probability(geometry, blockers)?;
    let mean_db = average_path_loss(p_los, pl_los_db, pl_nlos_db)?;
    Ok(ScenarioPathLoss {
        mean_db,
        p_los,
        pl_los_db,
        pl_nlos_db,
        d_3d,
        extrapolated: is_extrapolated(d_3d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{lookup_params, LinkType, Scenario};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn urban_28(link: LinkType) -> ModelParams {
        lookup_params(Scenario::new(Environment::Urban, FrequencyBand::F28GHz, link))
    }

    #[test]
    fn mean_examples() {
        let v = mean_path_loss(&urban_28(LinkType::Los), 200.0).unwrap();
        assert!((v - 121.20).abs() < 0.01, "{v}");

        let p = ModelParams::new(-3.5, 7.25, 0.0).unwrap();
        assert_eq!(mean_path_loss(&p, 1.0).unwrap(), -3.5);

        let sub_nlos_73 = lookup_params(Scenario::new(
            Environment::Suburban,
            FrequencyBand::F73GHz,
            LinkType::Nlos,
        ));
        let v = mean_path_loss(&sub_nlos_73, 500.0).unwrap();
        assert!((v - 154.00).abs() < 0.01, "{v}");
    }

    #[test]
    fn mean_rejects_bad_distance() {
        let p = urban_28(LinkType::Los);
        for d in [0.0, -5.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                mean_path_loss(&p, d),
                Err(Error::NonPositiveDistance(_))
            ));
        }
    }

    #[test]
    fn zero_variance_sample_is_the_mean() {
        let p = ModelParams { sigma_sq: 0.0, ..urban_28(LinkType::Los) };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = sample_path_loss(&p, 200.0, &mut rng).unwrap();
        assert_eq!(v, mean_path_loss(&p, 200.0).unwrap());
        assert!((v - 121.20).abs() < 0.01);
    }

    #[test]
    fn sampler_is_deterministic_per_seed() {
        let p = urban_28(LinkType::Nlos);
        let a = sample_path_loss(&p, 300.0, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = sample_path_loss(&p, 300.0, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn sampler_moments() {
        let p = ModelParams::new(97.81, 1.87, 4.0).unwrap();
        let mean = mean_path_loss(&p, 250.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_path_loss(&p, 250.0, &mut rng).unwrap())
            .collect();
        let m = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((m - mean).abs() < 0.05, "mean {m} vs {mean}");
        assert!((var - 4.0).abs() < 0.05 * 4.0, "variance {var}");
    }

    #[test]
    fn average_examples() {
        assert_eq!(average_path_loss(1.0, 119.33, 1e9).unwrap(), 119.33);
        assert_eq!(average_path_loss(0.5, 100.0, 120.0).unwrap(), 110.0);
        assert!(matches!(average_path_loss(1.01, 1.0, 2.0), Err(Error::Probability(_))));
        assert!(matches!(average_path_loss(-0.1, 1.0, 2.0), Err(Error::Probability(_))));
        assert!(average_path_loss(f64::NAN, 1.0, 2.0).is_err());
    }

    #[test]
    fn worked_chain() {
        let g = LinkGeometry::at_distance(100.0).unwrap();
        let b = BlockerField::new(0.01, 0.5, 1.8).unwrap();
        let r = scenario_path_loss(Environment::Urban, FrequencyBand::F28GHz, &g, &b).unwrap();
        assert!((r.p_los - 0.999577).abs() < 1e-6);
        assert!((r.pl_los_db - 119.33).abs() < 0.01);
        assert!((r.pl_nlos_db - 138.76).abs() < 0.01);
        assert!((r.mean_db - 119.34).abs() < 0.01);
        assert!((r.d_3d - 154.90).abs() < 0.01);
        assert!(r.extrapolated);
    }

    #[test]
    fn empty_field_collapses_to_los() {
        let g = LinkGeometry::at_distance(350.0).unwrap();
        let r = scenario_path_loss(
            Environment::HighRise,
            FrequencyBand::F73GHz,
            &g,
            &BlockerField::empty(),
        )
        .unwrap();
        assert_eq!(r.mean_db, r.pl_los_db);
        assert!(!r.extrapolated);
    }

    #[test]
    fn extrapolation_flag() {
        assert!(is_extrapolated(199.9));
        assert!(!is_extrapolated(200.0));
        assert!(!is_extrapolated(500.0));
        assert!(is_extrapolated(500.1));
    }
}
