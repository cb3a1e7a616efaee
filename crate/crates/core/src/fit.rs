//! Floating-intercept least-squares fits of labelled path-loss scatter data.
//!
//! Each link type is regressed separately: `path_loss_db` against
//! `x = 10 log10(distance_m)`. The slope is `beta`, the intercept `alpha`,
//! and `sigma_sq` is the mean squared residual (divisor `n`, the
//! maximum-likelihood estimate). The normal equations are solved in
//! mean-centred coordinates.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathloss::sample_path_loss;
use crate::scenario::{LinkPair, LinkType, ModelParams};

/// One labelled scatter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSample {
    /// 3D transmitter-receiver distance, meters.
    pub distance_m: f64,
    pub path_loss_db: f64,
    pub link: LinkType,
}

impl MeasurementSample {
    pub fn new(distance_m: f64, path_loss_db: f64, link: LinkType) -> Result<Self> {
        let sample = MeasurementSample { distance_m, path_loss_db, link };
        sample.validate()?;
        Ok(sample)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance_m > 0.0 && self.distance_m.is_finite()) {
            return Err(Error::NonPositiveDistance(self.distance_m));
        }
        if !self.path_loss_db.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "path loss must be finite, got {}",
                self.path_loss_db
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub link: LinkType,
    pub params: ModelParams,
    pub n_samples: usize,
    /// Root-mean-square residual, dB. Equals `params.sigma()`.
    pub residual_rms_db: f64,
    /// Smallest and largest input distance, meters.
    pub distance_range: (f64, f64),
}

/// Fit `alpha`, `beta`, `sigma_sq` to the samples labelled `link`; others are ignored.
pub fn fit_log_distance(samples: &[MeasurementSample], link: LinkType) -> Result<FitResult> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut d_min = f64::INFINITY;
    let mut d_max = f64::NEG_INFINITY;
    for s in samples.iter().filter(|s| s.link == link) {
        s.validate()?;
        xs.push(10.0 * s.distance_m.log10());
        ys.push(s.path_loss_db);
        d_min = d_min.min(s.distance_m);
        d_max = d_max.max(s.distance_m);
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientData { link, found: n });
    }
    if d_min == d_max {
        return Err(Error::RankDeficient { link });
    }

    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let (sxx, sxy) = xs.iter().zip(&ys).fold((0.0, 0.0), |(sxx, sxy), (x, y)| {
        let dx = x - x_mean;
        (sxx + dx * dx, sxy + dx * (y - y_mean))
    });
    if sxx <= 0.0 {
        return Err(Error::RankDeficient { link });
    }
    let beta = sxy / sxx;
    let alpha = y_mean - beta * x_mean;
    let sigma_sq = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (alpha + beta * x);
            r * r
        })
        .sum::<f64>()
        / nf;

    Ok(FitResult {
        link,
        params: ModelParams { alpha, beta, sigma_sq },
        n_samples: n,
        residual_rms_db: sigma_sq.sqrt(),
        distance_range: (d_min, d_max),
    })
}

/// Separate LOS and NLOS fits over one scatter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFit {
    pub los: FitResult,
    pub nlos: FitResult,
}

impl ScenarioFit {
    pub fn params(&self) -> LinkPair {
        LinkPair { los: self.los.params, nlos: self.nlos.params }
    }

    pub fn get(&self, link: LinkType) -> &FitResult {
        match link {
            LinkType::Los => &self.los,
            LinkType::Nlos => &self.nlos,
        }
    }
}

pub fn fit_scenario(samples: &[MeasurementSample]) -> Result<ScenarioFit> {
    for link in LinkType::ALL {
        if !samples.iter().any(|s| s.link == link) {
            return Err(Error::PartialData(link));
        }
    }
    Ok(ScenarioFit {
        los: fit_log_distance(samples, LinkType::Los)?,
        nlos: fit_log_distance(samples, LinkType::Nlos)?,
    })
}

/// Draw `n` samples with distances uniform in `[d_min, d_max]` and shadowing
/// from `params`, all labelled `link`.
pub fn synthesize_samples<R: Rng + ?Sized>(
    params: &ModelParams,
    link: LinkType,
    n: usize,
    (d_min, d_max): (f64, f64),
    rng: &mut R,
) -> Result<Vec<MeasurementSample>> {
    if !(d_min > 0.0 && d_max >= d_min && d_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "distance range must satisfy 0 < d_min <= d_max, got [{d_min}, {d_max}]"
        )));
    }
    (0..n)
        .map(|_| {
            let d = if d_max > d_min { rng.random_range(d_min..=d_max) } else { d_min };
            let pl = sample_path_loss(params, d, rng)?;
            Ok(MeasurementSample { distance_m: d, path_loss_db: pl, link })
        })
        .collect()
}

/// Absolute deviations of a fit from a reference triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub alpha: f64,
    pub beta: f64,
    pub sigma_sq: f64,
}

impl Deviation {
    pub fn between(fitted: &ModelParams, reference: &ModelParams) -> Self {
        Deviation {
            alpha: (fitted.alpha - reference.alpha).abs(),
            beta: (fitted.beta - reference.beta).abs(),
            sigma_sq: (fitted.sigma_sq - reference.sigma_sq).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReportRow {
    pub fit: FitResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ModelParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<Deviation>,
}

/// Fitted parameters side by side with an optional reference. `Display`
/// renders the CLI table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub rows: Vec<FitReportRow>,
}

pub fn fit_report(results: &ScenarioFit, reference: Option<&LinkPair>) -> FitReport {
    let rows = LinkType::ALL
        .into_iter()
        .map(|link| {
            let fit = *results.get(link);
            let reference = reference.map(|r| r.get(link));
            FitReportRow {
                fit,
                reference,
                deviation: reference.map(|r| Deviation::between(&fit.params, &r)),
            }
        })
        .collect();
    FitReport { rows }
}

impl FitReport {
    pub fn has_reference(&self) -> bool {
        self.rows.iter().any(|r| r.reference.is_some())
    }
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let with_ref = self.has_reference();
        write!(
            f,
            "{:<5} {:>7} {:>17} {:>10} {:>10} {:>9}",
            "link", "n", "range_m", "alpha", "beta", "sigma^2"
        )?;
        if with_ref {
            write!(
                f,
                " {:>10} {:>10} {:>9} {:>9} {:>8} {:>9}",
                "ref_alpha", "ref_beta", "ref_s^2", "|d_alpha|", "|d_beta|", "|d_s^2|"
            )?;
        }
        writeln!(f)?;
        for row in &self.rows {
            let fit = &row.fit;
            let range = format!("{:.1}-{:.1}", fit.distance_range.0, fit.distance_range.1);
            write!(
                f,
                "{:<5} {:>7} {:>17} {:>10.2} {:>10.2} {:>9.2}",
                fit.link.name(),
                fit.n_samples,
                range,
                fit.params.alpha,
                fit.params.beta,
                fit.params.sigma_sq
            )?;
            if with_ref {
                match (row.reference, row.deviation) {
                    (Some(r), Some(d)) => write!(
                        f,
                        " {:>10.2} {:>10.2} {:>9.2} {:>9.2} {:>8.2} {:>9.2}",
                        r.alpha, r.beta, r.sigma_sq, d.alpha, d.beta, d.sigma_sq
                    )?,
                    _ => write!(f, " {:>10} {:>10} {:>9} {:>9} {:>8} {:>9}", "-", "-", "-", "-", "-", "-")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{lookup_params, Environment, FrequencyBand, Scenario};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(alpha: f64, beta: f64, ds: &[f64], link: LinkType) -> Vec<MeasurementSample> {
        ds.iter()
            .map(|&d| MeasurementSample::new(d, alpha + beta * 10.0 * d.log10(), link).unwrap())
            .collect()
    }

    #[test]
    fn noiseless_recovery() {
        let s = line(100.0, 2.0, &[200.0, 300.0, 400.0, 500.0], LinkType::Los);
        let fit = fit_log_distance(&s, LinkType::Los).unwrap();
        assert!((fit.params.alpha - 100.0).abs() < 1e-9);
        assert!((fit.params.beta - 2.0).abs() < 1e-9);
        assert!(fit.params.sigma_sq.abs() < 1e-9);
        assert_eq!(fit.n_samples, 4);
        assert_eq!(fit.distance_range, (200.0, 500.0));
    }

    #[test]
    fn two_point_line() {
        let s = vec![
            MeasurementSample::new(100.0, 120.0, LinkType::Nlos).unwrap(),
            MeasurementSample::new(1000.0, 140.0, LinkType::Nlos).unwrap(),
        ];
        let fit = fit_log_distance(&s, LinkType::Nlos).unwrap();
        assert!((fit.params.beta - 2.0).abs() < 1e-12);
        assert!((fit.params.alpha - 80.0).abs() < 1e-10);
        assert!(fit.params.sigma_sq < 1e-20);
    }

    #[test]
    fn other_link_samples_are_ignored() {
        let mut s = line(100.0, 2.0, &[200.0, 300.0, 400.0], LinkType::Los);
        s.extend(line(50.0, 4.0, &[250.0, 450.0], LinkType::Nlos));
        let fit = fit_log_distance(&s, LinkType::Los).unwrap();
        assert_eq!(fit.n_samples, 3);
        assert!((fit.params.alpha - 100.0).abs() < 1e-9);
    }

    #[test]
    fn insufficient_and_rank_deficient() {
        let one = line(100.0, 2.0, &[200.0], LinkType::Los);
        assert_eq!(
            fit_log_distance(&one, LinkType::Los).unwrap_err(),
            Error::InsufficientData { link: LinkType::Los, found: 1 }
        );
        assert_eq!(
            fit_log_distance(&one, LinkType::Nlos).unwrap_err(),
            Error::InsufficientData { link: LinkType::Nlos, found: 0 }
        );
        let same = vec![
            MeasurementSample::new(300.0, 120.0, LinkType::Los).unwrap(),
            MeasurementSample::new(300.0, 121.0, LinkType::Los).unwrap(),
        ];
        assert_eq!(
            fit_log_distance(&same, LinkType::Los).unwrap_err(),
            Error::RankDeficient { link: LinkType::Los }
        );
    }

    #[test]
    fn duplicate_distances_allowed() {
        let s = vec![
            MeasurementSample::new(300.0, 120.0, LinkType::Los).unwrap(),
            MeasurementSample::new(300.0, 122.0, LinkType::Los).unwrap(),
            MeasurementSample::new(400.0, 125.0, LinkType::Los).unwrap(),
        ];
        let fit = fit_log_distance(&s, LinkType::Los).unwrap();
        // Mean of the duplicates lies on the line, leaving residuals of +-1.
        assert!((fit.params.sigma_sq - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_sample_rejected() {
        assert!(MeasurementSample::new(0.0, 100.0, LinkType::Los).is_err());
        assert!(MeasurementSample::new(10.0, f64::NAN, LinkType::Los).is_err());
    }

    #[test]
    fn urban_nlos_monte_carlo_recovery() {
        let truth = lookup_params(Scenario::new(
            Environment::Urban,
            FrequencyBand::F28GHz,
            LinkType::Nlos,
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = synthesize_samples(&truth, LinkType::Nlos, 10_000, (200.0, 500.0), &mut rng).unwrap();
        let fit = fit_log_distance(&s, LinkType::Nlos).unwrap();
        assert!((fit.params.alpha - truth.alpha).abs() <= 0.5, "{fit:?}");
        assert!((fit.params.beta - truth.beta).abs() <= 0.05, "{fit:?}");
        assert!((fit.params.sigma_sq - truth.sigma_sq).abs() <= 0.15 * truth.sigma_sq, "{fit:?}");
        assert_eq!(fit.residual_rms_db, fit.params.sigma_sq.sqrt());
    }

    #[test]
    fn scenario_requires_both_links() {
        let s = line(100.0, 2.0, &[200.0, 300.0], LinkType::Los);
        assert_eq!(fit_scenario(&s).unwrap_err(), Error::PartialData(LinkType::Nlos));
        let s = line(100.0, 2.0, &[200.0, 300.0], LinkType::Nlos);
        assert_eq!(fit_scenario(&s).unwrap_err(), Error::PartialData(LinkType::Los));
    }

    #[test]
    fn label_swap_swaps_results() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pair = LinkPair::lookup(Environment::Suburban, FrequencyBand::F73GHz);
        let mut s = synthesize_samples(&pair.los, LinkType::Los, 500, (200.0, 500.0), &mut rng).unwrap();
        s.extend(synthesize_samples(&pair.nlos, LinkType::Nlos, 500, (200.0, 500.0), &mut rng).unwrap());
        let a = fit_scenario(&s).unwrap();
        let flipped: Vec<_> = s
            .iter()
            .map(|m| MeasurementSample {
                link: match m.link {
                    LinkType::Los => LinkType::Nlos,
                    LinkType::Nlos => LinkType::Los,
                },
                ..*m
            })
            .collect();
        let b = fit_scenario(&flipped).unwrap();
        assert_eq!(a.los.params, b.nlos.params);
        assert_eq!(a.nlos.params, b.los.params);
    }

    #[test]
    fn report_deviations() {
        let pair = LinkPair::lookup(Environment::Urban, FrequencyBand::F28GHz);
        let mut s = line(pair.los.alpha, pair.los.beta, &[200.0, 350.0, 500.0], LinkType::Los);
        s.extend(line(pair.nlos.alpha, pair.nlos.beta, &[200.0, 350.0, 500.0], LinkType::Nlos));
        let fits = fit_scenario(&s).unwrap();

        let exact = LinkPair { los: fits.los.params, nlos: fits.nlos.params };
        let report = fit_report(&fits, Some(&exact));
        for row in &report.rows {
            let d = row.deviation.unwrap();
            assert_eq!((d.alpha, d.beta, d.sigma_sq), (0.0, 0.0, 0.0));
        }
        assert!(report.to_string().contains("|d_alpha|"));

        let bare = fit_report(&fits, None);
        assert!(bare.rows.iter().all(|r| r.deviation.is_none()));
        let text = bare.to_string();
        assert!(!text.contains("|d_alpha|") && !text.contains("ref_alpha"));
        assert!(text.contains("82.54") && text.contains("97.81"), "{text}");
    }
}
