//! Scenario keys and the embedded parameter tables.
//!
//! Sixteen fitted `(alpha, beta, sigma_sq)` triples: four environments,
//! two carrier bands, LOS and NLOS links. Values are stored exactly as
//! published, with `sigma_sq` read as the shadowing variance in dB².

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Environment {
    Suburban,
    Urban,
    DenseUrban,
    HighRise,
}

impl Environment {
    pub const ALL: [Environment; 4] = [
        Environment::Suburban,
        Environment::Urban,
        Environment::DenseUrban,
        Environment::HighRise,
    ];

    /// Canonical lowercase name, as accepted by `FromStr` and used in JSON.
    pub fn name(self) -> &'static str {
        match self {
            Environment::Suburban => "suburban",
            Environment::Urban => "urban",
            Environment::DenseUrban => "dense-urban",
            Environment::HighRise => "high-rise",
        }
    }

    /// Column heading used when rendering the parameter tables.
    pub fn title(self) -> &'static str {
        match self {
            Environment::Suburban => "Suburban",
            Environment::Urban => "Urban",
            Environment::DenseUrban => "Dense-Urban",
            Environment::HighRise => "High-rise",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Environment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "suburban" => Ok(Environment::Suburban),
            "urban" => Ok(Environment::Urban),
            "denseurban" | "dense" => Ok(Environment::DenseUrban),
            "highrise" => Ok(Environment::HighRise),
            _ => Err(Error::InvalidParameter(format!(
                "unknown environment '{s}' (valid: suburban, urban, dense-urban, high-rise)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FrequencyBand {
    #[serde(rename = "28ghz")]
    F28GHz,
    #[serde(rename = "73ghz")]
    F73GHz,
}

impl FrequencyBand {
    pub const ALL: [FrequencyBand; 2] = [FrequencyBand::F28GHz, FrequencyBand::F73GHz];

    pub fn carrier_ghz(self) -> f64 {
        match self {
            FrequencyBand::F28GHz => 28.0,
            FrequencyBand::F73GHz => 73.0,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FrequencyBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} GHz", self.carrier_ghz())
    }
}

impl FromStr for FrequencyBand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        match key.trim_end_matches("ghz").trim() {
            "28" | "28.0" => Ok(FrequencyBand::F28GHz),
            "73" | "73.0" => Ok(FrequencyBand::F73GHz),
            _ => Err(Error::InvalidParameter(format!(
                "unknown frequency band '{s}' (valid: 28, 73)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LinkType {
    Los,
    Nlos,
}

impl LinkType {
    pub const ALL: [LinkType; 2] = [LinkType::Los, LinkType::Nlos];

    pub fn name(self) -> &'static str {
        match self {
            LinkType::Los => "LOS",
            LinkType::Nlos => "NLOS",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "los" => Ok(LinkType::Los),
            "nlos" => Ok(LinkType::Nlos),
            _ => Err(Error::InvalidParameter(format!(
                "unknown link type '{s}' (valid: los, nlos)"
            ))),
        }
    }
}

/// One fitted log-distance model: `PL(d) = alpha + beta * 10 log10(d) + N(0, sigma_sq)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Floating intercept in dB.
    pub alpha: f64,
    /// Path-loss exponent (slope on `10 log10(d)`).
    pub beta: f64,
    /// Shadowing variance in dB².
    pub sigma_sq: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, sigma_sq: f64) -> Result<Self> {
        let params = ModelParams { alpha, beta, sigma_sq };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha and beta must be finite (alpha={}, beta={})",
                self.alpha, self.beta
            )));
        }
        if !(self.sigma_sq >= 0.0 && self.sigma_sq.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma_sq must be finite and non-negative, got {}",
                self.sigma_sq
            )));
        }
        Ok(())
    }

    /// Shadowing standard deviation in dB.
    pub fn sigma(&self) -> f64 {
        self.sigma_sq.sqrt()
    }
}

/// Key into the parameter tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub environment: Environment,
    pub band: FrequencyBand,
    pub link: LinkType,
}

impl Scenario {
    pub fn new(environment: Environment, band: FrequencyBand, link: LinkType) -> Self {
        Scenario { environment, band, link }
    }

    /// All sixteen table keys, band-major then link then environment.
    pub fn all() -> impl Iterator<Item = Scenario> {
        FrequencyBand::ALL.into_iter().flat_map(|band| {
            LinkType::ALL.into_iter().flat_map(move |link| {
                Environment::ALL
                    .into_iter()
                    .map(move |environment| Scenario::new(environment, band, link))
            })
        })
    }

    pub fn params(self) -> ModelParams {
        lookup_params(self)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.environment, self.band, self.link)
    }
}

const fn p(alpha: f64, beta: f64, sigma_sq: f64) -> ModelParams {
    ModelParams { alpha, beta, sigma_sq }
}

// [band][link][environment]; environment order Suburban, Urban, DenseUrban, HighRise.
const TABLES: [[[ModelParams; 4]; 2]; 2] = [
    // 28 GHz
    [
        [
            p(84.64, 1.55, 0.12),
            p(82.54, 1.68, 0.79),
            p(78.58, 1.85, 0.49),
            p(88.76, 1.68, 2.47),
        ],
        [
            p(113.63, 1.16, 2.58),
            p(97.81, 1.87, 1.69),
            p(98.05, 1.86, 0.59),
            p(66.25, 3.30, 4.48),
        ],
    ],
    // 73 GHz
    [
        [
            p(93.63, 1.52, 0.16),
            p(90.86, 1.69, 0.84),
            p(85.71, 1.90, 0.42),
            p(85.49, 1.92, 0.57),
        ],
        [
            p(115.40, 1.43, 2.74),
            p(100.83, 2.09, 1.90),
            p(105.37, 1.91, 0.46),
            p(102.10, 2.22, 6.61),
        ],
    ],
];

/// Published parameter triple for a scenario. Total over the 16 keys.
pub fn lookup_params(scenario: Scenario) -> ModelParams {
    TABLES[scenario.band.index()][scenario.link.index()][scenario.environment.index()]
}

/// LOS and NLOS parameters that share one environment and band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkPair {
    pub los: ModelParams,
    pub nlos: ModelParams,
}

impl LinkPair {
    pub fn lookup(environment: Environment, band: FrequencyBand) -> Self {
        LinkPair {
            los: lookup_params(Scenario::new(environment, band, LinkType::Los)),
            nlos: lookup_params(Scenario::new(environment, band, LinkType::Nlos)),
        }
    }

    pub fn get(&self, link: LinkType) -> ModelParams {
        match link {
            LinkType::Los => self.los,
            LinkType::Nlos => self.nlos,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_examples() {
        let urban_nlos = lookup_params(Scenario::new(
            Environment::Urban,
            FrequencyBand::F28GHz,
            LinkType::Nlos,
        ));
        assert_eq!(urban_nlos, p(97.81, 1.87, 1.69));

        let sub_los = lookup_params(Scenario::new(
            Environment::Suburban,
            FrequencyBand::F73GHz,
            LinkType::Los,
        ));
        assert_eq!(sub_los, p(93.63, 1.52, 0.16));

        let hr_nlos = lookup_params(Scenario::new(
            Environment::HighRise,
            FrequencyBand::F28GHz,
            LinkType::Nlos,
        ));
        assert_eq!(hr_nlos, p(66.25, 3.30, 4.48));
    }

    #[test]
    fn sixteen_distinct_valid_entries() {
        let all: Vec<_> = Scenario::all().collect();
        assert_eq!(all.len(), 16);
        for (i, a) in all.iter().enumerate() {
            a.params().validate().unwrap();
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn parse_keys() {
        assert_eq!("Dense-Urban".parse::<Environment>().unwrap(), Environment::DenseUrban);
        assert_eq!("high_rise".parse::<Environment>().unwrap(), Environment::HighRise);
        assert_eq!("73GHz".parse::<FrequencyBand>().unwrap(), FrequencyBand::F73GHz);
        assert_eq!("28".parse::<FrequencyBand>().unwrap(), FrequencyBand::F28GHz);
        assert_eq!("nLoS".parse::<LinkType>().unwrap(), LinkType::Nlos);

        let err = "marine".parse::<Environment>().unwrap_err().to_string();
        assert!(err.contains("suburban") && err.contains("high-rise"), "{err}");
        assert!("60".parse::<FrequencyBand>().is_err());
        assert!("obstructed".parse::<LinkType>().is_err());
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::new(1.0, 2.0, -0.1).is_err());
        assert!(ModelParams::new(f64::NAN, 2.0, 0.1).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY, 0.1).is_err());
        assert_eq!(ModelParams::new(1.0, 2.0, 4.0).unwrap().sigma(), 2.0);
    }
}
