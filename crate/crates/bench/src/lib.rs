//! Shared fixtures for the criterion benches.

use gta_core::fit::synthesize_samples;
use gta_core::{
    BlockerField, Environment, FrequencyBand, GridSpec, LinkPair, LinkType, MeasurementSample,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// LOS and NLOS scatter drawn from the urban 28 GHz tables, `n` points per link.
pub fn urban_scatter(n: usize, seed: u64) -> Vec<MeasurementSample> {
    let pair = LinkPair::lookup(Environment::Urban, FrequencyBand::F28GHz);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples =
        synthesize_samples(&pair.los, LinkType::Los, n, (200.0, 500.0), &mut rng).unwrap();
    samples.extend(synthesize_samples(&pair.nlos, LinkType::Nlos, n, (200.0, 500.0), &mut rng).unwrap());
    samples
}

/// Default 1 km grid with the given cell size.
pub fn grid(cell_size: f64) -> GridSpec {
    GridSpec { cell_size, ..GridSpec::default() }
}

pub fn crowd() -> BlockerField {
    BlockerField::new(0.01, 0.5, 1.8).unwrap()
}
