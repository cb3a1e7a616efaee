use thiserror::Error;

use crate::scenario::LinkType;

/// Errors raised by the channel model, fitting and coverage routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance must be positive and finite, got {0} m")]
    NonPositiveDistance(f64),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data: {found} usable {link} sample(s), need at least 2")]
    InsufficientData { link: LinkType, found: usize },

    #[error("rank deficient fit: all {link} samples share one distance")]
    RankDeficient { link: LinkType },

    #[error("partial data: no {0} samples present")]
    PartialData(LinkType),

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
