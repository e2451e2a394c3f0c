//! Towers of limit spaces, the glued space built from them, balls inside it
//! and the inner-union estimate.

mod io;
mod space;
mod stats;
mod tower;

use thiserror::Error;

pub use io::{glued_to_json, tower_from_json, tower_to_json, GluedJson, SpaceSource, TowerJson};
pub use space::{build_glued, embed_stratum, glued_ball, GluedBall, GluedSpace, MergedPoint, StratumReport};
pub use stats::{ball_growth_exponent, inner_union_estimate, GrowthFit, InnerUnion, ScaleSubsets};
pub use tower::{find_isometric_embedding, validate_tower, EmbeddingMap, Tower, TowerReport, TowerViolation};

use crate::metric::MetricError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GluedError {
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("no isometric embedding: {0}")]
    NoEmbedding(String),
    #[error("search effort exhausted after {tried} assignments")]
    EffortExhausted { tried: usize },
    #[error("radius {eps} is not below {max}")]
    RadiusTooLarge { eps: f64, max: f64 },
    #[error("level {level} is not valid for a tower of {levels} levels")]
    InvalidLevel { level: usize, levels: usize },
    #[error("degenerate radius grid: {0}")]
    DegenerateGrid(String),
    #[error("inconsistent ambient space: {0}")]
    InconsistentAmbient(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}
