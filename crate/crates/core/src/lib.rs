//! Finite metric models of flat manifolds with boundary: sampling, inner
//! regions, packing and Gromov-Hausdorff estimates, and glued limits of
//! towers of inner regions.
//!
//! Everything that stores distances is generic over [`Scalar`] (`f32` or
//! `f64`); the aliases below fix the common choices.

pub mod gallery;
pub mod gh;
pub mod glued;
pub mod graph;
pub mod metric;
pub mod sampler;
pub mod scalar;
pub mod scenario;

pub use scalar::Scalar;

use thiserror::Error;

/// Dense metric space with `f64` distances.
pub type Space = metric::FiniteMetricSpace<f64>;
/// Dense metric space with `f32` distances, for large samples.
pub type Space32 = metric::FiniteMetricSpace<f32>;
pub type Tower = glued::Tower<f64>;
pub type GluedSpace = glued::GluedSpace<f64>;

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Metric(#[from] metric::MetricError),
    #[error(transparent)]
    Sample(#[from] sampler::SampleError),
    #[error(transparent)]
    Gh(#[from] gh::GhError),
    #[error(transparent)]
    Glued(#[from] glued::GluedError),
    #[error(transparent)]
    Gallery(#[from] gallery::GalleryError),
    #[error(transparent)]
    Scenario(#[from] scenario::ScenarioError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
