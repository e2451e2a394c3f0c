//! Sampling flat domains into geodesic graphs with boundary-distance fields.

mod assemble;
mod domain;
mod inner;
mod plan;
mod planar;
mod polar;
mod sampled;
mod stack;

pub use domain::{DomainSpec, RadialProfile, Shape};
pub use inner::{inner_region, intrinsic_diameter, restricted_vs_intrinsic_probe, InnerRegionResult, IntrinsicMetric};
pub use plan::SamplePlan;
pub use sampled::{boundary_distance_field, estimate_area, sample_domain, BoundaryField, SampledJson, SampledSpace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("invalid domain: {0}")]
    InvalidSpec(String),
    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),
    #[error("no sample points fall inside the domain")]
    EmptyRegion,
    #[error("domain has no boundary")]
    NoBoundary,
    #[error("intrinsic metric was not requested")]
    IntrinsicNotComputed,
    #[error("({x}, {y}) does not resolve to an inner-region sample")]
    PointNotInInnerRegion { x: f64, y: f64 },
}
