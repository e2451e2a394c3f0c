use serde::{Deserialize, Serialize};

use super::SampleError;

/// Resolution and randomness for one sampling run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub h: f64,
    pub connect_radius: f64,
    /// 0 keeps the regular grid; anything else jitters it.
    pub seed: u64,
    pub boundary_h: f64,
}

impl SamplePlan {
    /// Spacing `h` with edge cutoff `2.2 h` and boundary spacing `h / 2`.
    pub fn new(h: f64) -> Self {
        Self { h, connect_radius: 2.2 * h, seed: 0, boundary_h: h / 2.0 }
    }

    pub fn with_connect_factor(mut self, factor: f64) -> Self {
        self.connect_radius = factor * self.h;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_boundary_h(mut self, boundary_h: f64) -> Self {
        self.boundary_h = boundary_h;
        self
    }

    pub fn validate(&self) -> Result<(), SampleError> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(SampleError::InvalidPlan("h must be positive".into()));
        }
        if self.connect_radius < self.h * std::f64::consts::SQRT_2 {
            return Err(SampleError::InvalidPlan("connect_radius must be at least h * sqrt(2)".into()));
        }
        if !(self.boundary_h > 0.0) {
            return Err(SampleError::InvalidPlan("boundary_h must be positive".into()));
        }
        Ok(())
    }
}
