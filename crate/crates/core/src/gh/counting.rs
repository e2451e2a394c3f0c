use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GhError;

/// Inputs of the chain-counting covering bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainCountingParams {
    pub m: u32,
    pub delta: f64,
    pub epsilon: f64,
    /// Bound on the intrinsic diameter of the inner region.
    pub d_delta: f64,
    pub volume: f64,
    /// Noncollapsing constant.
    pub theta: f64,
}

impl ChainCountingParams {
    pub fn validate(&self) -> Result<(), GhError> {
        let all = [self.delta, self.epsilon, self.d_delta, self.volume, self.theta];
        if self.m == 0 || all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(GhError::InvalidParams("chain-counting parameters must be positive and finite".into()));
        }
        if self.epsilon >= self.delta / 2.0 {
            return Err(GhError::InvalidParams(format!("epsilon {} must be below delta / 2 = {}", self.epsilon, self.delta / 2.0)));
        }
        Ok(())
    }
}

/// A positive count that may exceed `f64`, kept as its base-10 logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigCount {
    pub log10: f64,
}

impl BigCount {
    /// The value as `f64`; `+inf` when out of range.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }

    /// Whether `n` does not exceed this count.
    pub fn bounds(&self, n: usize) -> bool {
        n == 0 || (n as f64).log10() <= self.log10
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log10 < 15.0 {
            write!(f, "{}", self.value())
        } else {
            let e = self.log10.floor();
            write!(f, "{:.4}e{}", 10f64.powf(self.log10 - e), e)
        }
    }
}

/// `(V / theta) * (2^(2 D / eps) / eps)^m`, evaluated in log space.
pub fn chain_counting_bound(p: &ChainCountingParams) -> Result<BigCount, GhError> {
    p.validate()?;
    let per_dim = 2.0 * p.d_delta / p.epsilon * 2f64.log10() - p.epsilon.log10();
    Ok(BigCount { log10: (p.volume / p.theta).log10() + p.m as f64 * per_dim })
}

/// Volume of a flat ball of radius `eps` in dimension 1, 2 or 3.
pub fn ball_volume_flat(m: u32, eps: f64) -> Result<f64, GhError> {
    let omega = match m {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => return Err(GhError::UnsupportedDimension(m)),
    };
    Ok(omega * eps.powi(m as i32))
}

/// Diameter bound `eps0 * V / vol(B(eps0 / 2))` with
/// `eps0 = min(delta, l / 2) / 2`, for flat comparison geometry.
pub fn sc_diameter_bound(volume: f64, delta: f64, l: f64, m: u32) -> Result<f64, GhError> {
    let eps0 = delta.min(l / 2.0) / 2.0;
    Ok(eps0 * volume / ball_volume_flat(m, eps0 / 2.0)?)
}
