//! Packing and covering numbers, Gromov-Hausdorff bounds and sequence
//! diagnostics.

mod counting;
mod exact;
mod lower;
mod packing;
mod sequence;
mod upper;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use counting::{ball_volume_flat, chain_counting_bound, sc_diameter_bound, BigCount, ChainCountingParams};
pub use exact::{gh_exact_small, EXACT_MAX_POINTS};
pub use lower::{gh_lower_bound, separation_obstruction, LowerBound, LowerMethod};
pub use packing::{
    covering_from_packing, farthest_points, greedy_packing, packing_curve, CoveringReport, FarthestPoints, PackingReport,
};
pub use sequence::{sequence_diagnostics, SequenceConfig, SequenceDiagnosis, Verdict};
pub use upper::{distortion, gh_upper_bound, Correspondence, UpperBound};

use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GhError {
    #[error("space is empty")]
    EmptySpace,
    #[error("exact search supports at most {max} points per space, got {n} and {m}")]
    TooLarge { n: usize, m: usize, max: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported dimension {0}; expected 1, 2 or 3")]
    UnsupportedDimension(u32),
    #[error("sequence diagnostics need at least 3 spaces, got {0}")]
    TooFewSpaces(usize),
    #[error("i/o: {0}")]
    Io(String),
}

/// Lower and upper bounds on the Gromov-Hausdorff distance, with the exact
/// value when both spaces are small enough.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhBound {
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    pub lower_method: LowerMethod,
    pub correspondence: Correspondence,
}

pub fn gh_bounds<T: Scalar>(x: &FiniteMetricSpace<T>, y: &FiniteMetricSpace<T>, effort: usize) -> Result<GhBound, GhError> {
    let lo = gh_lower_bound(x, y)?;
    let up = gh_upper_bound(x, y, effort)?;
    let exact = if x.len() <= EXACT_MAX_POINTS && y.len() <= EXACT_MAX_POINTS { Some(gh_exact_small(x, y)?) } else { None };
    Ok(GhBound { lower: lo.value, upper: up.value, exact, lower_method: lo.method, correspondence: up.correspondence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn planar(max: usize) -> impl Strategy<Value = FiniteMetricSpace<f64>> {
        prop::collection::vec((0.0..3.0f64, 0.0..3.0f64), 1..=max)
            .prop_map(|v| FiniteMetricSpace::from_planar(&v.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()))
    }

    // random metrics that are not planar: shortest paths of random weights
    fn graph_metric(max: usize) -> impl Strategy<Value = FiniteMetricSpace<f64>> {
        (1..=max).prop_flat_map(|n| prop::collection::vec(0.1..2.0f64, n * n)).prop_map(|w| {
            let n = (w.len() as f64).sqrt().round() as usize;
            let mut d: Vec<Vec<f64>> =
                (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { w[i.min(j) * n + i.max(j)] }).collect()).collect();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                    }
                }
            }
            FiniteMetricSpace::new(d, 1e-12).unwrap()
        })
    }

    fn any_small() -> impl Strategy<Value = FiniteMetricSpace<f64>> {
        prop_oneof![planar(5), graph_metric(5)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn sandwich(x in any_small(), y in any_small()) {
            let b = gh_bounds(&x, &y, 20).unwrap();
            let e = b.exact.unwrap();
            prop_assert!(b.lower <= e + 1e-12, "lower {} exact {}", b.lower, e);
            prop_assert!(e <= b.upper + 1e-12, "exact {} upper {}", e, b.upper);
            prop_assert!(separation_obstruction(&x, &y) <= e + 1e-12);
            prop_assert!(b.correspondence.is_surjective(x.len(), y.len()));
        }

        #[test]
        fn symmetric_and_zero_on_identical(x in any_small(), y in any_small()) {
            let ab = gh_bounds(&x, &y, 20).unwrap();
            let ba = gh_bounds(&y, &x, 20).unwrap();
            prop_assert_eq!(ab.lower, ba.lower);
            prop_assert_eq!(ab.exact, ba.exact);
            prop_assert!((ab.upper - ba.upper).abs() < 1e-12);
            let same = gh_bounds(&x, &x, 20).unwrap();
            prop_assert_eq!((same.lower, same.upper, same.exact), (0.0, 0.0, Some(0.0)));
        }

        #[test]
        fn lower_bound_sound_past_exact_size(x in planar(14), y in planar(14)) {
            // a genuine correspondence certifies an upper bound
            let up = gh_upper_bound(&x, &y, 20).unwrap();
            prop_assert!(gh_lower_bound(&x, &y).unwrap().value <= up.value + 1e-12);
        }
    }
}
