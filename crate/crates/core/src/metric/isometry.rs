use serde::{Deserialize, Serialize};

use super::{MetricError, MetricView};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub map: Vec<usize>,
    /// Worst `|d_src(a, b) - d_dst(f(a), f(b))|` over all source pairs.
    pub max_distortion: f64,
    pub injective: bool,
    pub worst_pair: Option<(usize, usize)>,
    pub passes: bool,
}

/// Measures how far `map` is from an isometric embedding `src -> dst`.
pub fn is_isometric_embedding<T, S, D>(
    src: &S,
    dst: &D,
    map: &[usize],
    tol: T,
) -> Result<IsometryReport, MetricError>
where
    T: Scalar,
    S: MetricView<T> + ?Sized,
    D: MetricView<T> + ?Sized,
{
    if map.len() != src.len() {
        return Err(MetricError::InvalidMap(format!(
            "map has {} entries for {} source points",
            map.len(),
            src.len()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&t| t >= dst.len()) {
        return Err(MetricError::InvalidMap(format!("target {bad} out of range")));
    }
    let mut seen = vec![false; dst.len()];
    let mut injective = true;
    for &t in map {
        injective &= !seen[t];
        seen[t] = true;
    }
    let mut worst = T::zero();
    let mut worst_pair = None;
    for a in 0..src.len() {
        let rs = src.row(a);
        let rd = dst.dists_to(map[a], &map[a + 1..]);
        for (k, &dd) in rd.iter().enumerate() {
            let b = a + 1 + k;
            let e = (rs[b] - dd).abs();
            if e > worst || (e.is_nan() && !worst.is_nan()) {
                worst = e;
                worst_pair = Some((a, b));
            }
        }
    }
    let passes = injective && worst <= tol;
    Ok(IsometryReport { map: map.to_vec(), max_distortion: worst.as_f64(), injective, worst_pair, passes })
}
