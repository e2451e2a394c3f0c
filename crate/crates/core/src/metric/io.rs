use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_entries, FiniteMetricSpace, MetricError};
use crate::scalar::Scalar;

/// On-disk form of a space: the strict upper triangle, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub dist_upper: Vec<f64>,
}

pub fn space_to_json<T: Scalar>(space: &FiniteMetricSpace<T>) -> SpaceJson {
    let n = space.len();
    let mut dist_upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        dist_upper.extend(space.row(i)[i + 1..].iter().map(|d| d.as_f64()));
    }
    SpaceJson { n, labels: space.labels().map(<[String]>::to_vec), dist_upper }
}

/// Rebuilds a space and validates it with triangle slack `1e-9 * max entry`.
pub fn space_from_json<T: Scalar>(doc: SpaceJson) -> Result<FiniteMetricSpace<T>, MetricError> {
    let n = doc.n;
    let expected = n * n.saturating_sub(1) / 2;
    if doc.dist_upper.len() != expected {
        return Err(MetricError::Format(format!(
            "dist_upper has {} entries, expected {expected}",
            doc.dist_upper.len()
        )));
    }
    let mut flat = vec![T::zero(); n * n];
    let mut it = doc.dist_upper.iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = T::lit(*it.next().unwrap());
            flat[i * n + j] = d;
            flat[j * n + i] = d;
        }
    }
    check_entries(n, &flat)?;
    let space = FiniteMetricSpace::from_flat_unchecked(n, flat);
    let tol = space.diameter() * T::lit(1e-9);
    if let Some(v) = space.validate(tol).violation {
        return Err(MetricError::NotAMetric(v.to_string()));
    }
    match doc.labels {
        Some(l) => space.with_labels(l),
        None => Ok(space),
    }
}

pub fn read_space_json<T: Scalar>(text: &str) -> Result<FiniteMetricSpace<T>, MetricError> {
    let doc: SpaceJson = serde_json::from_str(text).map_err(|e| MetricError::Format(e.to_string()))?;
    space_from_json(doc)
}

pub fn load_space_json<T: Scalar>(path: impl AsRef<Path>) -> Result<FiniteMetricSpace<T>, MetricError> {
    let text = std::fs::read_to_string(path).map_err(|e| MetricError::Io(e.to_string()))?;
    read_space_json(&text)
}

pub fn save_space_json<T: Scalar>(space: &FiniteMetricSpace<T>, path: impl AsRef<Path>) -> Result<(), MetricError> {
    let text = serde_json::to_string(&space_to_json(space)).map_err(|e| MetricError::Format(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| MetricError::Io(e.to_string()))
}
