use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::metric::FiniteMetricSpace;

/// A face of an axis-aligned box `[0, s_0] x ... x [0, s_k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    /// The face `x_axis = 0`.
    Low(usize),
    /// The face `x_axis = s_axis`.
    High(usize),
}

/// Lattice points of a box with the taxicab metric of its 1-skeleton.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSkeleton {
    pub space: FiniteMetricSpace<f64>,
    pub points: Vec<Vec<f64>>,
    /// Points within `pitch / 2` of a face in the boundary set.
    pub boundary: Vec<bool>,
    pub pitch: f64,
}

/// Lattice of pitch `pitch` in the box with the given sides. Every side must
/// be an integer multiple of the pitch up to rounding.
pub fn lattice_skeleton(sides: &[f64], pitch: f64, faces: &[Face]) -> Result<LatticeSkeleton, GalleryError> {
    if sides.is_empty() || sides.len() > 3 {
        return Err(GalleryError::InvalidFamilyParams(format!("box dimension {} not in 1..=3", sides.len())));
    }
    if !(pitch > 0.0 && pitch.is_finite()) || sides.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(GalleryError::InvalidPitch(format!("pitch {pitch} with sides {sides:?}")));
    }
    let mut counts = Vec::with_capacity(sides.len());
    for &s in sides {
        let t = s / pitch;
        if (t - t.round()).abs() > 1e-9 * t.max(1.0) {
            return Err(GalleryError::InvalidPitch(format!("pitch {pitch} does not divide side {s}")));
        }
        counts.push(t.round() as usize + 1);
    }
    for f in faces {
        let (Face::Low(a) | Face::High(a)) = *f;
        if a >= sides.len() {
            return Err(GalleryError::InvalidFamilyParams(format!("face axis {a} outside the box")));
        }
    }
    let total: usize = counts.iter().product();
    let mut idx: Vec<Vec<usize>> = Vec::with_capacity(total);
    for mut flat in 0..total {
        let mut v = Vec::with_capacity(counts.len());
        for &c in counts.iter().rev() {
            v.push(flat % c);
            flat /= c;
        }
        v.reverse();
        idx.push(v);
    }
    let space = FiniteMetricSpace::from_fn(total, |a, b| {
        let steps: usize = idx[a].iter().zip(&idx[b]).map(|(x, y)| x.abs_diff(*y)).sum();
        steps as f64 * pitch
    });
    let points: Vec<Vec<f64>> = idx.iter().map(|v| v.iter().map(|&k| k as f64 * pitch).collect()).collect();
    let boundary = points
        .iter()
        .map(|p| {
            faces.iter().any(|f| match *f {
                Face::Low(a) => p[a] <= pitch / 2.0,
                Face::High(a) => sides[a] - p[a] <= pitch / 2.0,
            })
        })
        .collect();
    Ok(LatticeSkeleton { space, points, boundary, pitch })
}
