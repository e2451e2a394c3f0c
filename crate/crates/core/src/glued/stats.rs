use serde::{Deserialize, Serialize};

use super::GluedError;
use crate::metric::MetricView;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub exponent: f64,
    pub radii: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Least-squares slope of `log |B(point, r)|` against `log r`.
pub fn ball_growth_exponent<T: Scalar, V: MetricView<T> + ?Sized>(
    space: &V,
    point: usize,
    r_grid: &[f64],
) -> Result<GrowthFit, GluedError> {
    if point >= space.len() {
        return Err(GluedError::DegenerateGrid(format!("point {point} out of range")));
    }
    if r_grid.len() < 2 || r_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(GluedError::DegenerateGrid("need at least two positive radii".into()));
    }
    let row = space.row(point);
    let counts: Vec<usize> =
        r_grid.iter().map(|&r| row.iter().filter(|&&d| d.as_f64() <= r).count()).collect();
    let xs: Vec<f64> = r_grid.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-24 {
        return Err(GluedError::DegenerateGrid("radii are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(GrowthFit { exponent: sxy / sxx, radii: r_grid.to_vec(), counts })
}

/// Images of the `j`-th space of a sequence at one scale, as ambient indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSubsets {
    pub delta: f64,
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerUnion {
    /// Ambient indices of the union, increasing.
    pub points: Vec<usize>,
    /// Per scale, the ambient indices kept at that scale.
    pub per_delta: Vec<(f64, Vec<usize>)>,
    pub tail_start: usize,
}

/// Points of the ambient space within `tol` of every subset from index
/// `tail_start` on (default: the second half), united over the scales.
pub fn inner_union_estimate<T: Scalar, V: MetricView<T> + ?Sized>(
    ambient: &V,
    scales: &[ScaleSubsets],
    tol: f64,
    tail_start: Option<usize>,
) -> Result<InnerUnion, GluedError> {
    let n = ambient.len();
    let bad = |m: String| Err(GluedError::InconsistentAmbient(m));
    if scales.is_empty() {
        return bad("no scales given".into());
    }
    let count = scales[0].subsets.len();
    if count == 0 {
        return bad("no subsets given".into());
    }
    for s in scales {
        if s.subsets.len() != count {
            return bad(format!("scale {} has {} subsets, expected {count}", s.delta, s.subsets.len()));
        }
        if let Some(&i) = s.subsets.iter().flatten().find(|&&i| i >= n) {
            return bad(format!("index {i} outside an ambient space of {n} points"));
        }
    }
    let start = tail_start.unwrap_or(count / 2);
    if start >= count {
        return bad(format!("tail start {start} leaves no subsets out of {count}"));
    }
    let t = T::lit(tol);
    let mut union = vec![false; n];
    let mut per_delta = Vec::with_capacity(scales.len());
    for s in scales {
        let mut keep = vec![true; n];
        for subset in &s.subsets[start..] {
            let mut near = vec![false; n];
            for &m in subset {
                let row = ambient.row(m);
                for (x, d) in row.iter().enumerate() {
                    near[x] |= *d <= t;
                }
            }
            for x in 0..n {
                keep[x] &= near[x];
            }
        }
        let pts: Vec<usize> = (0..n).filter(|&x| keep[x]).collect();
        for &x in &pts {
            union[x] = true;
        }
        per_delta.push((s.delta, pts));
    }
    Ok(InnerUnion { points: (0..n).filter(|&x| union[x]).collect(), per_delta, tail_start: start })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;

    #[test]
    fn segment_grows_linearly() {
        let xs: Vec<f64> = (0..2001).map(|i| i as f64 * 0.001).collect();
        let s = FiniteMetricSpace::from_line(&xs);
        let fit = ball_growth_exponent(&s, 1000, &[0.02, 0.05, 0.1, 0.2]).unwrap();
        assert!((0.8..=1.2).contains(&fit.exponent), "{}", fit.exponent);
    }

    #[test]
    fn degenerate_grids_are_rejected() {
        let s = FiniteMetricSpace::from_line(&[0.0, 1.0]);
        assert!(matches!(ball_growth_exponent(&s, 0, &[0.5]), Err(GluedError::DegenerateGrid(_))));
        assert!(matches!(ball_growth_exponent(&s, 0, &[0.5, 0.5]), Err(GluedError::DegenerateGrid(_))));
        assert!(matches!(ball_growth_exponent(&s, 0, &[-1.0, 0.5]), Err(GluedError::DegenerateGrid(_))));
    }

    #[test]
    fn constant_sequence_returns_the_set() {
        let s = FiniteMetricSpace::from_line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let a = vec![1, 2];
        let scales = [ScaleSubsets { delta: 0.1, subsets: vec![a.clone(); 4] }];
        let u = inner_union_estimate(&s, &scales, 0.0, None).unwrap();
        assert_eq!(u.points, a);
        assert_eq!(u.tail_start, 2);
    }

    #[test]
    fn union_over_scales_and_tail() {
        let s = FiniteMetricSpace::from_line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let scales = [
            ScaleSubsets { delta: 0.2, subsets: vec![vec![0, 1, 2, 3], vec![1], vec![1]] },
            ScaleSubsets { delta: 0.1, subsets: vec![vec![4], vec![1, 3], vec![3, 4]] },
        ];
        let u = inner_union_estimate(&s, &scales, 0.0, Some(1)).unwrap();
        assert_eq!(u.per_delta[0].1, vec![1]);
        assert_eq!(u.per_delta[1].1, vec![3]);
        assert_eq!(u.points, vec![1, 3]);
        // a tolerance of one step thickens each subset
        let u = inner_union_estimate(&s, &scales, 1.0, Some(1)).unwrap();
        assert_eq!(u.points, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn inconsistent_inputs_are_rejected() {
        let s = FiniteMetricSpace::from_line(&[0.0, 1.0]);
        let out_of_range = [ScaleSubsets { delta: 0.1, subsets: vec![vec![5]] }];
        let ragged = [
            ScaleSubsets { delta: 0.2, subsets: vec![vec![0]] },
            ScaleSubsets { delta: 0.1, subsets: vec![vec![0], vec![1]] },
        ];
        for bad in [&out_of_range[..], &ragged[..], &[]] {
            assert!(matches!(inner_union_estimate(&s, bad, 0.0, None), Err(GluedError::InconsistentAmbient(_))));
        }
    }
}
