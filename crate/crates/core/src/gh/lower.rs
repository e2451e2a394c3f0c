use serde::{Deserialize, Serialize};

use super::packing::farthest_points;
use super::GhError;
use crate::metric::{diameter, MetricView};
use crate::scalar::{fmax, Scalar};

/// Largest space for which N-point separations are computed exactly.
const EXACT_SEPARATION_MAX: usize = 12;
/// Number of farthest-point radii used for larger spaces.
const FPS_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerMethod {
    Trivial,
    DiameterGap,
    Separation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub method: LowerMethod,
    /// Point count `N` of the separation witness, if that term won.
    pub witness_n: Option<usize>,
}

/// Bounds on `sep_N`, the largest possible minimum pairwise distance among
/// `N` distinct points. Index `N - 2` holds the value for `N` points.
struct Separations {
    /// Lower bounds (attained by an explicit `N`-point set).
    lower: Vec<f64>,
    /// Upper bounds (any `N` points have two within this distance).
    upper: Vec<f64>,
}

fn exact_separations<T: Scalar, V: MetricView<T> + ?Sized>(x: &V) -> Separations {
    let n = x.len();
    let d: Vec<Vec<f64>> = (0..n).map(|i| x.row(i).iter().map(|v| v.as_f64()).collect()).collect();
    let mut sep = vec![f64::INFINITY; 1 << n];
    let mut best = vec![0.0f64; n + 1];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut s = sep[rest];
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            s = s.min(d[low][j]);
            r &= r - 1;
        }
        sep[mask] = s;
        let k = mask.count_ones() as usize;
        if k >= 2 {
            best[k] = best[k].max(s);
        }
    }
    let v = best[2..].to_vec();
    Separations { lower: v.clone(), upper: v }
}

fn fps_separations<T: Scalar, V: MetricView<T> + ?Sized>(x: &V, diam: f64) -> Separations {
    let fp = farthest_points(x, 0, T::zero(), FPS_DEPTH + 1);
    let k = fp.order.len();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for nn in 2..=k {
        // the first N farthest points are rho_{N-1} apart; the first N - 1
        // cover within rho_{N-1}, so two of any N points share a ball
        let rho = fp.radii[nn - 1].as_f64();
        lower.push(rho);
        upper.push((2.0 * rho).min(diam));
    }
    if k < x.len() {
        // beyond the computed depth only the last cover radius is known
        let cover = fp.reach.iter().copied().fold(T::zero(), fmax).as_f64();
        upper.push((2.0 * cover).min(diam));
    }
    if let Some(u) = upper.first_mut() {
        *u = diam;
    }
    if let Some(l) = lower.first_mut() {
        *l = diam;
    }
    Separations { lower, upper }
}

fn separations<T: Scalar, V: MetricView<T> + ?Sized>(x: &V, diam: f64) -> Separations {
    if x.len() <= EXACT_SEPARATION_MAX {
        exact_separations(x)
    } else {
        fps_separations(x, diam)
    }
}

/// Upper bound on `sep_N` for every `N >= 2`; zero once `N` exceeds the
/// number of points.
fn upper_at(s: &Separations, n_points: usize, nn: usize) -> f64 {
    if nn > n_points {
        return 0.0;
    }
    let i = nn - 2;
    if i < s.upper.len() {
        s.upper[i]
    } else {
        *s.upper.last().unwrap_or(&0.0)
    }
}

fn one_side(sx: &Separations, sy: &Separations, ny: usize) -> (f64, usize) {
    // a correspondence of distortion D sends N points at separation r to N
    // points at separation r - D, so D >= sep_N(X) - sep_N(Y)
    let mut best = (0.0, 0);
    for (i, &r) in sx.lower.iter().enumerate() {
        let nn = i + 2;
        let v = (r - upper_at(sy, ny, nn)) / 2.0;
        if v > best.0 {
            best = (v, nn);
        }
    }
    best
}

/// A certified lower bound on the Gromov-Hausdorff distance.
///
/// The maximum of half the diameter gap and the separation obstruction
/// `max_N (sep_N(X) - sep_N(Y)) / 2` in both directions, with `sep_N`
/// bounded below by farthest-point insertion and above by the covering
/// radius of the first `N - 1` farthest points.
pub fn gh_lower_bound<T, V, W>(x: &V, y: &W) -> Result<LowerBound, GhError>
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
    W: MetricView<T> + ?Sized,
{
    if x.len() == 0 || y.len() == 0 {
        return Err(GhError::EmptySpace);
    }
    let dx = diameter(x).as_f64();
    let dy = diameter(y).as_f64();
    let mut out = LowerBound { value: (dx - dy).abs() / 2.0, method: LowerMethod::DiameterGap, witness_n: None };
    if out.value == 0.0 {
        out.method = LowerMethod::Trivial;
    }
    let sx = separations(x, dx);
    let sy = separations(y, dy);
    for (a, b, nb) in [(&sx, &sy, y.len()), (&sy, &sx, x.len())] {
        let (v, nn) = one_side(a, b, nb);
        if v > out.value {
            out = LowerBound { value: v, method: LowerMethod::Separation, witness_n: Some(nn) };
        }
    }
    Ok(out)
}

/// The separation term alone, for soundness checks.
pub fn separation_obstruction<T, V, W>(x: &V, y: &W) -> f64
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
    W: MetricView<T> + ?Sized,
{
    let sx = separations(x, diameter(x).as_f64());
    let sy = separations(y, diameter(y).as_f64());
    one_side(&sx, &sy, y.len()).0.max(one_side(&sy, &sx, x.len()).0)
}
