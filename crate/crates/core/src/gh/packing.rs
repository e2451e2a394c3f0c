use serde::{Deserialize, Serialize};

use crate::metric::MetricView;
use crate::scalar::{fmin, Scalar};

/// Farthest-point insertion order with insertion radii.
///
/// `radii[k]` is the distance from `order[k]` to the earlier points when it
/// was inserted (`+inf` for the seed). Radii never increase, so the prefix
/// with `radii >= eps` is a maximal `eps`-separated set.
#[derive(Clone, Debug, PartialEq)]
pub struct FarthestPoints<T> {
    pub order: Vec<usize>,
    pub radii: Vec<T>,
    /// Distance from every point to the selected set when the run stopped.
    pub reach: Vec<T>,
}

impl<T: Scalar> FarthestPoints<T> {
    /// Number of points in the greedy packing at separation `eps`.
    pub fn count_at(&self, eps: T) -> usize {
        self.radii.partition_point(|&r| r >= eps)
    }
}

/// Runs farthest-point insertion from `seed` until the next insertion radius
/// drops below `stop_below`, or `max_points` are chosen.
pub fn farthest_points<T, V>(space: &V, seed: usize, stop_below: T, max_points: usize) -> FarthestPoints<T>
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
{
    let n = space.len();
    let mut order = Vec::new();
    let mut radii = Vec::new();
    let mut reach = vec![T::infinity(); n];
    if n == 0 || max_points == 0 {
        return FarthestPoints { order, radii, reach };
    }
    let mut next = seed.min(n - 1);
    let mut r = T::infinity();
    loop {
        order.push(next);
        radii.push(r);
        let row = space.row(next);
        for (m, &d) in reach.iter_mut().zip(row.iter()) {
            *m = fmin(*m, d);
        }
        reach[next] = T::zero();
        if order.len() >= max_points {
            break;
        }
        // farthest remaining point, lowest index on ties
        let mut best = None;
        for (i, &d) in reach.iter().enumerate() {
            if d > T::zero() && best.map_or(true, |(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, d)) if d >= stop_below => {
                next = i;
                r = d;
            }
            _ => break,
        }
    }
    FarthestPoints { order, radii, reach }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    /// Separation: centers are pairwise at least this far apart.
    pub epsilon: f64,
    pub centers: Vec<usize>,
    pub count: usize,
}

/// Maximal `eps`-separated set by farthest-point insertion from `seed_index`.
pub fn greedy_packing<T, V>(space: &V, eps: T, seed_index: usize) -> PackingReport
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
{
    let fp = farthest_points(space, seed_index, eps, usize::MAX);
    let count = fp.count_at(eps);
    PackingReport { epsilon: eps.as_f64(), centers: fp.order[..count].to_vec(), count }
}

/// Greedy packing counts for a whole grid of separations from one run.
pub fn packing_curve<T, V>(space: &V, eps_grid: &[T], seed_index: usize) -> Vec<PackingReport>
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
{
    let smallest = eps_grid.iter().copied().fold(T::infinity(), fmin);
    let fp = farthest_points(space, seed_index, smallest, usize::MAX);
    eps_grid
        .iter()
        .map(|&e| {
            let count = fp.count_at(e);
            PackingReport { epsilon: e.as_f64(), centers: fp.order[..count].to_vec(), count }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub epsilon: f64,
    pub centers: Vec<usize>,
    pub count: usize,
    /// Largest distance from a point to its nearest center.
    pub cover_radius: f64,
    /// Every point lies within `epsilon` of a center.
    pub verified: bool,
}

/// Cover by closed `eps`-balls centered on the greedy packing at
/// separation `eps` (radius-`eps/2` balls about these centers are disjoint).
pub fn covering_from_packing<T, V>(space: &V, eps: T) -> CoveringReport
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
{
    let fp = farthest_points(space, 0, eps, usize::MAX);
    let count = fp.count_at(eps);
    let cover = fp.reach.iter().copied().fold(T::zero(), crate::scalar::fmax);
    CoveringReport {
        epsilon: eps.as_f64(),
        centers: fp.order[..count].to_vec(),
        count,
        cover_radius: cover.as_f64(),
        verified: fp.order.len() == count && cover <= eps,
    }
}
