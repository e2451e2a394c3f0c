use serde::{Deserialize, Serialize};

use super::packing::farthest_points;
use super::GhError;
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

const LANDMARKS: usize = 16;
/// Candidates tried for the first landmark image in each direction.
const FIRST_CANDIDATES: usize = 2;
/// Alternatives tried per swap when repairing the worst pair.
const SWAP_CANDIDATES: usize = 12;

/// A relation between two finite spaces that covers both of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
    pub distortion: f64,
}

impl Correspondence {
    /// Builds a correspondence and computes its distortion.
    pub fn new<T: Scalar>(x: &FiniteMetricSpace<T>, y: &FiniteMetricSpace<T>, pairs: Vec<(usize, usize)>) -> Self {
        let distortion = distortion(x, y, &pairs).as_f64();
        Self { pairs, distortion }
    }

    /// Every point of both spaces appears in some pair.
    pub fn is_surjective(&self, n: usize, m: usize) -> bool {
        let mut sx = vec![false; n];
        let mut sy = vec![false; m];
        for &(a, b) in &self.pairs {
            if a >= n || b >= m {
                return false;
            }
            sx[a] = true;
            sy[b] = true;
        }
        sx.into_iter().chain(sy).all(|v| v)
    }

    /// The same relation read from `Y` to `X`.
    pub fn transposed(&self) -> Self {
        Self { pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(), distortion: self.distortion }
    }
}

/// Largest `|d_X(a, a') - d_Y(b, b')|` over pairs of related pairs.
pub fn distortion<T: Scalar>(x: &FiniteMetricSpace<T>, y: &FiniteMetricSpace<T>, pairs: &[(usize, usize)]) -> T {
    let mut worst = T::zero();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let (rx, ry) = (x.row(a), y.row(b));
        for &(a2, b2) in &pairs[k + 1..] {
            let e = (rx[a2] - ry[b2]).abs();
            if e > worst {
                worst = e;
            }
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub value: f64,
    pub correspondence: Correspondence,
    pub restarts: usize,
    pub swaps: usize,
}

/// Nearest neighbours in the L-infinity metric on landmark profiles.
struct ProfileIndex<T> {
    /// Profiles, `dim` values per point.
    prof: Vec<T>,
    dim: usize,
    /// Points sorted by their first coordinate.
    sorted: Vec<usize>,
}

impl<T: Scalar> ProfileIndex<T> {
    fn new(space: &FiniteMetricSpace<T>, landmarks: &[usize]) -> Self {
        let n = space.len();
        let dim = landmarks.len();
        let mut prof = vec![T::zero(); n * dim];
        for (l, &a) in landmarks.iter().enumerate() {
            for (i, &d) in space.row(a).iter().enumerate() {
                prof[i * dim + l] = d;
            }
        }
        let mut sorted: Vec<usize> = (0..n).collect();
        sorted.sort_by(|&i, &j| prof[i * dim].total_cmp(&prof[j * dim]).then(i.cmp(&j)));
        Self { prof, dim, sorted }
    }

    fn profile(&self, i: usize) -> &[T] {
        &self.prof[i * self.dim..(i + 1) * self.dim]
    }

    /// The `k` nearest points to profile `q`, closest first.
    fn nearest(&self, q: &[T], k: usize) -> Vec<(T, usize)> {
        let key = q[0];
        let start = self.sorted.partition_point(|&i| self.prof[i * self.dim] < key);
        let mut best: Vec<(T, usize)> = Vec::with_capacity(k + 1);
        let bound = |best: &Vec<(T, usize)>| if best.len() < k { T::infinity() } else { best[best.len() - 1].0 };
        let consider = |i: usize, best: &mut Vec<(T, usize)>| {
            let p = self.profile(i);
            let lim = bound(best);
            let mut d = T::zero();
            for (a, b) in p.iter().zip(q) {
                d = d.max((*a - *b).abs());
                if d > lim {
                    return;
                }
            }
            let pos = best.partition_point(|e| e.0 < d || (e.0 == d && e.1 < i));
            best.insert(pos, (d, i));
            best.truncate(k);
        };
        let (mut lo, mut hi) = (start, start);
        loop {
            let lim = bound(&best);
            let down = lo > 0 && key - self.prof[self.sorted[lo - 1] * self.dim] <= lim;
            let up = hi < self.sorted.len() && self.prof[self.sorted[hi] * self.dim] - key <= lim;
            if !down && !up {
                break;
            }
            if up {
                consider(self.sorted[hi], &mut best);
                hi += 1;
            }
            if down {
                lo -= 1;
                consider(self.sorted[lo], &mut best);
            }
        }
        best
    }
}

/// Cheap point signature: eccentricity and mean distance.
fn signatures<T: Scalar>(s: &FiniteMetricSpace<T>) -> Vec<(f64, f64)> {
    (0..s.len())
        .map(|i| {
            let row = s.row(i);
            let ecc = row.iter().copied().fold(T::zero(), |a, b| a.max(b)).as_f64();
            let mean = row.iter().map(|v| v.as_f64()).sum::<f64>() / row.len() as f64;
            (ecc, mean)
        })
        .collect()
}

struct Search<'a, T> {
    a: &'a FiniteMetricSpace<T>,
    b: &'a FiniteMetricSpace<T>,
}

impl<'a, T: Scalar> Search<'a, T> {
    /// Landmarks in `a` by farthest points, images in `b` by greedy
    /// profile matching from a given first image.
    fn landmark_images(&self, la: &[usize], b0: usize) -> Vec<usize> {
        let mut lb = vec![b0];
        for k in 1..la.len() {
            let mut best = (T::infinity(), 0);
            for y in 0..self.b.len() {
                let ry = self.b.row(y);
                let mut e = T::zero();
                for l in 0..k {
                    e = e.max((self.a.dist(la[k], la[l]) - ry[lb[l]]).abs());
                    if e >= best.0 {
                        break;
                    }
                }
                if e < best.0 {
                    best = (e, y);
                }
            }
            lb.push(best.1);
        }
        lb
    }

    /// Relation from nearest-profile maps in both directions. Pairs are
    /// `(a, b)`; the first `|a|` entries are the forward map.
    fn assign(&self, la: &[usize], lb: &[usize]) -> (Vec<(usize, usize)>, ProfileIndex<T>, ProfileIndex<T>) {
        let ia = ProfileIndex::new(self.a, la);
        let ib = ProfileIndex::new(self.b, lb);
        let mut pairs = Vec::with_capacity(self.a.len() + self.b.len());
        for x in 0..self.a.len() {
            pairs.push((x, ib.nearest(ia.profile(x), 1)[0].1));
        }
        let mut hit = vec![false; self.b.len()];
        for &(_, y) in &pairs {
            hit[y] = true;
        }
        for y in 0..self.b.len() {
            if !hit[y] {
                pairs.push((ia.nearest(ib.profile(y), 1)[0].1, y));
            }
        }
        (pairs, ia, ib)
    }

    fn row_error(&self, pairs: &[(usize, usize)], p: (usize, usize)) -> (T, usize) {
        let (ra, rb) = (self.a.row(p.0), self.b.row(p.1));
        let mut worst = (T::zero(), 0);
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            let e = (ra[a2] - rb[b2]).abs();
            if e > worst.0 {
                worst = (e, j);
            }
        }
        worst
    }

    /// Repairs the worst pairs by moving one endpoint to a nearby profile
    /// match. Moves never uncover a point. Returns the number of accepted
    /// swaps.
    fn improve(&self, pairs: &mut [(usize, usize)], ia: &ProfileIndex<T>, ib: &ProfileIndex<T>, budget: usize) -> usize {
        if budget == 0 || pairs.len() < 2 {
            return 0;
        }
        let mut cover_a = vec![0u32; self.a.len()];
        let mut cover_b = vec![0u32; self.b.len()];
        for &(a, b) in pairs.iter() {
            cover_a[a] += 1;
            cover_b[b] += 1;
        }
        let mut rowmax: Vec<T> = (0..pairs.len()).map(|k| self.row_error(pairs, pairs[k]).0).collect();
        let mut accepted = 0;
        let mut spent = 0;
        let mut stuck = vec![false; pairs.len()];
        while spent < budget {
            let Some(k) = (0..pairs.len()).filter(|&k| !stuck[k]).max_by(|&i, &j| rowmax[i].total_cmp(&rowmax[j]).then(j.cmp(&i)))
            else {
                break;
            };
            let (cur, _) = self.row_error(pairs, pairs[k]);
            if cur < rowmax[k] {
                // stale after an earlier swap
                rowmax[k] = cur;
                continue;
            }
            spent += 1;
            let (a, b) = pairs[k];
            let mut options = Vec::new();
            if cover_a[a] > 1 {
                for (_, a2) in ia.nearest(ib.profile(b), SWAP_CANDIDATES) {
                    options.push((a2, b));
                }
            }
            if cover_b[b] > 1 {
                for (_, b2) in ib.nearest(ia.profile(a), SWAP_CANDIDATES) {
                    options.push((a, b2));
                }
            }
            let mut best = (cur, pairs[k]);
            for p in options {
                if p == pairs[k] {
                    continue;
                }
                let e = self.row_error(pairs, p).0;
                if e < best.0 {
                    best = (e, p);
                }
            }
            if best.1 == pairs[k] {
                stuck[k] = true;
                continue;
            }
            cover_a[a] -= 1;
            cover_b[b] -= 1;
            pairs[k] = best.1;
            cover_a[best.1 .0] += 1;
            cover_b[best.1 .1] += 1;
            rowmax[k] = best.0;
            let (ra, rb) = (self.a.row(best.1 .0), self.b.row(best.1 .1));
            for (j, &(a2, b2)) in pairs.iter().enumerate() {
                let e = (ra[a2] - rb[b2]).abs();
                if e > rowmax[j] {
                    rowmax[j] = e;
                }
                stuck[j] = false;
            }
            accepted += 1;
        }
        accepted
    }
}

/// Heuristic correspondence search. The returned value is half the
/// distortion of an explicit correspondence, so it is always at least the
/// Gromov-Hausdorff distance. `effort` is the swap budget per restart.
pub fn gh_upper_bound<T: Scalar>(
    x: &FiniteMetricSpace<T>,
    y: &FiniteMetricSpace<T>,
    effort: usize,
) -> Result<UpperBound, GhError> {
    if x.is_empty() || y.is_empty() {
        return Err(GhError::EmptySpace);
    }
    if x.as_flat() == y.as_flat() {
        let pairs = (0..x.len()).map(|i| (i, i)).collect();
        return Ok(UpperBound { value: 0.0, correspondence: Correspondence { pairs, distortion: 0.0 }, restarts: 0, swaps: 0 });
    }
    let mut best: Option<(T, Vec<(usize, usize)>)> = None;
    let mut restarts = 0;
    let mut swaps = 0;
    for flip in [false, true] {
        let (a, b) = if flip { (y, x) } else { (x, y) };
        let search = Search { a, b };
        let la = farthest_points(a, 0, T::zero(), LANDMARKS).order;
        let sa = signatures(a)[la[0]];
        let sb = signatures(b);
        let mut firsts: Vec<usize> = (0..b.len()).collect();
        firsts.sort_by(|&i, &j| {
            let di = (sb[i].0 - sa.0).abs() + (sb[i].1 - sa.1).abs();
            let dj = (sb[j].0 - sa.0).abs() + (sb[j].1 - sa.1).abs();
            di.total_cmp(&dj).then(i.cmp(&j))
        });
        let tries = if b.len() <= 8 { b.len() } else { FIRST_CANDIDATES };
        for &b0 in &firsts[..tries] {
            restarts += 1;
            let lb = search.landmark_images(&la, b0);
            let (mut pairs, ia, ib) = search.assign(&la, &lb);
            swaps += search.improve(&mut pairs, &ia, &ib, effort);
            let d = distortion(a, b, &pairs);
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                let oriented = if flip { pairs.iter().map(|&(p, q)| (q, p)).collect() } else { pairs };
                best = Some((d, oriented));
            }
        }
    }
    let (d, pairs) = best.expect("at least one restart");
    let mut pairs = pairs;
    pairs.sort_unstable();
    pairs.dedup();
    let distortion = d.as_f64();
    Ok(UpperBound { value: distortion / 2.0, correspondence: Correspondence { pairs, distortion }, restarts, swaps })
}
