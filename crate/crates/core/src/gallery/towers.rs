use serde::{Deserialize, Serialize};

use super::book::{BookLattice, Page};
use super::GalleryError;
use crate::glued::Tower;
use crate::metric::FiniteMetricSpace;
use crate::sampler::{sample_domain, DomainSpec, SamplePlan};

/// Tower of annular bands `1 + delta < r < 2 - delta` cut from one sample
/// of the annulus `1 < r < 2`, with the restricted metric and inclusion
/// maps. The tolerance is `2 h`.
pub fn annulus_tower(deltas: &[f64], plan: &SamplePlan) -> Result<Tower<f64>, GalleryError> {
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 0.5)) {
        return Err(GalleryError::InvalidFamilyParams("scales must lie in (0, 1/2)".into()));
    }
    let base = sample_domain(&DomainSpec::annulus(1.0, 2.0), plan)?;
    let full = base.dense();
    let levels: Vec<Vec<usize>> = deltas
        .iter()
        .map(|&d| (0..base.len()).filter(|&i| (base.coords()[i][0] - 1.5).abs() < 0.5 - d).collect())
        .collect();
    let spaces: Vec<FiniteMetricSpace<f64>> = levels
        .iter()
        .map(|pts| FiniteMetricSpace::from_fn(pts.len(), |a, b| full.dist(pts[a], pts[b])))
        .collect();
    let maps = levels
        .windows(2)
        .map(|w| {
            let mut pos = vec![usize::MAX; base.len()];
            for (k, &p) in w[1].iter().enumerate() {
                pos[p] = k;
            }
            w[0].iter().map(|&p| pos[p]).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    if maps.iter().flatten().any(|&m| m == usize::MAX) {
        return Err(GalleryError::InvalidFamilyParams("scales must decrease".into()));
    }
    let coords = levels
        .iter()
        .map(|pts| pts.iter().map(|&i| [base.positions()[i][0], base.positions()[i][1]]).collect())
        .collect();
    Ok(Tower::from_maps(deltas.to_vec(), spaces, maps, 2.0 * plan.h)?.with_coords(coords))
}

/// A tower of book lattices, with the lattice of every level.
#[derive(Clone, Debug, PartialEq)]
pub struct BookTower {
    pub tower: Tower<f64>,
    pub lattices: Vec<BookLattice>,
}

fn book_tower(lattices: Vec<BookLattice>, deltas: Vec<f64>, page_map: impl Fn(usize, usize) -> usize) -> Result<BookTower, GalleryError> {
    let spaces = lattices.iter().map(BookLattice::space).collect();
    let mut maps = Vec::new();
    for (l, w) in lattices.windows(2).enumerate() {
        let map = w[0]
            .keys
            .iter()
            .map(|&(p, i, j)| {
                let page = if i == 0 { 0 } else { page_map(l, p) };
                w[1].index_of((page, i, j))
                    .ok_or_else(|| GalleryError::InvalidFamilyParams(format!("level {l} point ({p}, {i}, {j}) has no image")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(map);
    }
    let coords = lattices.iter().map(BookLattice::coords).collect();
    let tower = Tower::from_maps(deltas, spaces, maps, 0.0)?.with_coords(coords);
    Ok(BookTower { tower, lattices })
}

/// Pages `[0, 1] x [0, h]`; at scale `delta` each page keeps
/// `[0, 1] x [0, h - delta]` and pages with `h <= delta` disappear.
pub fn bad_balls_tower(heights: &[f64], deltas: &[f64], pitch: f64) -> Result<BookTower, GalleryError> {
    if heights.is_empty() || heights.windows(2).any(|w| !(w[1] < w[0])) || heights.iter().any(|h| !(*h > 0.0)) {
        return Err(GalleryError::InvalidFamilyParams("heights must be positive and decreasing".into()));
    }
    if deltas.is_empty() || !(deltas[0] < heights[0]) {
        return Err(GalleryError::InvalidFamilyParams("the first scale must keep the tallest page".into()));
    }
    let lattices = deltas
        .iter()
        .map(|&d| {
            let pages = heights.iter().filter(|&&h| h > d).map(|&h| Page { width: 1.0, y_lo: 0.0, y_hi: h - d }).collect();
            BookLattice::new(pages, pitch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    // surviving pages keep their index since heights decrease
    book_tower(lattices, deltas.to_vec(), |_, p| p)
}

/// The untruncated pages `[0, 1] x [0, h]`.
pub fn book_lattice(heights: &[f64], pitch: f64) -> Result<BookLattice, GalleryError> {
    if heights.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(GalleryError::InvalidFamilyParams("heights must be positive".into()));
    }
    BookLattice::new(heights.iter().map(|&h| Page { width: 1.0, y_lo: 0.0, y_hi: h }).collect(), pitch)
}

/// How the interval pages of one level enter the next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageEmbedding {
    /// Intervals become the middle lines of the rectangles they came from.
    Inclusion,
    /// Intervals move onto the interval pages of the next level.
    Shifting,
}

fn lcm_upto(n: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=n).fold(1, |l, k| l / gcd(l, k) * k)
}

/// Page `c` of the `2^(k-1)` copies of `P_k = [0,1] x [-1/(2k), 1/(2k)]`.
fn page_id(k: usize, c: usize) -> usize {
    (1 << (k - 1)) - 1 + c
}

/// Lattice pitch used by [`nonunique_tower`] at the given depth.
pub fn nonunique_pitch(depth: usize) -> f64 {
    1.0 / (4 * lcm_upto(depth.max(1))) as f64
}

/// Levels `i = 1..=depth` at scale `1/(2i)`: the copies of `P_k` for
/// `k <= i`, each shrunk to `[0, 1 - 1/(2i)] x [-(1/(2k) - 1/(2i)), ..]`,
/// so the `P_i` copies are intervals.
pub fn nonunique_tower(depth: usize, embedding: PageEmbedding) -> Result<BookTower, GalleryError> {
    if !(2..=6).contains(&depth) {
        return Err(GalleryError::InvalidFamilyParams("depth must lie in 2..=6".into()));
    }
    let pitch = nonunique_pitch(depth);
    let deltas: Vec<f64> = (1..=depth).map(|i| 1.0 / (2 * i) as f64).collect();
    let lattices = (1..=depth)
        .map(|i| BookLattice::new(nonunique_pages(i), pitch))
        .collect::<Result<Vec<_>, _>>()?;
    let page_map = move |level: usize, p: usize| -> usize {
        let i = level + 1;
        let first_interval = page_id(i, 0);
        match embedding {
            PageEmbedding::Inclusion => p,
            PageEmbedding::Shifting if p >= first_interval => page_id(i + 1, p - first_interval),
            PageEmbedding::Shifting => p,
        }
    };
    book_tower(lattices, deltas, page_map)
}

/// Pages of level `i` of [`nonunique_tower`].
pub fn nonunique_pages(i: usize) -> Vec<Page> {
    let delta = 1.0 / (2 * i) as f64;
    let mut pages = Vec::new();
    for k in 1..=i {
        let half = 1.0 / (2 * k) as f64 - delta;
        for _ in 0..1usize << (k - 1) {
            pages.push(Page { width: 1.0 - delta, y_lo: -half, y_hi: half });
        }
    }
    pages
}

/// Level-0 index of the tracked point `(x, 0)` on the first interval page,
/// `x` rounded to the lattice.
pub fn tracked_point(t: &BookTower, x: f64) -> Option<usize> {
    let lat = &t.lattices[0];
    lat.index_of((0, (x / lat.pitch).round() as i64, 0))
}
