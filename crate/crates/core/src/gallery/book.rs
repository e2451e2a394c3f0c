use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::metric::FiniteMetricSpace;

/// A point `(x, y)` on page `page` of a book.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BookPoint {
    pub page: usize,
    pub x: f64,
    pub y: f64,
}

impl BookPoint {
    pub fn new(page: usize, x: f64, y: f64) -> Self {
        Self { page, x, y }
    }
}

/// Taxicab distance in a book of pages `[0, 1] x [0, h]` glued along
/// `x = 0`: across pages the path crosses the spine at the best height in
/// the common range `[0, min(h_a, h_b)]`.
pub fn book_distance(heights: &[f64], a: BookPoint, b: BookPoint) -> Result<f64, GalleryError> {
    let pages: Vec<Page> = heights.iter().map(|&h| Page { width: 1.0, y_lo: 0.0, y_hi: h }).collect();
    page_distance(&pages, a, b)
}

/// A rectangular page `[0, width] x [y_lo, y_hi]` with its spine on `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Page {
    pub width: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Page {
    fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width).contains(&x) && (self.y_lo..=self.y_hi).contains(&y)
    }
}

fn page_distance(pages: &[Page], a: BookPoint, b: BookPoint) -> Result<f64, GalleryError> {
    for p in [a, b] {
        match pages.get(p.page) {
            Some(pg) if pg.contains(p.x, p.y) => {}
            _ => return Err(GalleryError::OutOfPage { page: p.page, x: p.x, y: p.y }),
        }
    }
    if a.page == b.page {
        return Ok((a.x - b.x).abs() + (a.y - b.y).abs());
    }
    let (pa, pb) = (pages[a.page], pages[b.page]);
    let (lo, hi) = (pa.y_lo.max(pb.y_lo), pa.y_hi.min(pb.y_hi));
    if lo > hi {
        return Err(GalleryError::InvalidFamilyParams(format!("pages {} and {} share no spine", a.page, b.page)));
    }
    // the crossing cost is convex in the height: project the segment
    // between the two heights onto the shared range
    let c = a.y.min(b.y).max(lo).min(hi);
    Ok(a.x + b.x + (a.y - c).abs() + (c - b.y).abs())
}

/// Lattice points of a book, with spine points shared by all pages.
#[derive(Clone, Debug, PartialEq)]
pub struct BookLattice {
    pub pitch: f64,
    pub pages: Vec<Page>,
    /// `(page, i, j)` for the point `(i * pitch, j * pitch)`; spine points
    /// (`i = 0`) are listed once, under page 0.
    pub keys: Vec<(usize, i64, i64)>,
    index: HashMap<(usize, i64, i64), usize>,
}

fn steps(v: f64, pitch: f64, up: bool) -> i64 {
    let t = v / pitch;
    let r = t.round();
    if (t - r).abs() < 1e-9 {
        r as i64
    } else if up {
        t.ceil() as i64
    } else {
        t.floor() as i64
    }
}

impl BookLattice {
    /// All lattice points of the given pages. Every page range must contain
    /// height 0 so the spine is connected.
    pub fn new(pages: Vec<Page>, pitch: f64) -> Result<Self, GalleryError> {
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(GalleryError::InvalidPitch(format!("pitch {pitch}")));
        }
        if pages.iter().any(|p| !(p.width >= 0.0 && p.y_lo <= 0.0 && p.y_hi >= 0.0)) {
            return Err(GalleryError::InvalidFamilyParams("every page needs width >= 0 and 0 in its height range".into()));
        }
        let mut keys = Vec::new();
        let mut spine = BTreeSet::new();
        for p in &pages {
            for j in steps(p.y_lo, pitch, true)..=steps(p.y_hi, pitch, false) {
                spine.insert(j);
            }
        }
        keys.extend(spine.into_iter().map(|j| (0, 0, j)));
        for (k, p) in pages.iter().enumerate() {
            for i in 1..=steps(p.width, pitch, false) {
                for j in steps(p.y_lo, pitch, true)..=steps(p.y_hi, pitch, false) {
                    keys.push((k, i, j));
                }
            }
        }
        let index = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        Ok(Self { pitch, pages, keys, index })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, key: (usize, i64, i64)) -> Option<usize> {
        let key = if key.1 == 0 { (0, 0, key.2) } else { key };
        self.index.get(&key).copied()
    }

    pub fn point(&self, idx: usize) -> BookPoint {
        let (p, i, j) = self.keys[idx];
        BookPoint::new(p, i as f64 * self.pitch, j as f64 * self.pitch)
    }

    /// Exact taxicab book metric. Distances are integer step counts times
    /// the pitch, so equal configurations give bit-identical values.
    pub fn space(&self) -> FiniteMetricSpace<f64> {
        let k = &self.keys;
        FiniteMetricSpace::from_fn(k.len(), |a, b| {
            let (pa, ia, ja) = k[a];
            let (pb, ib, jb) = k[b];
            // spine points sit on every page, so within-page rules apply
            let sx = if pa == pb || ia == 0 || ib == 0 { (ia - ib).abs() } else { ia + ib };
            (sx + (ja - jb).abs()) as f64 * self.pitch
        })
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.keys.iter().map(|&(_, i, j)| [i as f64 * self.pitch, j as f64 * self.pitch]).collect()
    }

    pub fn pages_of_points(&self) -> Vec<usize> {
        self.keys.iter().map(|k| k.0).collect()
    }
}
