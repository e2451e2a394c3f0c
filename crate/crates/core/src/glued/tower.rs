use serde::{Deserialize, Serialize};

use super::GluedError;
use crate::metric::{diameter, is_isometric_embedding, FiniteMetricSpace};
use crate::scalar::Scalar;

/// Index map from one tower level into a deeper one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingMap {
    pub src_level: usize,
    pub dst_level: usize,
    pub map: Vec<usize>,
    pub max_distortion: f64,
}

impl EmbeddingMap {
    /// Wraps `map` and measures its distortion between `src` and `dst`.
    pub fn measured<T: Scalar>(
        src_level: usize,
        dst_level: usize,
        map: Vec<usize>,
        src: &FiniteMetricSpace<T>,
        dst: &FiniteMetricSpace<T>,
    ) -> Result<Self, GluedError> {
        let r = is_isometric_embedding(src, dst, &map, T::infinity())?;
        Ok(Self { src_level, dst_level, map, max_distortion: r.max_distortion })
    }
}

/// Nested limit spaces at decreasing scales, joined by embeddings between
/// consecutive levels.
#[derive(Clone, Debug, PartialEq)]
pub struct Tower<T: Scalar> {
    pub deltas: Vec<f64>,
    pub spaces: Vec<FiniteMetricSpace<T>>,
    /// `embeddings[i]` maps level `i` into level `i + 1`.
    pub embeddings: Vec<EmbeddingMap>,
    pub tol: f64,
    /// Optional planar coordinates per level, for plot output.
    pub coords: Option<Vec<Vec<[f64; 2]>>>,
}

impl<T: Scalar> Tower<T> {
    /// Builds a tower from raw consecutive maps, measuring each distortion.
    pub fn from_maps(
        deltas: Vec<f64>,
        spaces: Vec<FiniteMetricSpace<T>>,
        maps: Vec<Vec<usize>>,
        tol: f64,
    ) -> Result<Self, GluedError> {
        if maps.len() + 1 != spaces.len() {
            return Err(GluedError::InvalidTower(format!("{} maps for {} levels", maps.len(), spaces.len())));
        }
        let embeddings = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| EmbeddingMap::measured(i, i + 1, m, &spaces[i], &spaces[i + 1]))
            .collect::<Result<_, _>>()?;
        Ok(Self { deltas, spaces, embeddings, tol, coords: None })
    }

    pub fn with_coords(mut self, coords: Vec<Vec<[f64; 2]>>) -> Self {
        self.coords = Some(coords);
        self
    }

    pub fn depth(&self) -> usize {
        self.spaces.len()
    }

    /// Image of point `idx` of level `from` at level `to >= from`.
    pub fn push(&self, from: usize, idx: usize, to: usize) -> usize {
        (from..to).fold(idx, |p, l| self.embeddings[l].map[p])
    }

    /// The composed map from level `from` into level `to >= from`.
    pub fn compose(&self, from: usize, to: usize) -> Result<Vec<usize>, GluedError> {
        if from > to || to >= self.depth() {
            return Err(GluedError::InvalidLevel { level: to.max(from), levels: self.depth() });
        }
        Ok((0..self.spaces[from].len()).map(|p| self.push(from, p, to)).collect())
    }
}

/// One failed tower premise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerViolation {
    Empty,
    LevelCount { spaces: usize, deltas: usize, embeddings: usize },
    NonPositiveDelta { level: usize, delta: f64 },
    DeltaNotDecreasing { level: usize, prev: f64, next: f64 },
    WrongLevels { index: usize, src_level: usize, dst_level: usize },
    MapLength { level: usize, expected: usize, got: usize },
    MapOutOfRange { level: usize, point: usize, target: usize },
    NotInjective { level: usize, a: usize, b: usize },
    /// Pair `(a, b)` of level `level` whose distance moves by `distortion`.
    Distortion { level: usize, a: usize, b: usize, distortion: f64 },
    RecordedDistortion { level: usize, recorded: f64, measured: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerReport {
    pub levels: usize,
    pub worst_distortion: f64,
    pub violations: Vec<TowerViolation>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the scales, map shapes, injectivity and per-map distortion.
///
/// Composed maps are well defined whenever every consecutive map is in
/// range, so no separate composition check is needed.
pub fn validate_tower<T: Scalar>(tower: &Tower<T>) -> TowerReport {
    let n = tower.depth();
    let mut v = Vec::new();
    let mut worst = 0.0f64;
    if n == 0 {
        v.push(TowerViolation::Empty);
        return TowerReport { levels: 0, worst_distortion: 0.0, violations: v };
    }
    if tower.deltas.len() != n || tower.embeddings.len() + 1 != n {
        v.push(TowerViolation::LevelCount { spaces: n, deltas: tower.deltas.len(), embeddings: tower.embeddings.len() });
        return TowerReport { levels: n, worst_distortion: 0.0, violations: v };
    }
    for (level, &d) in tower.deltas.iter().enumerate() {
        if !(d > 0.0 && d.is_finite()) {
            v.push(TowerViolation::NonPositiveDelta { level, delta: d });
        }
        if level > 0 && !(d < tower.deltas[level - 1]) {
            v.push(TowerViolation::DeltaNotDecreasing { level, prev: tower.deltas[level - 1], next: d });
        }
    }
    for (i, e) in tower.embeddings.iter().enumerate() {
        if e.src_level != i || e.dst_level != i + 1 {
            v.push(TowerViolation::WrongLevels { index: i, src_level: e.src_level, dst_level: e.dst_level });
        }
        let (src, dst) = (&tower.spaces[i], &tower.spaces[i + 1]);
        if e.map.len() != src.len() {
            v.push(TowerViolation::MapLength { level: i, expected: src.len(), got: e.map.len() });
            continue;
        }
        if let Some((point, &target)) = e.map.iter().enumerate().find(|(_, &t)| t >= dst.len()) {
            v.push(TowerViolation::MapOutOfRange { level: i, point, target });
            continue;
        }
        let mut first = vec![usize::MAX; dst.len()];
        for (a, &t) in e.map.iter().enumerate() {
            if first[t] != usize::MAX {
                v.push(TowerViolation::NotInjective { level: i, a: first[t], b: a });
                break;
            }
            first[t] = a;
        }
        let r = is_isometric_embedding(src, dst, &e.map, T::infinity()).expect("shape checked above");
        worst = worst.max(r.max_distortion);
        if r.max_distortion > tower.tol {
            let (a, b) = r.worst_pair.unwrap_or((0, 0));
            v.push(TowerViolation::Distortion { level: i, a, b, distortion: r.max_distortion });
        }
        if r.max_distortion > e.max_distortion + tower.tol {
            v.push(TowerViolation::RecordedDistortion { level: i, recorded: e.max_distortion, measured: r.max_distortion });
        }
    }
    TowerReport { levels: n, worst_distortion: worst, violations: v }
}

/// Searches for an injective map `src -> dst` with distortion at most `tol`.
///
/// Depth-first over source points in index order, trying targets in
/// increasing index order and pruning any partial map whose distortion
/// exceeds `tol`, so the first map found is the lexicographically smallest
/// feasible one. `effort` caps the number of partial assignments tried.
pub fn find_isometric_embedding<T: Scalar>(
    src: &FiniteMetricSpace<T>,
    dst: &FiniteMetricSpace<T>,
    tol: f64,
    effort: usize,
) -> Result<EmbeddingMap, GluedError> {
    let (n, m) = (src.len(), dst.len());
    if n > m {
        return Err(GluedError::NoEmbedding(format!("{n} source points but only {m} targets")));
    }
    let t = T::lit(tol);
    let (ds, dd) = (diameter(src), diameter(dst));
    if ds > dd + t {
        return Err(GluedError::NoEmbedding(format!("source diameter {ds} exceeds target diameter {dd}")));
    }
    // a target can only host a source point whose farthest distance fits
    let ecc = |s: &FiniteMetricSpace<T>, i: usize| s.row(i).iter().fold(T::zero(), |a, &b| if b > a { b } else { a });
    let src_ecc: Vec<T> = (0..n).map(|i| ecc(src, i)).collect();
    let dst_ecc: Vec<T> = (0..m).map(|i| ecc(dst, i)).collect();

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; m];
    let mut tried = 0usize;
    let mut exhausted = false;

    fn go<T: Scalar>(
        src: &FiniteMetricSpace<T>,
        dst: &FiniteMetricSpace<T>,
        t: T,
        src_ecc: &[T],
        dst_ecc: &[T],
        map: &mut Vec<usize>,
        used: &mut [bool],
        tried: &mut usize,
        effort: usize,
        exhausted: &mut bool,
    ) -> bool {
        let a = map.len();
        if a == src.len() {
            return true;
        }
        let row = src.row(a);
        for c in 0..dst.len() {
            if used[c] || src_ecc[a] > dst_ecc[c] + t {
                continue;
            }
            if *tried >= effort {
                *exhausted = true;
                return false;
            }
            *tried += 1;
            let drow = dst.row(c);
            if map.iter().enumerate().all(|(b, &fb)| (row[b] - drow[fb]).abs() <= t) {
                map.push(c);
                used[c] = true;
                if go(src, dst, t, src_ecc, dst_ecc, map, used, tried, effort, exhausted) {
                    return true;
                }
                used[c] = false;
                map.pop();
                if *exhausted {
                    return false;
                }
            }
        }
        false
    }

    if go(src, dst, t, &src_ecc, &dst_ecc, &mut map, &mut used, &mut tried, effort, &mut exhausted) {
        let r = is_isometric_embedding(src, dst, &map, T::infinity())?;
        return Ok(EmbeddingMap { src_level: 0, dst_level: 1, map, max_distortion: r.max_distortion });
    }
    if exhausted {
        Err(GluedError::EffortExhausted { tried })
    } else {
        Err(GluedError::NoEmbedding(format!("search space exhausted after {tried} assignments")))
    }
}
