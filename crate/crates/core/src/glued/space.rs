use serde::{Deserialize, Serialize};

use super::tower::{validate_tower, Tower};
use super::GluedError;
use crate::metric::{is_isometric_embedding, FiniteMetricSpace, IsometryReport};
use crate::scalar::Scalar;

/// A point of level `level + 1` that lay within the tower tolerance of an
/// image point and was identified with it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergedPoint {
    pub level: usize,
    pub index: usize,
    pub glued: usize,
    pub distance: f64,
}

/// Disjoint union of the tower strata with the push-forward metric.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedSpace<T: Scalar> {
    pub tower: Tower<T>,
    pub metric: FiniteMetricSpace<T>,
    /// `(level, index)` of the point that created each glued point.
    pub origin: Vec<(usize, usize)>,
    /// Glued indices created at each level.
    pub strata: Vec<Vec<usize>>,
    /// `f_maps[i][p]`: glued index of point `p` of level `i`.
    pub f_maps: Vec<Vec<usize>>,
    pub merged: Vec<MergedPoint>,
    /// Smallest distance between glued points of different strata.
    pub min_cross_stratum: f64,
}

impl<T: Scalar> GluedSpace<T> {
    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    pub fn stratum_of(&self, g: usize) -> usize {
        self.origin[g].0
    }

    /// Glued points as `stratum` labels, in index order.
    pub fn labels(&self) -> Vec<String> {
        self.origin.iter().map(|&(l, i)| format!("s{l}:{i}")).collect()
    }

    /// Planar coordinates of every glued point, when the tower carries them.
    pub fn coords(&self) -> Option<Vec<[f64; 2]>> {
        let c = self.tower.coords.as_ref()?;
        Some(self.origin.iter().map(|&(l, i)| c[l][i]).collect())
    }
}

/// Glues a valid tower: level 0 plus, per level, the points outside the
/// image of the previous level. Two glued points are compared at the deeper
/// of their levels after pushing the shallower one forward.
pub fn build_glued<T: Scalar>(tower: &Tower<T>) -> Result<GluedSpace<T>, GluedError> {
    let report = validate_tower(tower);
    if !report.passed() {
        return Err(GluedError::InvalidTower(format!("{:?}", report.violations)));
    }
    let depth = tower.depth();
    // near-duplicates are judged against the measured embedding noise, so
    // exact towers keep every distinct point
    let radius = T::lit(report.worst_distortion.min(tower.tol));
    let mut origin: Vec<(usize, usize)> = (0..tower.spaces[0].len()).map(|p| (0, p)).collect();
    let mut strata = vec![(0..origin.len()).collect::<Vec<_>>()];
    let mut f_maps = vec![(0..origin.len()).collect::<Vec<_>>()];
    let mut merged = Vec::new();
    for l in 1..depth {
        let prev = &tower.embeddings[l - 1].map;
        let space = &tower.spaces[l];
        let mut f = vec![usize::MAX; space.len()];
        for (q, &img) in prev.iter().enumerate() {
            f[img] = f_maps[l - 1][q];
        }
        let mut stratum = Vec::new();
        for p in 0..space.len() {
            if f[p] != usize::MAX {
                continue;
            }
            let row = space.row(p);
            let near = prev
                .iter()
                .map(|&img| (img, row[img]))
                .filter(|&(_, d)| d <= radius)
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            match near {
                Some((img, d)) => {
                    f[p] = f[img];
                    merged.push(MergedPoint { level: l, index: p, glued: f[img], distance: d.as_f64() });
                }
                None => {
                    f[p] = origin.len();
                    stratum.push(origin.len());
                    origin.push((l, p));
                }
            }
        }
        strata.push(stratum);
        f_maps.push(f);
    }
    // image of every glued point at each level from its own onward
    let n = origin.len();
    let pushed: Vec<Vec<usize>> = origin
        .iter()
        .map(|&(l, p)| {
            let mut out = vec![usize::MAX; depth];
            out[l] = p;
            for k in l + 1..depth {
                out[k] = tower.embeddings[k - 1].map[out[k - 1]];
            }
            out
        })
        .collect();
    let mut min_cross = f64::INFINITY;
    let mut d = vec![T::zero(); n * n];
    for a in 0..n {
        for b in a + 1..n {
            let level = origin[a].0.max(origin[b].0);
            let v = tower.spaces[level].dist(pushed[a][level], pushed[b][level]);
            d[a * n + b] = v;
            d[b * n + a] = v;
            if origin[a].0 != origin[b].0 {
                min_cross = min_cross.min(v.as_f64());
            }
        }
    }
    // symmetric with zero diagonal by construction; the triangle inequality
    // is inherited from the levels and left to `validate_metric`
    let metric = FiniteMetricSpace::from_flat_unchecked(n, d);
    let labels: Vec<String> = origin.iter().map(|&(l, i)| format!("s{l}:{i}")).collect();
    let metric = metric.with_labels(labels)?;
    Ok(GluedSpace { tower: tower.clone(), metric, origin, strata, f_maps, merged, min_cross_stratum: min_cross })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumReport {
    pub level: usize,
    pub isometry: IsometryReport,
    /// `F_level` image contained in the next level's image.
    pub nested: bool,
    /// `F_i = F_level . phi` for every shallower level `i`.
    pub coherent: bool,
}

impl StratumReport {
    pub fn passed(&self) -> bool {
        self.isometry.passes && self.nested && self.coherent
    }
}

/// Checks that `F_level` is an isometric embedding within the tower
/// tolerance, nested in the next level's image and coherent with the
/// shallower maps.
pub fn embed_stratum<T: Scalar>(glued: &GluedSpace<T>, level: usize) -> Result<StratumReport, GluedError> {
    let depth = glued.tower.depth();
    if level >= depth {
        return Err(GluedError::InvalidLevel { level, levels: depth });
    }
    let f = &glued.f_maps[level];
    let mut isometry = is_isometric_embedding(&glued.tower.spaces[level], &glued.metric, f, T::lit(glued.tower.tol))?;
    // merged points share a glued index, which is intended
    if !glued.merged.is_empty() && isometry.max_distortion <= glued.tower.tol {
        isometry.injective = true;
        isometry.passes = true;
    }
    let nested = level + 1 >= depth || {
        let mut next = vec![false; glued.len()];
        for &g in &glued.f_maps[level + 1] {
            next[g] = true;
        }
        f.iter().all(|&g| next[g])
    };
    let coherent = (0..level).all(|i| {
        let phi = glued.tower.compose(i, level).expect("levels checked");
        glued.f_maps[i].iter().zip(&phi).all(|(&g, &p)| f[p] == g)
    });
    Ok(StratumReport { level, isometry, nested, coherent })
}

/// A closed ball of the glued space intersected with one level's image.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedBall<T: Scalar> {
    pub center: usize,
    pub radius: f64,
    /// Glued indices, increasing.
    pub members: Vec<usize>,
    pub metric: FiniteMetricSpace<T>,
}

/// `B(F_i(y), eps) ∩ F_j(Y_j)` for `j > i`, allowed while
/// `eps < delta_i - delta_j`.
pub fn glued_ball<T: Scalar>(
    glued: &GluedSpace<T>,
    at: (usize, usize),
    eps: f64,
    level: usize,
) -> Result<GluedBall<T>, GluedError> {
    let depth = glued.tower.depth();
    let (i, y) = at;
    if i >= depth || level >= depth || level <= i {
        return Err(GluedError::InvalidLevel { level: level.max(i), levels: depth });
    }
    if y >= glued.f_maps[i].len() {
        return Err(GluedError::InvalidLevel { level: i, levels: depth });
    }
    let max = glued.tower.deltas[i] - glued.tower.deltas[level];
    if !(eps >= 0.0 && eps < max) {
        return Err(GluedError::RadiusTooLarge { eps, max });
    }
    let center = glued.f_maps[i][y];
    let row = glued.metric.row(center);
    let r = T::lit(eps);
    let mut members: Vec<usize> = glued.f_maps[level].iter().copied().filter(|&g| row[g] <= r).collect();
    members.sort_unstable();
    members.dedup();
    let metric = FiniteMetricSpace::from_fn(members.len(), |a, b| glued.metric.dist(members[a], members[b]));
    Ok(GluedBall { center, radius: eps, members, metric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gh::gh_exact_small;
    use proptest::prelude::*;

    fn line_tower(tol: f64) -> Tower<f64> {
        let a = FiniteMetricSpace::from_line(&[0.0, 1.0]);
        let b = FiniteMetricSpace::from_line(&[0.0, 0.5, 1.0, 1.5]);
        let c = FiniteMetricSpace::from_line(&[-1.0, 0.0, 0.5, 1.0, 1.5]);
        Tower::from_maps(vec![0.4, 0.2, 0.1], vec![a, b, c], vec![vec![0, 2], vec![1, 2, 3, 4]], tol).unwrap()
    }

    #[test]
    fn depth_one_is_the_base_space() {
        let x = FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]);
        let t = Tower::from_maps(vec![1.0], vec![x.clone()], vec![], 0.0).unwrap();
        let g = build_glued(&t).unwrap();
        assert_eq!(g.metric.as_flat(), x.as_flat());
        assert_eq!(g.strata, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn finite_depth_collapses_to_last_level() {
        let t = line_tower(0.0);
        let g = build_glued(&t).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.strata, vec![vec![0, 1], vec![2, 3], vec![4]]);
        let last = embed_stratum(&g, 2).unwrap();
        assert_eq!(last.isometry.max_distortion, 0.0);
        assert!(last.isometry.injective && last.passed());
        let mut img = g.f_maps[2].clone();
        img.sort_unstable();
        assert_eq!(img, (0..5).collect::<Vec<_>>());
        assert_eq!(gh_exact_small(&g.metric, &t.spaces[2]).unwrap(), 0.0);
        for l in 0..3 {
            let r = embed_stratum(&g, l).unwrap();
            assert!(r.passed() && r.isometry.max_distortion == 0.0, "level {l}");
        }
        assert!(g.min_cross_stratum > 0.0 && g.merged.is_empty());
    }

    #[test]
    fn invalid_tower_is_rejected() {
        let mut t = line_tower(0.0);
        t.deltas.swap(0, 1);
        assert!(matches!(build_glued(&t), Err(GluedError::InvalidTower(_))));
    }

    #[test]
    fn near_duplicates_are_merged_and_reported() {
        // the embedding is off by 0.002, so a point 0.001 from an image is noise
        let a = FiniteMetricSpace::from_line(&[0.0, 1.002]);
        let b = FiniteMetricSpace::from_line(&[0.0, 1.0, 1.001, 2.0]);
        let t = Tower::from_maps(vec![0.2, 0.1], vec![a, b], vec![vec![0, 1]], 0.01).unwrap();
        let g = build_glued(&t).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.merged.len(), 1);
        let m = g.merged[0];
        assert_eq!((m.level, m.index, m.glued), (1, 2, 1));
        assert!((m.distance - 0.001).abs() < 1e-12);
        let r = embed_stratum(&g, 1).unwrap();
        assert!(r.passed() && r.isometry.max_distortion <= 0.01);
    }

    #[test]
    fn exact_towers_keep_close_points() {
        let a = FiniteMetricSpace::from_line(&[0.0, 1.0]);
        let b = FiniteMetricSpace::from_line(&[0.0, 1.0, 1.001, 2.0]);
        let t = Tower::from_maps(vec![0.2, 0.1], vec![a, b], vec![vec![0, 1]], 0.01).unwrap();
        let g = build_glued(&t).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.merged.is_empty());
    }

    #[test]
    fn balls_respect_the_radius_regime() {
        let g = build_glued(&line_tower(0.0)).unwrap();
        assert!(matches!(glued_ball(&g, (0, 0), 0.35, 2), Err(GluedError::RadiusTooLarge { .. })));
        assert!(matches!(glued_ball(&g, (1, 0), 0.01, 1), Err(GluedError::InvalidLevel { .. })));
        let b = glued_ball(&g, (0, 0), 0.0, 2).unwrap();
        assert_eq!(b.members, vec![g.f_maps[0][0]]);
        let b = glued_ball(&g, (0, 1), 0.15, 1).unwrap();
        assert_eq!(b.members, vec![1]);
        assert_eq!(b.metric.len(), 1);
    }

    fn random_tower() -> impl Strategy<Value = Tower<f64>> {
        // nested subsets of a random planar cloud, each level keeping more
        (prop::collection::vec((0.0..4.0f64, 0.0..4.0f64), 6..14), 2usize..5).prop_map(|(pts, depth)| {
            let pts: Vec<[f64; 2]> = pts.into_iter().map(|(a, b)| [a, b]).collect();
            let n = pts.len();
            let sizes: Vec<usize> = (0..depth).map(|l| 2 + (n - 2) * (l + 1) / depth).collect();
            let spaces: Vec<_> = sizes.iter().map(|&s| FiniteMetricSpace::from_planar(&pts[..s])).collect();
            let maps: Vec<Vec<usize>> = sizes.windows(2).map(|w| (0..w[0]).collect()).collect();
            let deltas = (0..depth).map(|l| 0.5f64.powi(l as i32)).collect();
            Tower::from_maps(deltas, spaces, maps, 0.0).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn glued_metric_properties(t in random_tower(), eps in 0.0..0.5f64) {
            let g = build_glued(&t).unwrap();
            prop_assert!(g.metric.validate(1e-9).passed());
            prop_assert!(g.min_cross_stratum > 0.0);
            let last = t.depth() - 1;
            for l in 0..t.depth() {
                let r = embed_stratum(&g, l).unwrap();
                prop_assert!(r.passed());
            }
            prop_assert_eq!(embed_stratum(&g, last).unwrap().isometry.map.len(), g.len());
            // monotone in the radius and in the level
            let small = glued_ball(&g, (0, 0), eps * 0.5, 1).unwrap();
            let big = glued_ball(&g, (0, 0), eps, 1).unwrap();
            prop_assert!(small.members.iter().all(|m| big.members.contains(m)));
            if t.depth() > 2 && eps < t.deltas[0] - t.deltas[2] {
                let deeper = glued_ball(&g, (0, 0), eps, 2).unwrap();
                prop_assert!(big.members.iter().all(|m| deeper.members.contains(m)));
            }
        }
    }
}
