use super::{MetricError, MetricView};
use crate::scalar::{fmax, fmin, Scalar};

/// Largest pairwise distance; 0 for spaces with at most one point.
///
/// Infinite entries propagate, so a disconnected intrinsic metric reports
/// `+inf`.
pub fn diameter<T: Scalar, V: MetricView<T> + ?Sized>(space: &V) -> T {
    let mut best = T::zero();
    for i in 0..space.len() {
        let r = space.row(i);
        best = r[i..].iter().copied().fold(best, fmax);
    }
    best
}

/// `{x : d(center, x) <= r}`, in index order.
pub fn closed_ball<T: Scalar, V: MetricView<T> + ?Sized>(space: &V, center: usize, r: T) -> Vec<usize> {
    let row = space.row(center);
    let mut out: Vec<usize> = (0..space.len()).filter(|&x| row[x] <= r).collect();
    if !out.contains(&center) {
        // r < 0 is outside the contract but the center always belongs
        out.push(center);
        out.sort_unstable();
    }
    out
}

/// Distance from every point of the space to the set `a`.
pub fn point_to_set<T: Scalar, V: MetricView<T> + ?Sized>(
    space: &V,
    a: &[usize],
) -> Result<Vec<T>, MetricError> {
    if a.is_empty() {
        return Err(MetricError::EmptySubset);
    }
    let mut best = vec![T::infinity(); space.len()];
    for &p in a {
        let row = space.row(p);
        for (b, &d) in best.iter_mut().zip(row.iter()) {
            *b = fmin(*b, d);
        }
    }
    Ok(best)
}

/// `T_r(A) = {x : d(x, A) < r}` with a strict inequality.
pub fn tubular_neighborhood<T: Scalar, V: MetricView<T> + ?Sized>(
    space: &V,
    a: &[usize],
    r: T,
) -> Result<Vec<usize>, MetricError> {
    let d = point_to_set(space, a)?;
    Ok((0..space.len()).filter(|&x| d[x] < r).collect())
}

/// Hausdorff distance between two nonempty subsets of one space.
///
/// Reads only the rows of `a`.
pub fn hausdorff_distance<T: Scalar, V: MetricView<T> + ?Sized>(
    space: &V,
    a: &[usize],
    b: &[usize],
) -> Result<T, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptySubset);
    }
    let mut to_a = vec![T::infinity(); b.len()];
    let mut worst = T::zero();
    for &p in a {
        let row = space.row(p);
        let mut nearest_b = T::infinity();
        for (k, &q) in b.iter().enumerate() {
            let d = row[q];
            nearest_b = fmin(nearest_b, d);
            to_a[k] = fmin(to_a[k], d);
        }
        worst = fmax(worst, nearest_b);
    }
    Ok(to_a.into_iter().fold(worst, fmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> FiniteMetricSpace<f64> {
        FiniteMetricSpace::from_line(xs)
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&FiniteMetricSpace::<f64>::point()), 0.0);
        assert_eq!(diameter(&line(&[0.0, 1.0, 3.0])), 3.0);
    }

    #[test]
    fn balls() {
        let x = line(&[0.0, 0.5, 1.0, 2.0]);
        assert_eq!(closed_ball(&x, 0, 1.0), vec![0, 1, 2]);
        assert_eq!(closed_ball(&x, 2, 0.0), vec![2]);
        assert_eq!(closed_ball(&x, 3, 5.0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn tubes() {
        let x = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(tubular_neighborhood(&x, &[0], 1.5).unwrap(), vec![0, 1]);
        assert!(tubular_neighborhood(&x, &[0], 0.0).unwrap().is_empty());
        assert_eq!(tubular_neighborhood(&x, &[0, 1, 2, 3], 1e-9).unwrap().len(), 4);
        assert_eq!(tubular_neighborhood(&x, &[], 1.0), Err(MetricError::EmptySubset));
    }

    #[test]
    fn hausdorff_examples() {
        let x = line(&[0.0, 1.0, 3.0]);
        assert_eq!(hausdorff_distance(&x, &[0], &[2]).unwrap(), 3.0);
        assert_eq!(hausdorff_distance(&x, &[0, 2], &[1]).unwrap(), 2.0);
        assert_eq!(hausdorff_distance(&x, &[0, 1], &[1, 0]).unwrap(), 0.0);
        assert!(hausdorff_distance(&x, &[], &[1]).is_err());
    }

    // oracle: textbook sup-inf formula on the dense matrix
    fn oracle_h(x: &FiniteMetricSpace<f64>, a: &[usize], b: &[usize]) -> f64 {
        let one = |p: &[usize], q: &[usize]| {
            p.iter()
                .map(|&i| q.iter().map(|&j| x.dist(i, j)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        one(a, b).max(one(b, a))
    }

    fn planar_space() -> impl Strategy<Value = FiniteMetricSpace<f64>> {
        prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 2..14)
            .prop_map(|p| FiniteMetricSpace::from_planar(&p.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>()))
    }

    fn subset(n: usize, mask: u32) -> Vec<usize> {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if s.is_empty() {
            vec![(mask as usize) % n]
        } else {
            s
        }
    }

    proptest! {
        #[test]
        fn hausdorff_matches_oracle_and_triangle(x in planar_space(), m1: u32, m2: u32, m3: u32) {
            let n = x.len();
            let (a, b, c) = (subset(n, m1), subset(n, m2), subset(n, m3));
            let ab = hausdorff_distance(&x, &a, &b).unwrap();
            prop_assert_eq!(ab, oracle_h(&x, &a, &b));
            prop_assert_eq!(ab, hausdorff_distance(&x, &b, &a).unwrap());
            let bc = hausdorff_distance(&x, &b, &c).unwrap();
            let ac = hausdorff_distance(&x, &a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
        }

        #[test]
        fn nested_hausdorff_is_one_sided(x in planar_space(), m1: u32, m2: u32) {
            let n = x.len();
            let a = subset(n, m1);
            let mut b = subset(n, m2);
            b.extend(a.iter().copied());
            b.sort_unstable();
            b.dedup();
            let d = point_to_set(&x, &a).unwrap();
            let one_sided = b.iter().map(|&q| d[q]).fold(0.0, f64::max);
            prop_assert_eq!(hausdorff_distance(&x, &a, &b).unwrap(), one_sided);
        }

        #[test]
        fn hausdorff_ball_containment(
            x in planar_space(), m1: u32, m2: u32, pick in 0usize..64, r in 0.0..4.0f64,
        ) {
            let n = x.len();
            let aj = subset(n, m1);
            let ainf = subset(n, m2);
            let h = hausdorff_distance(&x, &aj, &ainf).unwrap();
            let p = aj[pick % aj.len()];
            let q = ainf[(pick / 7) % ainf.len()];
            let delta = x.dist(p, q);
            let small: Vec<usize> = closed_ball(&x, q, r).into_iter().filter(|i| ainf.contains(i)).collect();
            let big: Vec<usize> = closed_ball(&x, p, (r + delta + h) * (1.0 + 1e-12)).into_iter().filter(|i| aj.contains(i)).collect();
            let tube = tubular_neighborhood(&x, &big, h + 1e-12 * (1.0 + h)).unwrap();
            for s in small {
                prop_assert!(tube.contains(&s));
            }
        }
    }
}
