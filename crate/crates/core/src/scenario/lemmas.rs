//! One random instance per call of each containment or counting lemma.
//! `Err` carries a description of the violating instance.

use std::collections::BTreeSet;

use rand::Rng;

use crate::gh::{covering_from_packing, greedy_packing};
use crate::metric::{closed_ball, hausdorff_distance, tubular_neighborhood, FiniteMetricSpace};
use crate::sampler::{inner_region, sample_domain, DomainSpec, SamplePlan, Shape};

fn planar_points<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<[f64; 2]> {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| [rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)]).collect()
}

fn random_domain<R: Rng>(rng: &mut R) -> (DomainSpec, f64) {
    let spec = match rng.gen_range(0..3) {
        0 => DomainSpec::disk(rng.gen_range(0.8..1.5)),
        1 => DomainSpec::PlanarRegion {
            parts: vec![Shape::rect(0.0, 0.0, rng.gen_range(1.6..3.0), rng.gen_range(1.6..3.0))],
            holes: vec![],
        },
        _ => {
            let r1 = rng.gen_range(0.3..0.6);
            let w = rng.gen_range(1.6..2.4);
            DomainSpec::PlanarRegion { parts: vec![Shape::disk(0.0, 0.0, r1 + w)], holes: vec![Shape::disk(0.0, 0.0, r1)] }
        }
    };
    (spec, rng.gen_range(0.05..0.09))
}

fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let v: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if v.is_empty() {
        vec![rng.gen_range(0..n)]
    } else {
        v
    }
}

/// For point sets `A_j`, `A` at Hausdorff distance `h` and points `a_j`, `a`
/// at distance `delta`, the ball of radius `r` about `a` in `A` lies in the
/// `h`-tube of the ball of radius `r + delta + h` about `a_j` in `A_j`.
pub fn check_hausdorff_balls<R: Rng>(rng: &mut R) -> Result<(), String> {
    let z = FiniteMetricSpace::from_planar(&planar_points(rng, 2, 25));
    let n = z.len();
    let (aj, a) = (random_subset(rng, n), random_subset(rng, n));
    let (pj, p) = (aj[rng.gen_range(0..aj.len())], a[rng.gen_range(0..a.len())]);
    let r = rng.gen_range(0.0..3.0);
    let h = hausdorff_distance(&z, &aj, &a).map_err(|e| e.to_string())?;
    let delta = z.dist(pj, p);
    let outer: Vec<usize> =
        closed_ball(&z, pj, (r + delta + h) * (1.0 + 1e-12)).into_iter().filter(|i| aj.contains(i)).collect();
    if outer.is_empty() {
        return Err(format!("outer ball about {pj} is empty"));
    }
    let tube = tubular_neighborhood(&z, &outer, h + f64::EPSILON * (1.0 + h) * 4.0).map_err(|e| e.to_string())?;
    match closed_ball(&z, p, r).into_iter().filter(|i| a.contains(i)).find(|q| !tube.contains(q)) {
        Some(q) => Err(format!("point {q} of {n} escapes the tube (r = {r}, h = {h})")),
        None => Ok(()),
    }
}

/// A sample ball of radius `eps < delta - delta' - (h + boundary_h)` about a
/// point of the `delta` inner region stays in the `delta'` inner region.
pub fn check_ball_in_inner_region<R: Rng>(rng: &mut R) -> Result<(), String> {
    let (spec, h) = random_domain(rng);
    let plan = SamplePlan::new(h);
    let s = sample_domain(&spec, &plan).map_err(|e| e.to_string())?;
    let d2 = rng.gen_range(0.0..0.2);
    let d1 = d2 + rng.gen_range(0.25..0.5);
    let big = inner_region(&s, d1, false);
    if big.is_empty() {
        return Err(format!("inner region at {d1} is empty"));
    }
    let y = big.points()[rng.gen_range(0..big.len())];
    let eps = rng.gen_range(0.0..0.999) * (d1 - d2 - (plan.h + plan.boundary_h));
    let keep: BTreeSet<usize> = inner_region(&s, d2, false).points().iter().copied().collect();
    match closed_ball(&s, y, eps).into_iter().find(|p| !keep.contains(p)) {
        Some(p) => Err(format!("sample {p} of the ball about {y} leaves the inner region at {d2}")),
        None => Ok(()),
    }
}

/// Inner regions grow as `delta` halves and eventually hold every sample.
pub fn check_exhaustion<R: Rng>(rng: &mut R) -> Result<(), String> {
    let (spec, h) = random_domain(rng);
    let s = sample_domain(&spec, &SamplePlan::new(h)).map_err(|e| e.to_string())?;
    let min = s.boundary_dist().iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err("a sample lies on the boundary".into());
    }
    let mut d = rng.gen_range(0.1..1.0);
    let mut prev = BTreeSet::new();
    loop {
        let pts: BTreeSet<usize> = inner_region(&s, d, false).points().iter().copied().collect();
        if !prev.is_subset(&pts) {
            return Err(format!("inner region shrinks at delta {d}"));
        }
        prev = pts;
        if d < min {
            break;
        }
        d /= 2.0;
    }
    if prev.len() != s.len() {
        return Err(format!("{} of {} samples never reached", s.len() - prev.len(), s.len()));
    }
    Ok(())
}

/// The covering derived from a maximal `eps`-packing covers at radius `eps`
/// and needs no more centers than an `eps/2`-packing has.
pub fn check_packing_covering<R: Rng>(rng: &mut R) -> Result<(), String> {
    let z = FiniteMetricSpace::from_planar(&planar_points(rng, 1, 40));
    let eps = rng.gen_range(0.05..2.0);
    let cover = covering_from_packing(&z, eps);
    let pack = greedy_packing(&z, eps / 2.0, 0);
    if cover.count > pack.count {
        return Err(format!("cover {} exceeds packing {} at {eps}", cover.count, pack.count));
    }
    if let Some(p) = (0..z.len()).find(|&p| !cover.centers.iter().any(|&c| z.dist(p, c) <= eps)) {
        return Err(format!("point {p} is uncovered at {eps}"));
    }
    for (k, &a) in pack.centers.iter().enumerate() {
        if let Some(&b) = pack.centers[k + 1..].iter().find(|&&b| z.dist(a, b) < eps / 2.0) {
            return Err(format!("centers {a} and {b} closer than {}", eps / 2.0));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instances_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            check_hausdorff_balls(&mut rng).unwrap();
            check_packing_covering(&mut rng).unwrap();
        }
        for _ in 0..3 {
            check_ball_in_inner_region(&mut rng).unwrap();
            check_exhaustion(&mut rng).unwrap();
        }
    }
}
