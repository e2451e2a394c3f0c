//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run all with `cargo test -p innerlim --test acceptance`; pass criterion
//! ids (`c4 c9`) after `--` to run a subset.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use innerlim::gallery::{
    ann_reference, bad_balls_tower, book_distance, book_lattice, disk_with_segment, gold_foils, many_splines,
    nonunique_tower, restricted_dense, spline_disk, tracked_point, BookPoint, PageEmbedding,
};
use innerlim::gh::{
    chain_counting_bound, covering_from_packing, gh_exact_small, gh_lower_bound, gh_upper_bound, greedy_packing,
    sequence_diagnostics, ChainCountingParams, SequenceConfig, Verdict,
};
use innerlim::glued::{
    ball_growth_exponent, build_glued, embed_stratum, glued_ball, inner_union_estimate, validate_tower, ScaleSubsets,
};
use innerlim::metric::{
    closed_ball, hausdorff_distance, is_isometric_embedding, restrict, tubular_neighborhood, FiniteMetricSpace,
};
use innerlim::sampler::{
    estimate_area, inner_region, intrinsic_diameter, restricted_vs_intrinsic_probe, sample_domain, DomainSpec,
    SamplePlan, SampledSpace, Shape,
};
use innerlim::Space;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sample(spec: &DomainSpec, plan: &SamplePlan) -> Result<SampledSpace, String> {
    sample_domain(spec, plan).map_err(|e| e.to_string())
}

fn c1_gold_foils_volume() -> Outcome {
    let mut notes = Vec::new();
    for j in [2u32, 3, 4] {
        let t = Instant::now();
        let s = sample(&gold_foils(j, None).map_err(|e| e.to_string())?, &SamplePlan::new(0.02))?;
        let want = j as f64 * (PI - PI / (j * j) as f64);
        let got = estimate_area(&s);
        let rel = (got - want).abs() / want;
        let secs = t.elapsed().as_secs_f64();
        notes.push(format!("j={j}: {got:.4} vs {want:.4} (rel {rel:.4}, {secs:.1}s)"));
        ensure(rel <= 0.02, format!("j={j}: relative error {rel:.4} > 0.02"))?;
        ensure(secs < 60.0, format!("j={j}: took {secs:.1}s"))?;
    }
    Ok(notes.join("; "))
}

fn c2_gold_foils_divergence() -> Outcome {
    let plan = SamplePlan::new(0.03);
    let spaces = [4u32, 8, 16]
        .iter()
        .map(|&j| sample(&gold_foils(j, None).map_err(|e| e.to_string())?, &plan))
        .collect::<Result<Vec<_>, _>>()?;
    let inner: Vec<_> = spaces.iter().map(|s| inner_region(s, 0.2, false)).collect();
    let subs: Vec<_> = inner.iter().map(|r| r.subspace()).collect();
    let mut notes = Vec::new();
    for (j, sub) in [4usize, 8, 16].iter().zip(&subs) {
        let count = greedy_packing(sub, 0.4, 0).count;
        notes.push(format!("j={j}: {count}"));
        ensure(count >= 2 * j, format!("j={j}: packing {count} < {}", 2 * j))?;
    }
    let refs: Vec<_> = subs.iter().collect();
    let diag = sequence_diagnostics(&refs, &[0.4, 0.8], &SequenceConfig::default()).map_err(|e| e.to_string())?;
    ensure(diag.verdict == Verdict::Divergent, format!("verdict {:?}", diag.verdict))?;
    Ok(format!("packing at 0.4: {}; verdict divergent", notes.join(", ")))
}

fn c3_many_splines_packing() -> Outcome {
    let plan = SamplePlan::new(0.05);
    let grid = [0.3, 0.6, 1.0, 1.9];
    let full = [4u32, 8, 16]
        .iter()
        .map(|&j| sample(&many_splines(j).map_err(|e| e.to_string())?, &plan))
        .collect::<Result<Vec<_>, _>>()?;
    let mut notes = Vec::new();
    for (j, s) in [4usize, 8, 16].iter().zip(&full) {
        let count = greedy_packing(s, 1.9, 0).count;
        notes.push(format!("j={j}: {count}"));
        ensure(count >= *j, format!("j={j}: packing at 1.9 is {count} < {j}"))?;
    }
    let refs: Vec<&SampledSpace> = full.iter().collect();
    let diag = sequence_diagnostics(&refs, &grid, &SequenceConfig::default()).map_err(|e| e.to_string())?;
    ensure(diag.verdict == Verdict::Divergent, format!("full sequence verdict {:?}", diag.verdict))?;
    drop(full);

    let spaces = [16u32, 32, 64]
        .iter()
        .map(|&j| sample(&many_splines(j).map_err(|e| e.to_string())?, &plan))
        .collect::<Result<Vec<_>, _>>()?;
    let inner: Vec<_> = spaces.iter().map(|s| inner_region(s, 0.3, false)).collect();
    let subs: Vec<_> = inner.iter().map(|r| r.subspace()).collect();
    let refs: Vec<_> = subs.iter().collect();
    let diag = sequence_diagnostics(&refs, &grid, &SequenceConfig::default()).map_err(|e| e.to_string())?;
    ensure(
        diag.verdict == Verdict::UniformlyTotallyBounded,
        format!("inner sequence verdict {:?}, counts {:?}", diag.verdict, diag.counts),
    )?;
    Ok(format!("packing at 1.9: {}; full divergent; inner counts {:?} bounded", notes.join(", "), diag.counts))
}

fn c4_many_splines_inner_limit() -> Outcome {
    let plan = SamplePlan::new(0.02);
    let reference = ann_reference(0.3, &plan).map_err(|e| e.to_string())?.dense::<f32>();
    let mut bounds = Vec::new();
    for j in [16u32, 64] {
        let t = Instant::now();
        let s = sample(&many_splines(j).map_err(|e| e.to_string())?, &plan)?;
        let points = inner_region(&s, 0.3, false).points().to_vec();
        let m = restricted_dense::<f32>(&s, &points);
        drop(s);
        let b = gh_upper_bound(&m, &reference, 400).map_err(|e| e.to_string())?;
        eprintln!("  c4 j={j}: {} points, bound {:.4} ({:.0}s)", m.len(), b.value, t.elapsed().as_secs_f64());
        bounds.push(b.value);
    }
    let (b16, b64) = (bounds[0], bounds[1]);
    ensure(b64 <= 0.1, format!("j=64 bound {b64:.4} > 0.1"))?;
    ensure(b64 <= b16, format!("j=64 bound {b64:.4} exceeds j=16 bound {b16:.4}"))?;
    Ok(format!("upper bound j=16 {b16:.4}, j=64 {b64:.4} (reference {} points)", reference.len()))
}

fn c5_restricted_vs_intrinsic() -> Outcome {
    let annulus = DomainSpec::PlanarRegion { parts: vec![Shape::disk(0.0, 0.0, 5.0)], holes: vec![Shape::disk(0.0, 0.0, 1.0)] };
    let s = sample(&annulus, &SamplePlan::new(0.05).with_connect_factor(3.0))?;
    let (d_m, d_inner) = restricted_vs_intrinsic_probe(&s, 1.0, [3.0, 1.0], [-3.0, 1.0]).map_err(|e| e.to_string())?;
    // the straight segment at height 1 is tangent to the hole
    let rel = (d_m - 6.0).abs() / 6.0;
    ensure(rel <= 0.03, format!("d_M = {d_m:.4}, relative error {rel:.4}"))?;
    let floor = 2.0 * 10f64.sqrt() * 0.97;
    ensure(d_inner >= floor, format!("d_inner = {d_inner:.4} < {floor:.4}"))?;
    ensure(d_inner >= d_m, "intrinsic distance below restricted distance")?;
    Ok(format!("d_M = {d_m:.4}, d_M^1 = {d_inner:.4}"))
}

/// Random metric on `n` points: planar, or shortest paths of random weights.
fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> Space {
    if rng.gen_bool(0.5) {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)]).collect();
        return FiniteMetricSpace::from_planar(&pts);
    }
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.gen_range(0.1..2.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    FiniteMetricSpace::from_fn(n, |i, j| d[i][j])
}

fn c6_gh_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = 240;
    for case in 0..cases {
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let x = random_metric(&mut rng, n);
        let y = random_metric(&mut rng, m);
        let lo = gh_lower_bound(&x, &y).map_err(|e| e.to_string())?.value;
        let ex = gh_exact_small(&x, &y).map_err(|e| e.to_string())?;
        let up = gh_upper_bound(&x, &y, 50).map_err(|e| e.to_string())?.value;
        let slack = 1e-12;
        ensure(lo <= ex + slack && ex <= up + slack, format!("case {case}: {lo} <= {ex} <= {up} fails"))?;
    }
    let a = FiniteMetricSpace::from_line(&[0.0, 1.0]);
    let b = FiniteMetricSpace::from_line(&[0.0, 2.0]);
    let e = gh_exact_small(&a, &b).map_err(|e| e.to_string())?;
    ensure(e == 0.5, format!("exact on two-point spaces gave {e}"))?;
    Ok(format!("{cases} random pairs sandwiched; two-point exact = {e}"))
}

fn c7_chain_counting() -> Outcome {
    let s = sample(&DomainSpec::disk(1.0), &SamplePlan::new(0.02).with_connect_factor(3.0))?;
    let inner = inner_region(&s, 0.2, true);
    let d_delta = intrinsic_diameter(&inner).map_err(|e| e.to_string())?;
    // M^0.2 is the disk of radius 0.8
    ensure((d_delta - 1.6).abs() <= 0.03 * 1.6, format!("intrinsic diameter {d_delta:.4} not within 3% of 1.6"))?;
    let metric = inner.intrinsic().map_err(|e| e.to_string())?;
    let cover = covering_from_packing(metric, 0.09);
    ensure(cover.verified, "greedy cover does not reach every point")?;
    let p = ChainCountingParams { m: 2, delta: 0.2, epsilon: 0.09, d_delta, volume: PI * 1.01, theta: PI };
    let bound = chain_counting_bound(&p).map_err(|e| e.to_string())?;
    ensure(bound.bounds(cover.count), format!("cover count {} exceeds bound {bound}", cover.count))?;
    // oracle: the formula evaluated directly in log space
    let want = (p.volume / p.theta).log10() + 2.0 * ((2.0 * d_delta / 0.09) * 2f64.log10() - 0.09f64.log10());
    ensure((bound.log10 - want).abs() < 1e-9, format!("log10 bound {} vs {want}", bound.log10))?;
    let at = |f: &dyn Fn(&mut ChainCountingParams)| {
        let mut q = p;
        f(&mut q);
        chain_counting_bound(&q).map(|b| b.log10).map_err(|e| e.to_string())
    };
    let base = bound.log10;
    ensure(at(&|q| q.volume *= 2.0)? >= base, "bound decreased with volume")?;
    ensure(at(&|q| q.d_delta *= 1.5)? >= base, "bound decreased with diameter")?;
    ensure(at(&|q| q.theta *= 2.0)? <= base, "bound increased with theta")?;
    ensure(at(&|q| q.epsilon = 0.05)? >= base, "bound increased with epsilon")?;
    Ok(format!("D = {d_delta:.4}, cover count {} <= bound {bound}", cover.count))
}

fn c8_glued_construction() -> Outcome {
    let plan = SamplePlan::new(0.06);
    let deltas = [0.4, 0.2, 0.1, 0.05];
    let tower = innerlim::gallery::annulus_tower(&deltas, &plan).map_err(|e| e.to_string())?;
    let report = validate_tower(&tower);
    ensure(report.passed(), format!("tower violations {:?}", report.violations))?;
    let g = build_glued(&tower).map_err(|e| e.to_string())?;
    let v = g.metric.validate(3.0 * tower.tol);
    ensure(v.passed(), format!("glued metric fails validation: {:?}", v.witness()))?;
    let mut worst: f64 = 0.0;
    for level in 0..deltas.len() {
        let r = embed_stratum(&g, level).map_err(|e| e.to_string())?;
        ensure(r.isometry.max_distortion <= tower.tol, format!("F_{level} distortion {}", r.isometry.max_distortion))?;
        ensure(r.nested && r.coherent, format!("F_{level} nested {} coherent {}", r.nested, r.coherent))?;
        worst = worst.max(r.isometry.max_distortion);
    }
    let last = deltas.len() - 1;
    let f = &g.f_maps[last];
    let onto: BTreeSet<usize> = f.iter().copied().collect();
    ensure(onto.len() == g.len() && f.len() == g.len(), "F of the last level is not a bijection")?;
    let iso = is_isometric_embedding(&tower.spaces[last], &g.metric, f, 0.0).map_err(|e| e.to_string())?;
    ensure(iso.max_distortion == 0.0 && iso.passes, format!("collapse distortion {}", iso.max_distortion))?;
    Ok(format!("{} glued points, worst F distortion {worst:.2e}, collapse distortion 0", g.len()))
}

fn c9_ball_pathology() -> Outcome {
    let heights: Vec<f64> = (0..8).map(|k| 0.5f64.powi(k)).collect();
    let deltas = [0.4, 0.2, 0.1, 0.05];
    let pitch = 0.025;
    let eps = 0.1;
    let t = bad_balls_tower(&heights, &deltas, pitch).map_err(|e| e.to_string())?;
    let g = build_glued(&t.tower).map_err(|e| e.to_string())?;
    let origin = t.lattices[0].index_of((0, 0, 0)).ok_or("no origin at level 0")?;
    let ball = glued_ball(&g, (0, origin), eps, 3).map_err(|e| e.to_string())?;
    let got: BTreeSet<(usize, i64, i64)> = ball
        .members
        .iter()
        .map(|&m| {
            let (level, idx) = g.origin[m];
            t.lattices[3].keys[t.tower.push(level, idx, 3)]
        })
        .collect();

    let ambient = book_lattice(&heights, pitch).map_err(|e| e.to_string())?;
    let o = BookPoint::new(0, 0.0, 0.0);
    let d3 = deltas[3];
    let mut want = BTreeSet::new();
    let mut thin = 0;
    for k in 0..ambient.len() {
        let p = ambient.point(k);
        if book_distance(&heights, o, p).map_err(|e| e.to_string())? > eps + 1e-12 {
            continue;
        }
        let h = heights[p.page];
        if p.x > 0.0 && h < d3 {
            thin += 1;
        }
        if h > d3 && p.y <= h - d3 + 1e-12 {
            want.insert(ambient.keys[k]);
        }
    }
    ensure(thin > 0, "ambient ball holds no point of a thin page")?;
    ensure(got == want, format!("glued ball has {} points, expected {}", got.len(), want.len()))?;
    Ok(format!("ball of {} points equals the truncated ambient ball; {thin} ambient points on thin pages excluded", got.len()))
}

fn c10_nonuniqueness() -> Outcome {
    let grid = [0.09, 0.12, 0.16, 0.2];
    let mut exps = Vec::new();
    for e in [PageEmbedding::Inclusion, PageEmbedding::Shifting] {
        let t = nonunique_tower(4, e).map_err(|e| e.to_string())?;
        let g = build_glued(&t.tower).map_err(|e| e.to_string())?;
        let y = tracked_point(&t, 15.0 / 48.0).ok_or("tracked point missing")?;
        let fit = ball_growth_exponent(&g.metric, g.f_maps[0][y], &grid).map_err(|e| e.to_string())?;
        eprintln!("  c10 {e:?}: counts {:?}, exponent {:.3}", fit.counts, fit.exponent);
        exps.push(fit.exponent);
    }
    ensure(exps[0] >= 1.7, format!("inclusion exponent {:.3} < 1.7", exps[0]))?;
    ensure(exps[1] <= 1.3, format!("shifting exponent {:.3} > 1.3", exps[1]))?;
    Ok(format!("exponent {:.3} (inclusion) vs {:.3} (shifting)", exps[0], exps[1]))
}

fn c11_glued_vs_gh_limit() -> Outcome {
    let h = 0.03;
    let plan = SamplePlan::new(h);
    let x = disk_with_segment(1.0, &plan).map_err(|e| e.to_string())?;
    let deltas = [0.04, 0.08, 0.16];
    let js = [4u32, 8, 16, 32];
    let samples = js
        .iter()
        .map(|&j| sample(&spline_disk(1.0 / j as f64, 1.0).map_err(|e| e.to_string())?, &plan))
        .collect::<Result<Vec<_>, _>>()?;
    let scales: Vec<ScaleSubsets> = deltas
        .iter()
        .map(|&d| ScaleSubsets {
            delta: d,
            subsets: samples
                .iter()
                .map(|s| inner_region(s, d, false).points().iter().map(|&i| x.project(s.coords()[i])).collect())
                .collect(),
        })
        .collect();
    let est = inner_union_estimate(&x.space, &scales, h, None).map_err(|e| e.to_string())?;
    let on_segment = est.points.iter().filter(|&&i| i >= x.disk_points).count();
    ensure(on_segment == 0, format!("{on_segment} estimate points lie on the segment"))?;
    let est_space = restrict(&x.space, &est.points).map_err(|e| e.to_string())?.materialize();
    let disk = sample(&DomainSpec::disk(1.0), &plan)?;
    let up = gh_upper_bound(&est_space, disk.dense(), 200).map_err(|e| e.to_string())?.value;
    let lo = gh_lower_bound(&est_space, &x.space).map_err(|e| e.to_string())?;
    ensure(up <= 0.08, format!("upper bound to the disk {up:.4} > 0.08"))?;
    ensure(lo.value >= 0.2, format!("lower bound to the limit {:.4} < 0.2", lo.value))?;
    Ok(format!(
        "{} estimate points; d_GH(estimate, disk) <= {up:.4}; d_GH(estimate, X) >= {:.4} ({:?})",
        est.points.len(),
        lo.value,
        lo.method
    ))
}

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn planar_points(min: usize, max: usize) -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((0.0..4.0f64, 0.0..4.0f64).prop_map(|(a, b)| [a, b]), min..=max)
}

fn random_domain() -> impl Strategy<Value = (DomainSpec, f64)> {
    let disk = (0.8..1.5f64).prop_map(DomainSpec::disk);
    let rect = (1.6..3.0f64, 1.6..3.0f64).prop_map(|(w, h)| DomainSpec::PlanarRegion { parts: vec![Shape::rect(0.0, 0.0, w, h)], holes: vec![] });
    let annulus = (0.3..0.6f64, 1.6..2.4f64).prop_map(|(r1, w)| DomainSpec::PlanarRegion {
        parts: vec![Shape::disk(0.0, 0.0, r1 + w)],
        holes: vec![Shape::disk(0.0, 0.0, r1)],
    });
    (prop_oneof![disk, rect, annulus], 0.05..0.09f64)
}

fn c12_lemma_suites() -> Outcome {
    let cases = 100;
    let mut notes = Vec::new();
    let run = |name: &str, seed: u8, f: &dyn Fn(&mut TestRunner, &Cell<usize>) -> Result<(), String>| -> Result<String, String> {
        let count = Cell::new(0);
        let mut r = runner(cases, seed);
        f(&mut r, &count).map_err(|e| format!("{name}: {e}"))?;
        ensure(count.get() >= cases as usize, format!("{name}: only {} instances ran", count.get()))?;
        Ok(format!("{name} {}", count.get()))
    };

    // closed_ball(a_inf, r) ∩ A_inf ⊆ T_{h+ulp}(closed_ball(a_j, r + delta + h) ∩ A_j)
    notes.push(run("hausdorff-balls", 1, &|r, count| {
        let strat = (planar_points(2, 25), any::<u64>(), 0.0..3.0f64);
        r.run(&strat, |(pts, bits, rad)| {
            count.set(count.get() + 1);
            let z = FiniteMetricSpace::from_planar(&pts);
            let n = z.len();
            let pick = |shift: u32| -> Vec<usize> {
                let v: Vec<usize> = (0..n).filter(|&i| (bits.rotate_left(shift) >> (i % 64)) & 1 == 1).collect();
                if v.is_empty() {
                    vec![(shift as usize) % n]
                } else {
                    v
                }
            };
            let (aj, ainf) = (pick(0), pick(17));
            let (pj, pinf) = (aj[(bits as usize) % aj.len()], ainf[(bits as usize / 7) % ainf.len()]);
            let h = hausdorff_distance(&z, &aj, &ainf).unwrap();
            let delta = z.dist(pj, pinf);
            let inner: Vec<usize> = closed_ball(&z, pinf, rad).into_iter().filter(|i| ainf.contains(i)).collect();
            let outer: Vec<usize> =
                closed_ball(&z, pj, (rad + delta + h) * (1.0 + 1e-12)).into_iter().filter(|i| aj.contains(i)).collect();
            prop_assert!(!outer.is_empty());
            let tube = tubular_neighborhood(&z, &outer, h + f64::EPSILON * (1.0 + h) * 4.0).unwrap();
            for p in inner {
                prop_assert!(tube.contains(&p), "point {} escapes", p);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    // B(y, eps) ⊆ M^{delta'} for y in M^delta and eps < delta - delta' - (h + boundary_h)
    notes.push(run("ball-in-inner-region", 2, &|r, count| {
        let strat = (random_domain(), 0.0..0.2f64, 0.25..0.5f64, 0.0..1.0f64, 0.0..0.999f64);
        r.run(&strat, |((spec, h), d2, gap, which, frac)| {
            count.set(count.get() + 1);
            let plan = SamplePlan::new(h);
            let s = sample_domain(&spec, &plan).unwrap();
            let d1 = d2 + gap;
            let big = inner_region(&s, d1, false);
            prop_assert!(!big.is_empty());
            let y = big.points()[((which * big.len() as f64) as usize).min(big.len() - 1)];
            let eps = frac * (d1 - d2 - (plan.h + plan.boundary_h));
            let keep: BTreeSet<usize> = inner_region(&s, d2, false).points().iter().copied().collect();
            for p in closed_ball(&s, y, eps) {
                prop_assert!(keep.contains(&p), "sample {} of the ball leaves the inner region", p);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    // inner regions over delta_i -> 0 exhaust the sample
    notes.push(run("exhaustion", 3, &|r, count| {
        r.run(&(random_domain(), 0.1..1.0f64), |((spec, h), d0)| {
            count.set(count.get() + 1);
            let s = sample_domain(&spec, &SamplePlan::new(h)).unwrap();
            let min = s.boundary_dist().iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(min > 0.0);
            let mut seen = vec![false; s.len()];
            let mut d = d0;
            let mut prev: Option<BTreeSet<usize>> = None;
            loop {
                let pts: BTreeSet<usize> = inner_region(&s, d, false).points().iter().copied().collect();
                if let Some(p) = &prev {
                    prop_assert!(p.is_subset(&pts));
                }
                for &i in &pts {
                    seen[i] = true;
                }
                prev = Some(pts);
                if d < min {
                    break;
                }
                d /= 2.0;
            }
            prop_assert!(seen.iter().all(|&b| b));
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    // cover count at eps <= packing count at eps / 2
    notes.push(run("packing-covering", 4, &|r, count| {
        r.run(&(planar_points(1, 40), 0.05..2.0f64), |(pts, eps)| {
            count.set(count.get() + 1);
            let z = FiniteMetricSpace::from_planar(&pts);
            let cover = covering_from_packing(&z, eps);
            let pack = greedy_packing(&z, eps / 2.0, 0);
            prop_assert!(cover.count <= pack.count);
            for p in 0..z.len() {
                prop_assert!(cover.centers.iter().any(|&c| z.dist(p, c) <= eps));
            }
            for (k, &a) in pack.centers.iter().enumerate() {
                for &b in &pack.centers[k + 1..] {
                    prop_assert!(z.dist(a, b) >= eps / 2.0);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);
    Ok(format!("instances: {}", notes.join(", ")))
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 12] = [
    ("c1", "gold-foils volume", c1_gold_foils_volume),
    ("c2", "gold-foils divergence", c2_gold_foils_divergence),
    ("c3", "many-splines packing", c3_many_splines_packing),
    ("c4", "many-splines inner limit", c4_many_splines_inner_limit),
    ("c5", "restricted vs intrinsic", c5_restricted_vs_intrinsic),
    ("c6", "GH sandwich", c6_gh_sandwich),
    ("c7", "chain-counting bound", c7_chain_counting),
    ("c8", "glued-limit construction", c8_glued_construction),
    ("c9", "ball pathology", c9_ball_pathology),
    ("c10", "nonuniqueness proxy", c10_nonuniqueness),
    ("c11", "glued limit vs GH limit", c11_glued_vs_gh_limit),
    ("c12", "lemma suites", c12_lemma_suites),
];

fn main() {
    let wanted: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).map(|a| a.to_lowercase()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, f) in CRITERIA {
        if !wanted.is_empty() && !wanted.iter().any(|w| w == id) {
            continue;
        }
        ran += 1;
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>3} {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>3} {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
