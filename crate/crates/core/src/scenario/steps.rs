use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::lemmas;
use crate::gallery::{
    annulus_tower, bad_balls_tower, book_distance, book_lattice, disk_with_segment, generate, nonunique_tower,
    restricted_dense, spline_disk, tracked_point, BookPoint, FamilySpec, Generated, PageEmbedding,
};
use crate::gh::{
    chain_counting_bound, covering_from_packing, gh_exact_small, gh_lower_bound, gh_upper_bound, greedy_packing,
    sequence_diagnostics, ChainCountingParams, SequenceConfig, Verdict, EXACT_MAX_POINTS,
};
use crate::glued::{
    ball_growth_exponent, build_glued, embed_stratum, glued_ball, glued_to_json, inner_union_estimate, tower_from_json,
    validate_tower, ScaleSubsets, TowerJson,
};
use crate::metric::{is_isometric_embedding, restrict, FiniteMetricSpace, MetricView, Subspace};
use crate::sampler::{
    estimate_area, inner_region, intrinsic_diameter, restricted_vs_intrinsic_probe, sample_domain, DomainSpec,
    SamplePlan,
};

/// A generated family, optionally cut down to its inner region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    #[serde(flatten)]
    pub family: FamilySpec,
    /// Keep only the inner region at this scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerSpec {
    /// Bands of the annulus `1 < r < 2`.
    Annulus {
        deltas: Vec<f64>,
        h: f64,
        #[serde(default)]
        connect_factor: Option<f64>,
    },
    BadBalls {
        heights: Vec<f64>,
        deltas: Vec<f64>,
        pitch: f64,
    },
    Nonunique {
        depth: usize,
        embedding: PageEmbedding,
    },
    /// A tower manifest on disk.
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Sampled area against the closed form.
    Area {
        space: SpaceSpec,
        #[serde(default)]
        max_rel_err: Option<f64>,
    },
    /// Greedy packing count at one separation.
    Packing {
        space: SpaceSpec,
        epsilon: f64,
        #[serde(default)]
        min_count: Option<usize>,
    },
    /// Packing curves of a sequence and its verdict.
    Sequence {
        spaces: Vec<SpaceSpec>,
        epsilon_grid: Vec<f64>,
        #[serde(default)]
        config: SequenceConfig,
        #[serde(default)]
        expect: Option<Verdict>,
        /// Writes the packing curves as CSV.
        #[serde(default)]
        csv: Option<PathBuf>,
    },
    /// Gromov-Hausdorff bounds between two spaces.
    Gh {
        x: SpaceSpec,
        y: SpaceSpec,
        #[serde(default = "default_effort")]
        effort: usize,
        #[serde(default)]
        max_upper: Option<f64>,
        #[serde(default)]
        min_lower: Option<f64>,
        /// The upper bound may not exceed that of this earlier gh step.
        #[serde(default)]
        upper_at_most_step: Option<usize>,
    },
    /// Restricted and intrinsic distance between two chart points.
    Probe {
        space: SpaceSpec,
        delta: f64,
        p: [f64; 2],
        q: [f64; 2],
        #[serde(default)]
        restricted: Option<f64>,
        #[serde(default)]
        min_intrinsic: Option<f64>,
        #[serde(default = "default_rel_tol")]
        rel_tol: f64,
    },
    /// Lower bound, exact value and upper bound on random small pairs.
    GhSandwich {
        pairs: usize,
        #[serde(default = "default_sandwich_points")]
        max_points: usize,
    },
    /// Measured cover of an inner region against the chain-counting bound.
    ChainCounting {
        space: SpaceSpec,
        delta: f64,
        epsilon: f64,
        m: u32,
        volume: f64,
        theta: f64,
        /// Expected intrinsic diameter of the inner region, within 3%.
        #[serde(default)]
        diameter: Option<f64>,
    },
    /// Builds and checks a glued space.
    Glue {
        tower: TowerSpec,
        /// Writes the glued space as JSON.
        #[serde(default)]
        out: Option<PathBuf>,
    },
    /// Glued ball about the spine origin of a bad-balls book tower against
    /// the truncated ambient ball.
    BookBall {
        heights: Vec<f64>,
        deltas: Vec<f64>,
        pitch: f64,
        epsilon: f64,
        level: usize,
    },
    /// Ball-growth exponent at the tracked point of a nonunique tower.
    Growth {
        depth: usize,
        embedding: PageEmbedding,
        x: f64,
        radii: Vec<f64>,
        #[serde(default)]
        min_exponent: Option<f64>,
        #[serde(default)]
        max_exponent: Option<f64>,
    },
    /// Inner-union estimate of the spline-disk sequence inside the disk
    /// with a unit segment.
    SplineUnion {
        js: Vec<u32>,
        deltas: Vec<f64>,
        h: f64,
        #[serde(default)]
        max_upper_disk: Option<f64>,
        #[serde(default)]
        min_lower_limit: Option<f64>,
    },
    /// Random instances of the containment and counting lemmas.
    Lemmas {
        cases: usize,
    },
}

fn default_effort() -> usize {
    400
}

fn default_rel_tol() -> f64 {
    0.03
}

fn default_sandwich_points() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub op: String,
    pub passed: bool,
    pub results: Value,
    pub checks: Vec<Check>,
}

fn positive(v: f64, what: &str) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{what} must be positive, got {v}"))
    }
}

fn decreasing(v: &[f64], what: &str) -> Result<(), String> {
    if v.is_empty() || v.iter().any(|d| !(*d > 0.0)) || v.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(format!("{what} must be positive and strictly decreasing"));
    }
    Ok(())
}

impl SpaceSpec {
    fn validate(&self) -> Result<(), String> {
        if let Some(p) = &self.family.plan {
            p.validate().map_err(|e| e.to_string())?;
        }
        if let Some(d) = self.inner {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(format!("inner must be nonnegative, got {d}"));
            }
            if self.family.domain().map_err(|e| e.to_string())?.is_none() {
                return Err("inner needs a sampled family".into());
            }
        }
        Ok(())
    }
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Area { .. } => "area",
            Step::Packing { .. } => "packing",
            Step::Sequence { .. } => "sequence",
            Step::Gh { .. } => "gh",
            Step::Probe { .. } => "probe",
            Step::GhSandwich { .. } => "gh_sandwich",
            Step::ChainCounting { .. } => "chain_counting",
            Step::Glue { .. } => "glue",
            Step::BookBall { .. } => "book_ball",
            Step::Growth { .. } => "growth",
            Step::SplineUnion { .. } => "spline_union",
            Step::Lemmas { .. } => "lemmas",
        }
    }

    /// Preconditions of the step's operation.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Step::Area { space, .. } => {
                space.validate()?;
                if space.family.domain().map_err(|e| e.to_string())?.is_none() {
                    return Err("area needs a sampled family".into());
                }
                Ok(())
            }
            Step::Packing { space, epsilon, .. } => {
                space.validate()?;
                positive(*epsilon, "epsilon")
            }
            Step::Sequence { spaces, epsilon_grid, .. } => {
                if spaces.len() < 3 {
                    return Err("a sequence needs at least 3 spaces".into());
                }
                spaces.iter().try_for_each(SpaceSpec::validate)?;
                if epsilon_grid.is_empty() {
                    return Err("epsilon grid is empty".into());
                }
                epsilon_grid.iter().try_for_each(|e| positive(*e, "epsilon"))
            }
            Step::Gh { x, y, .. } => {
                x.validate()?;
                y.validate()
            }
            Step::Probe { space, delta, rel_tol, .. } => {
                space.validate()?;
                if !(*delta >= 0.0) {
                    return Err("delta must be nonnegative".into());
                }
                positive(*rel_tol, "rel_tol")
            }
            Step::GhSandwich { pairs, max_points } => {
                if *pairs == 0 || !(1..=EXACT_MAX_POINTS).contains(max_points) {
                    return Err(format!("need pairs > 0 and max_points in 1..={EXACT_MAX_POINTS}"));
                }
                Ok(())
            }
            Step::ChainCounting { space, delta, epsilon, m, volume, theta, .. } => {
                space.validate()?;
                ChainCountingParams { m: *m, delta: *delta, epsilon: *epsilon, d_delta: 1.0, volume: *volume, theta: *theta }
                    .validate()
                    .map_err(|e| e.to_string())
            }
            Step::Glue { tower, .. } => match tower {
                TowerSpec::Annulus { deltas, h, .. } => {
                    decreasing(deltas, "deltas")?;
                    positive(*h, "h")
                }
                TowerSpec::BadBalls { heights, deltas, pitch } => {
                    decreasing(heights, "heights")?;
                    decreasing(deltas, "deltas")?;
                    positive(*pitch, "pitch")
                }
                TowerSpec::Nonunique { depth, .. } if !(2..=6).contains(depth) => Err("depth must lie in 2..=6".into()),
                _ => Ok(()),
            },
            Step::BookBall { heights, deltas, pitch, epsilon, level } => {
                decreasing(heights, "heights")?;
                decreasing(deltas, "deltas")?;
                positive(*pitch, "pitch")?;
                if *level == 0 || *level >= deltas.len() {
                    return Err(format!("level must lie in 1..{}", deltas.len()));
                }
                if !(*epsilon >= 0.0 && *epsilon < deltas[0] - deltas[*level]) {
                    return Err(format!("epsilon must lie in [0, {})", deltas[0] - deltas[*level]));
                }
                Ok(())
            }
            Step::Growth { depth, radii, .. } => {
                if !(2..=6).contains(depth) {
                    return Err("depth must lie in 2..=6".into());
                }
                if radii.len() < 2 {
                    return Err("need at least two radii".into());
                }
                radii.iter().try_for_each(|r| positive(*r, "radius"))
            }
            Step::SplineUnion { js, deltas, h, .. } => {
                if js.len() < 2 || js.iter().any(|&j| j < 2) {
                    return Err("need at least two indices j >= 2".into());
                }
                deltas.iter().try_for_each(|d| positive(*d, "delta"))?;
                positive(*h, "h")
            }
            Step::Lemmas { cases } if *cases == 0 => Err("cases must be positive".into()),
            Step::Lemmas { .. } => Ok(()),
        }
    }
}

/// A generated space and the indices kept from it.
struct Loaded {
    generated: Generated,
    points: Vec<usize>,
}

impl Loaded {
    fn new(spec: &SpaceSpec, seed: u64) -> Result<Self, String> {
        let mut family = spec.family.clone();
        family.plan = Some(family.plan_or_default().with_seed(seed));
        let generated = generate(&family).map_err(|e| e.to_string())?;
        let points = match (&generated, spec.inner) {
            (Generated::Sampled(s), Some(d)) => inner_region(s, d, false).points().to_vec(),
            (Generated::Restricted(r), _) => r.points.clone(),
            (g, _) => (0..g.len()).collect(),
        };
        if points.is_empty() {
            return Err("the space has no points".into());
        }
        Ok(Self { generated, points })
    }

    fn view(&self) -> Subspace<'_, f64> {
        let parent: &dyn MetricView<f64> = match &self.generated {
            Generated::Sampled(s) => s,
            Generated::Restricted(r) => &r.base,
            Generated::Exact(e) => &e.space,
        };
        restrict(parent, &self.points).expect("loaded indices are valid")
    }

    fn dense32(&self) -> FiniteMetricSpace<f32> {
        match &self.generated {
            Generated::Sampled(s) => restricted_dense(s, &self.points),
            Generated::Restricted(r) => restricted_dense(&r.base, &self.points),
            Generated::Exact(e) => e.space.cast(),
        }
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Random metric on `n` points: planar, or shortest paths of random weights.
fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace<f64> {
    if rng.gen_bool(0.5) {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)]).collect();
        return FiniteMetricSpace::from_planar(&pts);
    }
    let mut d = vec![vec![0.0f64; n]; n];
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
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    FiniteMetricSpace::from_fn(n, |i, j| d[i][j])
}

pub(super) fn execute(step: &Step, index: usize, seed: u64, earlier: &[StepReport]) -> Result<StepReport, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let mut checks = Vec::new();
    let results = match step {
        Step::Area { space, max_rel_err } => {
            let mut family = space.family.clone();
            family.plan = Some(family.plan_or_default().with_seed(seed));
            let domain = family.domain().map_err(|e| err(&e))?.ok_or("area needs a sampled family")?;
            let plan = family.plan_or_default();
            let s = sample_domain(&domain, &plan).map_err(|e| err(&e))?;
            let area = estimate_area(&s);
            let analytic = domain.analytic_area();
            let rel = analytic.map(|a| (area - a).abs() / a);
            if let Some(max) = max_rel_err {
                let ok = rel.is_some_and(|r| r <= *max);
                checks.push(check("relative_error", ok, format!("{rel:?} <= {max}")));
            }
            json!({"points": s.len(), "area": area, "analytic": analytic, "relative_error": rel})
        }
        Step::Packing { space, epsilon, min_count } => {
            let l = Loaded::new(space, seed)?;
            let p = greedy_packing(&l.view(), *epsilon, 0);
            if let Some(min) = min_count {
                checks.push(check("min_count", p.count >= *min, format!("{} >= {min}", p.count)));
            }
            json!({"points": l.points.len(), "epsilon": epsilon, "count": p.count})
        }
        Step::Sequence { spaces, epsilon_grid, config, expect, csv } => {
            let loaded = spaces.iter().map(|s| Loaded::new(s, seed)).collect::<Result<Vec<_>, _>>()?;
            let views: Vec<Subspace<'_, f64>> = loaded.iter().map(Loaded::view).collect();
            let refs: Vec<&Subspace<'_, f64>> = views.iter().collect();
            let diag = sequence_diagnostics(&refs, epsilon_grid, config).map_err(|e| err(&e))?;
            if let Some(path) = csv {
                let file = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
                diag.write_csv(file).map_err(|e| err(&e))?;
            }
            if let Some(v) = expect {
                checks.push(check("verdict", diag.verdict == *v, format!("{:?}, expected {v:?}", diag.verdict)));
            }
            serde_json::to_value(&diag).map_err(|e| err(&e))?
        }
        Step::Gh { x, y, effort, max_upper, min_lower, upper_at_most_step } => {
            let a = Loaded::new(x, seed)?.dense32();
            let b = Loaded::new(y, seed)?.dense32();
            let up = gh_upper_bound(&a, &b, *effort).map_err(|e| err(&e))?.value;
            let lo = gh_lower_bound(&a, &b).map_err(|e| err(&e))?;
            if let Some(max) = max_upper {
                checks.push(check("max_upper", up <= *max, format!("{up} <= {max}")));
            }
            if let Some(min) = min_lower {
                checks.push(check("min_lower", lo.value >= *min, format!("{} >= {min}", lo.value)));
            }
            if let Some(k) = upper_at_most_step {
                let prev = earlier[*k].results["upper"].as_f64().ok_or("earlier step has no upper bound")?;
                checks.push(check("upper_at_most_step", up <= prev, format!("{up} <= {prev} (step {k})")));
            }
            json!({"x_points": a.len(), "y_points": b.len(), "upper": up, "lower": lo.value, "lower_method": lo.method})
        }
        Step::Probe { space, delta, p, q, restricted, min_intrinsic, rel_tol } => {
            let l = Loaded::new(&SpaceSpec { family: space.family.clone(), inner: None }, seed)?;
            let Generated::Sampled(s) = &l.generated else {
                return Err("probe needs a sampled family".into());
            };
            let (d_m, d_inner) = restricted_vs_intrinsic_probe(s, *delta, *p, *q).map_err(|e| err(&e))?;
            if let Some(want) = restricted {
                let rel = (d_m - want).abs() / want.abs().max(f64::MIN_POSITIVE);
                checks.push(check("restricted", rel <= *rel_tol, format!("{d_m} vs {want}, relative {rel}")));
            }
            if let Some(min) = min_intrinsic {
                let floor = min * (1.0 - rel_tol);
                checks.push(check("min_intrinsic", d_inner >= floor, format!("{d_inner} >= {floor}")));
            }
            json!({"restricted": d_m, "intrinsic": d_inner})
        }
        Step::GhSandwich { pairs, max_points } => {
            let mut rng = rng_for(seed, index);
            let mut worst_gap = f64::INFINITY;
            let mut violations = 0;
            for _ in 0..*pairs {
                let (n, m) = (rng.gen_range(1..=*max_points), rng.gen_range(1..=*max_points));
                let x = random_metric(&mut rng, n);
                let y = random_metric(&mut rng, m);
                let lo = gh_lower_bound(&x, &y).map_err(|e| err(&e))?.value;
                let ex = gh_exact_small(&x, &y).map_err(|e| err(&e))?;
                let up = gh_upper_bound(&x, &y, 50).map_err(|e| err(&e))?.value;
                if !(lo <= ex + 1e-12 && ex <= up + 1e-12) {
                    violations += 1;
                }
                worst_gap = worst_gap.min((ex - lo).min(up - ex));
            }
            let two = gh_exact_small(&FiniteMetricSpace::from_line(&[0.0, 1.0]), &FiniteMetricSpace::from_line(&[0.0, 2.0]))
                .map_err(|e| err(&e))?;
            checks.push(check("sandwich", violations == 0, format!("{violations} of {pairs} pairs out of order")));
            checks.push(check("two_point_exact", two == 0.5, format!("{two} == 0.5")));
            json!({"pairs": pairs, "violations": violations, "two_point_exact": two})
        }
        Step::ChainCounting { space, delta, epsilon, m, volume, theta, diameter } => {
            let l = Loaded::new(&SpaceSpec { family: space.family.clone(), inner: None }, seed)?;
            let Generated::Sampled(s) = &l.generated else {
                return Err("chain counting needs a sampled family".into());
            };
            let inner = inner_region(s, *delta, true);
            let d_delta = intrinsic_diameter(&inner).map_err(|e| err(&e))?;
            if let Some(want) = diameter {
                let rel = (d_delta - want).abs() / want;
                checks.push(check("diameter", rel <= 0.03, format!("{d_delta} vs {want}, relative {rel}")));
            }
            let cover = covering_from_packing(inner.intrinsic().map_err(|e| err(&e))?, *epsilon);
            let p = ChainCountingParams { m: *m, delta: *delta, epsilon: *epsilon, d_delta, volume: *volume, theta: *theta };
            let bound = chain_counting_bound(&p).map_err(|e| err(&e))?;
            checks.push(check("cover_verified", cover.verified, format!("cover radius {}", cover.cover_radius)));
            checks.push(check("count_within_bound", bound.bounds(cover.count), format!("{} <= {bound}", cover.count)));
            let monotone = [
                ChainCountingParams { volume: p.volume * 2.0, ..p },
                ChainCountingParams { d_delta: p.d_delta * 1.5, ..p },
            ]
            .iter()
            .all(|q| chain_counting_bound(q).is_ok_and(|b| b.log10 >= bound.log10))
                && [ChainCountingParams { theta: p.theta * 2.0, ..p }, ChainCountingParams { epsilon: p.epsilon / 2.0, ..p }]
                    .iter()
                    .enumerate()
                    .all(|(k, q)| chain_counting_bound(q).is_ok_and(|b| if k == 0 { b.log10 <= bound.log10 } else { b.log10 >= bound.log10 }));
            checks.push(check("monotone", monotone, "in volume, diameter, theta and epsilon".into()));
            json!({"inner_points": inner.len(), "d_delta": d_delta, "cover_count": cover.count, "bound_log10": bound.log10})
        }
        Step::Glue { tower, out } => {
            let t = match tower {
                TowerSpec::Annulus { deltas, h, connect_factor } => {
                    let plan = SamplePlan::new(*h).with_connect_factor(connect_factor.unwrap_or(2.2)).with_seed(seed);
                    annulus_tower(deltas, &plan).map_err(|e| err(&e))?
                }
                TowerSpec::BadBalls { heights, deltas, pitch } => {
                    bad_balls_tower(heights, deltas, *pitch).map_err(|e| err(&e))?.tower
                }
                TowerSpec::Nonunique { depth, embedding } => nonunique_tower(*depth, *embedding).map_err(|e| err(&e))?.tower,
                TowerSpec::File { path } => {
                    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                    let doc: TowerJson = serde_json::from_str(&text).map_err(|e| err(&e))?;
                    tower_from_json(doc, path.parent()).map_err(|e| err(&e))?
                }
            };
            let report = validate_tower(&t);
            checks.push(check("tower", report.passed(), format!("{} violations", report.violations.len())));
            let g = build_glued(&t).map_err(|e| err(&e))?;
            let valid = g.metric.validate(3.0 * t.tol);
            checks.push(check("metric", valid.passed(), format!("triangle tolerance {}", 3.0 * t.tol)));
            let mut worst: f64 = 0.0;
            let mut strata_ok = true;
            for level in 0..t.depth() {
                let r = embed_stratum(&g, level).map_err(|e| err(&e))?;
                worst = worst.max(r.isometry.max_distortion);
                strata_ok &= r.isometry.max_distortion <= t.tol && r.nested && r.coherent;
            }
            checks.push(check("strata", strata_ok, format!("worst F distortion {worst}")));
            let last = t.depth() - 1;
            let onto = g.f_maps[last].iter().copied().collect::<BTreeSet<_>>().len() == g.len();
            let iso = is_isometric_embedding(&t.spaces[last], &g.metric, &g.f_maps[last], 0.0).map_err(|e| err(&e))?;
            checks.push(check(
                "collapse",
                onto && iso.max_distortion == 0.0,
                format!("onto {onto}, distortion {}", iso.max_distortion),
            ));
            if let Some(path) = out {
                let text = serde_json::to_string(&glued_to_json(&g)).map_err(|e| err(&e))?;
                std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            json!({
                "levels": t.depth(),
                "points": g.len(),
                "strata": g.strata.iter().map(Vec::len).collect::<Vec<_>>(),
                "merged": g.merged.len(),
                "tower_distortion": report.worst_distortion,
                "worst_f_distortion": worst,
            })
        }
        Step::BookBall { heights, deltas, pitch, epsilon, level } => {
            let t = bad_balls_tower(heights, deltas, *pitch).map_err(|e| err(&e))?;
            let g = build_glued(&t.tower).map_err(|e| err(&e))?;
            let origin = t.lattices[0].index_of((0, 0, 0)).ok_or("no spine origin")?;
            let ball = glued_ball(&g, (0, origin), *epsilon, *level).map_err(|e| err(&e))?;
            let got: BTreeSet<(usize, i64, i64)> = ball
                .members
                .iter()
                .map(|&m| {
                    let (l, i) = g.origin[m];
                    t.lattices[*level].keys[t.tower.push(l, i, *level)]
                })
                .collect();
            let ambient = book_lattice(heights, *pitch).map_err(|e| err(&e))?;
            let d = deltas[*level];
            let o = BookPoint::new(0, 0.0, 0.0);
            let (mut want, mut thin) = (BTreeSet::new(), 0usize);
            for k in 0..ambient.len() {
                let p = ambient.point(k);
                if book_distance(heights, o, p).map_err(|e| err(&e))? > epsilon + 1e-12 {
                    continue;
                }
                let h = heights[p.page];
                if p.x > 0.0 && h < d {
                    thin += 1;
                }
                if h > d && p.y <= h - d + 1e-12 {
                    want.insert(ambient.keys[k]);
                }
            }
            checks.push(check("ambient_has_thin_pages", thin > 0, format!("{thin} ambient points on thin pages")));
            checks.push(check("exact_set", got == want, format!("{} members, {} expected", got.len(), want.len())));
            json!({"members": got.len(), "expected": want.len(), "ambient_thin": thin})
        }
        Step::Growth { depth, embedding, x, radii, min_exponent, max_exponent } => {
            let t = nonunique_tower(*depth, *embedding).map_err(|e| err(&e))?;
            let g = build_glued(&t.tower).map_err(|e| err(&e))?;
            let y = tracked_point(&t, *x).ok_or("tracked point is not on the first page")?;
            let fit = ball_growth_exponent(&g.metric, g.f_maps[0][y], radii).map_err(|e| err(&e))?;
            if let Some(min) = min_exponent {
                checks.push(check("min_exponent", fit.exponent >= *min, format!("{} >= {min}", fit.exponent)));
            }
            if let Some(max) = max_exponent {
                checks.push(check("max_exponent", fit.exponent <= *max, format!("{} <= {max}", fit.exponent)));
            }
            serde_json::to_value(&fit).map_err(|e| err(&e))?
        }
        Step::SplineUnion { js, deltas, h, max_upper_disk, min_lower_limit } => {
            let plan = SamplePlan::new(*h).with_seed(seed);
            let x = disk_with_segment(1.0, &plan).map_err(|e| err(&e))?;
            let samples = js
                .iter()
                .map(|&j| {
                    let spec = spline_disk(1.0 / j as f64, 1.0).map_err(|e| err(&e))?;
                    sample_domain(&spec, &plan).map_err(|e| err(&e))
                })
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
            let est = inner_union_estimate(&x.space, &scales, *h, None).map_err(|e| err(&e))?;
            let est_space = restrict(&x.space, &est.points).map_err(|e| err(&e))?.materialize();
            let disk = sample_domain(&DomainSpec::disk(1.0), &plan).map_err(|e| err(&e))?;
            let up = gh_upper_bound(&est_space, disk.dense(), 200).map_err(|e| err(&e))?.value;
            let lo = gh_lower_bound(&est_space, &x.space).map_err(|e| err(&e))?.value;
            let on_segment = est.points.iter().filter(|&&i| i >= x.disk_points).count();
            if let Some(max) = max_upper_disk {
                checks.push(check("close_to_disk", up <= *max, format!("{up} <= {max}")));
            }
            if let Some(min) = min_lower_limit {
                checks.push(check("far_from_limit", lo >= *min, format!("{lo} >= {min}")));
            }
            json!({"points": est.points.len(), "on_segment": on_segment, "upper_to_disk": up, "lower_to_limit": lo, "disk_area": PI})
        }
        Step::Lemmas { cases } => {
            let mut rng = rng_for(seed, index);
            let mut counts = serde_json::Map::new();
            let suites: [(&str, fn(&mut ChaCha8Rng) -> Result<(), String>); 4] = [
                ("hausdorff_balls", lemmas::check_hausdorff_balls),
                ("ball_in_inner_region", lemmas::check_ball_in_inner_region),
                ("exhaustion", lemmas::check_exhaustion),
                ("packing_covering", lemmas::check_packing_covering),
            ];
            for (name, f) in suites {
                let mut failures = Vec::new();
                for case in 0..*cases {
                    if let Err(e) = f(&mut rng) {
                        failures.push(format!("case {case}: {e}"));
                    }
                }
                checks.push(check(name, failures.is_empty(), failures.first().cloned().unwrap_or_default()));
                counts.insert(name.to_string(), json!({"cases": cases, "failures": failures.len()}));
            }
            Value::Object(counts)
        }
    };
    Ok(StepReport { index, op: step.name().to_string(), passed: checks.iter().all(|c| c.passed), results, checks })
}
