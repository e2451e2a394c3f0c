use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::graph::{to_dense, Graph, GraphMetric};
use crate::metric::{FiniteMetricSpace, MetricView};
use crate::sampler::{sample_domain, DomainSpec, RadialProfile, SamplePlan, SampledSpace, Shape};
use crate::scalar::Scalar;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), GalleryError> {
    if ok {
        Ok(())
    } else {
        Err(GalleryError::InvalidFamilyParams(msg.into()))
    }
}

/// `j`-sheeted cover of the annulus `r_inner < r < 1`, with `r_inner = 1/j`
/// unless given.
pub fn gold_foils(j: u32, r_inner: Option<f64>) -> Result<DomainSpec, GalleryError> {
    check(j >= 1, "j must be at least 1")?;
    let r = r_inner.unwrap_or(1.0 / j as f64);
    check(r > 0.0 && r < 1.0, "inner radius must lie in (0, 1)")?;
    Ok(DomainSpec::MultiSheetPolar { sheets: j, r_inner: r, r_outer: 1.0 })
}

/// `1 < r < 3 + cos(j theta)`: an annulus with `j` splines reaching `r = 4`.
pub fn many_splines(j: u32) -> Result<DomainSpec, GalleryError> {
    check(j >= 1, "j must be at least 1")?;
    Ok(DomainSpec::PolarBand {
        r_inner: RadialProfile::constant(1.0),
        r_outer: RadialProfile::Cosine { base: 3.0, amp: 1.0, freq: j as f64 },
        sheets: 1,
    })
}

/// Unit disk with an isosceles spike of base `width` on the circle and apex
/// at `(1 + length, 0)`.
pub fn spline_disk(width: f64, length: f64) -> Result<DomainSpec, GalleryError> {
    check(width > 0.0 && width < 1.0, "spline width must lie in (0, 1)")?;
    check(length > 0.0 && length.is_finite(), "spline length must be positive")?;
    let xb = (1.0 - width * width / 4.0).sqrt();
    let spike = Shape::Polygon { points: vec![[xb, -width / 2.0], [1.0 + length, 0.0], [xb, width / 2.0]] };
    Ok(DomainSpec::PlanarRegion { parts: vec![Shape::disk(0.0, 0.0, 1.0), spike], holes: vec![] })
}

/// Width of the `j`-th spline: `4 eps` for even `j`, `6 eps - 2 eps (1 - 1/j)`
/// for odd `j`.
pub fn no_diag_width(j: u32, eps_hat: f64) -> f64 {
    if j % 2 == 0 {
        4.0 * eps_hat
    } else {
        6.0 * eps_hat - 2.0 * eps_hat * (1.0 - 1.0 / j as f64)
    }
}

/// Unit disk with a straight spline `[0, 2] x [-w/2, w/2]`.
pub fn no_diag(j: u32, eps_hat: f64) -> Result<DomainSpec, GalleryError> {
    check(j >= 1, "j must be at least 1")?;
    check(eps_hat > 0.0 && eps_hat < 1.0 / 3.0, "eps_hat must lie in (0, 1/3)")?;
    let w = no_diag_width(j, eps_hat);
    Ok(DomainSpec::PlanarRegion {
        parts: vec![Shape::disk(0.0, 0.0, 1.0), Shape::rect(0.0, -w / 2.0, 2.0, w / 2.0)],
        holes: vec![],
    })
}

/// Disk of radius 4 with splines `r < 4 + sin(4 pi^2 / theta)` for
/// `theta > 2 pi / j`.
pub fn decreasing_splines(j: u32) -> Result<DomainSpec, GalleryError> {
    check(j >= 1, "j must be at least 1")?;
    let cut = 2.0 * PI / j as f64;
    Ok(DomainSpec::PolarBand {
        r_inner: RadialProfile::constant(0.0),
        r_outer: RadialProfile::Piecewise {
            pieces: vec![
                (cut, RadialProfile::constant(4.0)),
                (f64::INFINITY, RadialProfile::SinInverse { base: 4.0, amp: 1.0, coef: 4.0 * PI * PI }),
            ],
        },
        sheets: 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(j: u32) -> Self {
        if j % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// The F-shaped region with a stem of width `1/j`; tiny holes of spacing
/// `1/j` and radius `1/(5j)` fill the lower arm (even) or the upper arm (odd).
pub fn f_region(j: u32, parity: Parity) -> Result<DomainSpec, GalleryError> {
    check(j >= 1, "j must be at least 1")?;
    let s = 1.0 / j as f64;
    let (y0, y1) = match parity {
        Parity::Even => (0.0, 1.0),
        Parity::Odd => (2.0, 3.0),
    };
    let mut holes = Vec::new();
    let n = (2.0 / s).round() as usize;
    let m = (1.0 / s).round() as usize;
    for a in 0..n {
        for b in 0..m {
            holes.push(Shape::disk(1.0 + (a as f64 + 0.5) * s, y0 + (b as f64 + 0.5) * s, s / 5.0));
        }
    }
    debug_assert!(holes.iter().all(|h| h.bbox()[3] <= y1));
    Ok(DomainSpec::CompositeRectangles {
        rects: vec![[0.0, -1.0, s, 0.0], [0.0, 0.0, 1.0, 3.0], [1.0, 0.0, 3.0, 1.0], [1.0, 2.0, 3.0, 3.0]],
        holes,
        periodic: false,
    })
}

/// The limit of the F-regions: the F without stem or holes.
pub fn f_limit() -> DomainSpec {
    DomainSpec::CompositeRectangles {
        rects: vec![[0.0, 0.0, 1.0, 3.0], [1.0, 0.0, 3.0, 1.0], [1.0, 2.0, 3.0, 3.0]],
        holes: vec![],
        periodic: false,
    }
}

/// Union of the radius-5 disks about `(4, 0)` and `(-4, 0)`.
pub fn two_balls() -> DomainSpec {
    DomainSpec::PlanarRegion { parts: vec![Shape::disk(4.0, 0.0, 5.0), Shape::disk(-4.0, 0.0, 5.0)], holes: vec![] }
}

/// Planar annulus `r1 < |p| < r2`, in Cartesian coordinates.
pub fn annulus(r1: f64, r2: f64) -> Result<DomainSpec, GalleryError> {
    check(r1 > 0.0 && r1 < r2 && r2.is_finite(), "need 0 < r1 < r2")?;
    Ok(DomainSpec::PlanarRegion { parts: vec![Shape::disk(0.0, 0.0, r2)], holes: vec![Shape::disk(0.0, 0.0, r1)] })
}

/// `[-1,1] x [-1,0]` with two towers `[-1,-1/2] x [0,1]` and `[1/2,1] x [0,1]`.
pub fn not_length() -> DomainSpec {
    DomainSpec::CompositeRectangles {
        rects: vec![[-1.0, -1.0, 1.0, 0.0], [-1.0, 0.0, -0.5, 1.0], [0.5, 0.0, 1.0, 1.0]],
        holes: vec![],
        periodic: false,
    }
}

/// Some points of a sampled space, keeping the metric of the whole sample.
#[derive(Debug)]
pub struct RestrictedSample {
    pub base: SampledSpace,
    /// Base indices, increasing.
    pub points: Vec<usize>,
}

impl RestrictedSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dense restricted metric, one early-stopping shortest-path sweep per
    /// point.
    pub fn dense<U: Scalar>(&self) -> FiniteMetricSpace<U> {
        restricted_dense(&self.base, &self.points)
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|&i| self.base.coords()[i]).collect()
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|&i| [self.base.positions()[i][0], self.base.positions()[i][1]]).collect()
    }
}

/// Dense metric of `points` restricted from the geodesic graph of `space`.
pub fn restricted_dense<U: Scalar>(space: &SampledSpace, points: &[usize]) -> FiniteMetricSpace<U> {
    let n = points.len();
    let mut flat = vec![U::zero(); n * n];
    for (a, &p) in points.iter().enumerate() {
        let targets = &points[a + 1..];
        if targets.is_empty() {
            continue;
        }
        let d = space.graph().dijkstra(&[(p, 0.0)], None, Some(targets));
        for (k, &t) in targets.iter().enumerate() {
            let v = U::lit(d[t]);
            flat[a * n + a + 1 + k] = v;
            flat[(a + 1 + k) * n + a] = v;
        }
    }
    FiniteMetricSpace::from_flat_unchecked(n, flat)
}

/// The band `1 + delta < r < 2 - delta` of a sampled annulus `1 < r < 2`,
/// with the metric of the full annulus.
pub fn ann_reference(delta: f64, plan: &SamplePlan) -> Result<RestrictedSample, GalleryError> {
    check(delta >= 0.0 && delta < 0.5, "delta must lie in [0, 1/2)")?;
    let base = sample_domain(&DomainSpec::annulus(1.0, 2.0), plan)?;
    let points = (0..base.len())
        .filter(|&i| {
            let r = base.coords()[i][0];
            r > 1.0 + delta && r < 2.0 - delta
        })
        .collect();
    Ok(RestrictedSample { base, points })
}

/// A closed unit disk with the segment `[1, 1 + length] x {0}` attached at
/// `(1, 0)`, as one geodesic graph.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskWithSegment {
    pub space: FiniteMetricSpace<f64>,
    pub coords: Vec<[f64; 2]>,
    /// Indices below this are disk samples; the rest lie on the segment.
    pub disk_points: usize,
    pub segment_step: f64,
}

pub fn disk_with_segment(length: f64, plan: &SamplePlan) -> Result<DiskWithSegment, GalleryError> {
    check(length > 0.0 && length.is_finite(), "segment length must be positive")?;
    let disk = sample_domain(&DomainSpec::disk(1.0), plan)?;
    let nd = disk.len();
    let steps = (length / plan.h).ceil() as usize;
    let step = length / steps as f64;
    let mut coords: Vec<[f64; 2]> = disk.coords().to_vec();
    coords.extend((0..=steps).map(|k| [1.0 + k as f64 * step, 0.0]));
    let mut edges = Vec::new();
    for v in 0..nd {
        edges.extend(disk.graph().neighbors(v).filter(|&(w, _)| w > v).map(|(w, d)| (v, w, d)));
    }
    for k in 0..steps {
        edges.push((nd + k, nd + k + 1, step));
    }
    // attach the segment foot to the nearby disk samples
    for (v, c) in disk.coords().iter().enumerate() {
        let d = (c[0] - 1.0).hypot(c[1]);
        if d <= plan.connect_radius {
            edges.push((v, nd, d));
        }
    }
    let g = Graph::from_edges(coords.len(), &edges);
    Ok(DiskWithSegment { space: to_dense(&GraphMetric::new(&g)), coords, disk_points: nd, segment_step: step })
}

impl DiskWithSegment {
    /// Nearest disk sample for points of the disk, nearest segment node for
    /// points beyond the circle near the axis.
    pub fn project(&self, p: [f64; 2]) -> usize {
        if p[0].hypot(p[1]) > 1.0 && p[0] > 1.0 {
            let k = ((p[0] - 1.0) / self.segment_step).round() as usize;
            return self.disk_points + k.min(self.coords.len() - 1 - self.disk_points);
        }
        (0..self.disk_points)
            .min_by(|&a, &b| {
                let da = (self.coords[a][0] - p[0]).hypot(self.coords[a][1] - p[1]);
                let db = (self.coords[b][0] - p[0]).hypot(self.coords[b][1] - p[1]);
                da.total_cmp(&db)
            })
            .expect("disk sample is nonempty")
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
}

/// Geodesic distance between the samples nearest to two chart points.
pub fn sampled_distance(space: &SampledSpace, p: [f64; 2], q: [f64; 2]) -> Option<f64> {
    let (a, _) = space.nearest(p)?;
    let (b, _) = space.nearest(q)?;
    Some(space.dist(a, b))
}
