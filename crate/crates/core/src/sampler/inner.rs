use std::borrow::Cow;
use std::sync::OnceLock;

use super::{SampleError, SampledSpace};
use crate::graph::{to_dense, Graph, GraphMetric};
use crate::metric::{diameter, restrict, FiniteMetricSpace, MetricView, Subspace};

/// Shortest-path metric of the subgraph induced on an inner region.
#[derive(Clone, Debug)]
pub struct IntrinsicMetric {
    graph: Graph,
}

impl IntrinsicMetric {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn to_dense(&self) -> FiniteMetricSpace<f64> {
        to_dense(&GraphMetric::new(&self.graph))
    }
}

impl MetricView<f64> for IntrinsicMetric {
    fn len(&self) -> usize {
        self.graph.len()
    }

    fn row(&self, i: usize) -> Cow<'_, [f64]> {
        Cow::Owned(self.graph.dijkstra(&[(i, 0.0)], None, None))
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.graph.dijkstra(&[(i, 0.0)], None, Some(&[j]))[j]
    }

    fn dists_to(&self, i: usize, targets: &[usize]) -> Vec<f64> {
        let d = self.graph.dijkstra(&[(i, 0.0)], None, Some(targets));
        targets.iter().map(|&t| d[t]).collect()
    }
}

/// The points of a sampled space at boundary distance greater than `delta`.
pub struct InnerRegionResult<'a> {
    source: &'a SampledSpace,
    delta: f64,
    points: Vec<usize>,
    components: Vec<usize>,
    component_count: usize,
    intrinsic: Option<IntrinsicMetric>,
    diameter: OnceLock<f64>,
}

impl<'a> InnerRegionResult<'a> {
    pub fn source(&self) -> &'a SampledSpace {
        self.source
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Retained sample indices, increasing.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The retained points with the restricted metric of the full space.
    pub fn subspace(&self) -> Subspace<'_, f64> {
        restrict(self.source, &self.points).expect("inner points are valid indices")
    }

    /// Component label of each retained point, in `points` order.
    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn intrinsic(&self) -> Result<&IntrinsicMetric, SampleError> {
        self.intrinsic.as_ref().ok_or(SampleError::IntrinsicNotComputed)
    }
}

/// Keeps exactly the samples with `boundary_dist > delta`.
pub fn inner_region(space: &SampledSpace, delta: f64, want_intrinsic: bool) -> InnerRegionResult<'_> {
    let points: Vec<usize> = (0..space.len()).filter(|&i| space.boundary_dist()[i] > delta).collect();
    let graph = space.graph().induced(&points);
    let (components, component_count) = graph.components(None);
    InnerRegionResult {
        source: space,
        delta,
        points,
        components,
        component_count,
        intrinsic: want_intrinsic.then_some(IntrinsicMetric { graph }),
        diameter: OnceLock::new(),
    }
}

/// Largest intrinsic distance; `+inf` across components, 0 for at most one
/// point. Computed once and cached.
pub fn intrinsic_diameter(result: &InnerRegionResult<'_>) -> Result<f64, SampleError> {
    let metric = result.intrinsic()?;
    Ok(*result.diameter.get_or_init(|| {
        if result.len() <= 1 {
            0.0
        } else if result.component_count > 1 {
            f64::INFINITY
        } else {
            diameter(metric)
        }
    }))
}

/// Restricted and intrinsic distances between the inner-region samples
/// nearest to `p` and `q` (chart coordinates).
pub fn restricted_vs_intrinsic_probe(
    space: &SampledSpace,
    delta: f64,
    p: [f64; 2],
    q: [f64; 2],
) -> Result<(f64, f64), SampleError> {
    let resolve = |c: [f64; 2]| -> Result<usize, SampleError> {
        match space.nearest(c) {
            Some((i, d)) if d <= space.plan().connect_radius && space.boundary_dist()[i] > delta => Ok(i),
            _ => Err(SampleError::PointNotInInnerRegion { x: c[0], y: c[1] }),
        }
    };
    let (a, b) = (resolve(p)?, resolve(q)?);
    let g = space.graph();
    let d_m = g.dijkstra(&[(a, 0.0)], None, Some(&[b]))[b];
    let mask: Vec<bool> = space.boundary_dist().iter().map(|&d| d > delta).collect();
    let d_inner = g.dijkstra(&[(a, 0.0)], Some(&mask), Some(&[b]))[b];
    Ok((d_m, d_inner))
}
