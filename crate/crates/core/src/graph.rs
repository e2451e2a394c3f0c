//! Weighted undirected graphs in CSR form and shortest-path sweeps.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::metric::{FiniteMetricSpace, MetricView};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    nbrs: Vec<u32>,
    weights: Vec<f64>,
}

#[derive(Copy, Clone, PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties by index for determinism
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Graph {
    /// Builds from undirected edges `(a, b, w)`. Duplicate edges keep the
    /// lighter weight.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for &(a, b, w) in edges {
            if a == b {
                continue;
            }
            adj[a].push((b as u32, w));
            adj[b].push((a as u32, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in &mut adj {
            list.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
            list.dedup_by_key(|e| e.0);
            for &(b, w) in list.iter() {
                nbrs.push(b);
                weights.push(w);
            }
            offsets.push(nbrs.len());
        }
        Self { offsets, nbrs, weights }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.nbrs[r.clone()].iter().zip(&self.weights[r]).map(|(&b, &w)| (b as usize, w))
    }

    /// Multi-source shortest paths. `sources` carry start offsets; nodes
    /// outside `mask` are never entered. Stops early once every node in
    /// `targets` is settled.
    pub fn dijkstra(&self, sources: &[(usize, f64)], mask: Option<&[bool]>, targets: Option<&[usize]>) -> Vec<f64> {
        let n = self.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        let allowed = |v: usize| mask.map_or(true, |m| m[v]);
        let mut pending = match targets {
            Some(t) => {
                let mut want = vec![false; n];
                let mut k = 0;
                for &v in t {
                    if !want[v] && allowed(v) {
                        want[v] = true;
                        k += 1;
                    }
                }
                Some((want, k))
            }
            None => None,
        };
        let mut heap = BinaryHeap::new();
        for &(s, d0) in sources {
            if allowed(s) && d0 < dist[s] {
                dist[s] = d0;
                heap.push(Entry(d0, s as u32));
            }
        }
        while let Some(Entry(d, v)) = heap.pop() {
            let v = v as usize;
            if done[v] {
                continue;
            }
            done[v] = true;
            if let Some((want, k)) = pending.as_mut() {
                if want[v] {
                    *k -= 1;
                    if *k == 0 {
                        break;
                    }
                }
            }
            for (u, w) in self.neighbors(v) {
                if done[u] || !allowed(u) {
                    continue;
                }
                let nd = d + w;
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Entry(nd, u as u32));
                }
            }
        }
        if pending.is_some() {
            // unsettled tentative values are not final
            for v in 0..n {
                if !done[v] {
                    dist[v] = f64::INFINITY;
                }
            }
        }
        dist
    }

    /// Connected component label per node; `usize::MAX` outside `mask`.
    pub fn components(&self, mask: Option<&[bool]>) -> (Vec<usize>, usize) {
        let n = self.len();
        let allowed = |v: usize| mask.map_or(true, |m| m[v]);
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX || !allowed(s) {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for (u, _) in self.neighbors(v) {
                    if label[u] == usize::MAX && allowed(u) {
                        label[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Induced subgraph on `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut local = vec![u32::MAX; self.len()];
        for (k, &v) in keep.iter().enumerate() {
            local[v] = k as u32;
        }
        let mut edges = Vec::new();
        for (k, &v) in keep.iter().enumerate() {
            for (u, w) in self.neighbors(v) {
                let lu = local[u];
                if lu != u32::MAX && (lu as usize) > k {
                    edges.push((k, lu as usize, w));
                }
            }
        }
        Graph::from_edges(keep.len(), &edges)
    }
}

/// Shortest-path metric of a graph, one Dijkstra sweep per row.
///
/// Distances between different components are `+inf`.
#[derive(Clone, Copy)]
pub struct GraphMetric<'a> {
    graph: &'a Graph,
}

impl<'a> GraphMetric<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        Self { graph }
    }
}

impl MetricView<f64> for GraphMetric<'_> {
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

/// Copies any view into a dense matrix of scalar `U`, row by row.
pub fn to_dense<U: Scalar, V: MetricView<f64> + ?Sized>(view: &V) -> FiniteMetricSpace<U> {
    let n = view.len();
    let mut flat = Vec::with_capacity(n * n);
    for i in 0..n {
        flat.extend(view.row(i).iter().map(|&d| U::lit(d)));
    }
    // symmetrize against float noise from separate sweeps
    for i in 0..n {
        for j in (i + 1)..n {
            let m = if flat[i * n + j] < flat[j * n + i] { flat[i * n + j] } else { flat[j * n + i] };
            flat[i * n + j] = m;
            flat[j * n + i] = m;
        }
    }
    FiniteMetricSpace::from_flat_unchecked(n, flat)
}
