use std::collections::HashMap;

use crate::graph::Graph;

/// One sample: chart coordinates, embedded position and cell weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Site {
    pub chart: [f64; 2],
    pub pos: [f64; 3],
    pub area: f64,
    pub piece: u32,
}

/// Geometry hooks the generic graph builder needs from a domain.
pub(crate) trait Region {
    fn interior(&self, h: f64, seed: u64) -> Vec<Site>;

    fn boundary(&self, step: f64) -> Vec<Site>;

    /// Whether the straight segment between two nearby sites stays in the
    /// domain. Only called for pairs within the connect radius.
    fn segment_ok(&self, a: &Site, b: &Site) -> bool;

    /// Periods in x and y for wrapped domains.
    fn period(&self) -> Option<[f64; 2]> {
        None
    }
}

pub(crate) struct Assembly {
    pub graph: Graph,
    /// `(interior node, distance)` for every interior/boundary adjacency.
    pub boundary_links: Vec<(usize, f64)>,
}

fn displacement(a: &[f64; 3], b: &[f64; 3], period: Option<[f64; 2]>) -> f64 {
    let mut dx = a[0] - b[0];
    let mut dy = a[1] - b[1];
    let dz = a[2] - b[2];
    if let Some(p) = period {
        dx -= p[0] * (dx / p[0]).round();
        dy -= p[1] * (dy / p[1]).round();
    }
    (dx * dx + dy * dy + dz * dz).sqrt()
}

struct CellIndex {
    size: [f64; 3],
    cells: HashMap<(i64, i64, i64), Vec<u32>>,
    wrap: Option<[i64; 2]>,
}

impl CellIndex {
    fn new(sites: &[Site], size: f64, period: Option<[f64; 2]>) -> Self {
        // periodic axes use cells that tile the period exactly; positions
        // are expected in [0, period)
        let wrap = period.map(|p| [((p[0] / size).floor() as i64).max(1), ((p[1] / size).floor() as i64).max(1)]);
        let cell = match (period, wrap) {
            (Some(p), Some(w)) => [p[0] / w[0] as f64, p[1] / w[1] as f64, size],
            _ => [size; 3],
        };
        let mut idx = Self { size: cell, cells: HashMap::new(), wrap };
        for (k, s) in sites.iter().enumerate() {
            let key = idx.key(&s.pos);
            idx.cells.entry(key).or_default().push(k as u32);
        }
        idx
    }

    fn key(&self, p: &[f64; 3]) -> (i64, i64, i64) {
        let mut k = (
            (p[0] / self.size[0]).floor() as i64,
            (p[1] / self.size[1]).floor() as i64,
            (p[2] / self.size[2]).floor() as i64,
        );
        if let Some(w) = self.wrap {
            k.0 = k.0.rem_euclid(w[0]);
            k.1 = k.1.rem_euclid(w[1]);
        }
        k
    }

    fn near(&self, p: &[f64; 3], mut f: impl FnMut(usize)) {
        let c = self.key(p);
        let mut seen: Vec<(i64, i64, i64)> = Vec::with_capacity(27);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let mut k = (c.0 + dx, c.1 + dy, c.2 + dz);
                    if let Some(w) = self.wrap {
                        k.0 = k.0.rem_euclid(w[0]);
                        k.1 = k.1.rem_euclid(w[1]);
                    }
                    if seen.contains(&k) {
                        continue;
                    }
                    seen.push(k);
                    if let Some(v) = self.cells.get(&k) {
                        for &i in v {
                            f(i as usize);
                        }
                    }
                }
            }
        }
    }
}

/// Connects every pair of sites within `radius` whose segment stays in the
/// domain, and links interior sites to nearby boundary samples.
pub(crate) fn assemble(region: &dyn Region, sites: &[Site], boundary: &[Site], radius: f64) -> Assembly {
    let period = region.period();
    let index = CellIndex::new(sites, radius, period);
    let mut edges = Vec::new();
    for (i, s) in sites.iter().enumerate() {
        index.near(&s.pos, |j| {
            if j <= i {
                return;
            }
            let t = &sites[j];
            let d = displacement(&s.pos, &t.pos, period);
            if d <= radius && region.segment_ok(s, t) {
                edges.push((i, j, d));
            }
        });
    }
    // deterministic edge order regardless of hash iteration
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let graph = Graph::from_edges(sites.len(), &edges);

    let bindex = CellIndex::new(boundary, radius, period);
    let mut boundary_links = Vec::new();
    for (i, s) in sites.iter().enumerate() {
        let mut best = f64::INFINITY;
        bindex.near(&s.pos, |b| {
            let t = &boundary[b];
            let d = displacement(&s.pos, &t.pos, period);
            if d <= radius && d < best && region.segment_ok(s, t) {
                best = d;
            }
        });
        if best.is_finite() {
            boundary_links.push((i, best));
        }
    }
    Assembly { graph, boundary_links }
}
