use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::assemble::{Region, Site};
use super::domain::Shape;

/// Union of planar shapes minus holes, optionally wrapped into a torus.
pub(crate) struct PlanarDomain {
    pub parts: Vec<Shape>,
    pub holes: Vec<Shape>,
    /// Lower-left corner and size of the fundamental domain when periodic.
    pub torus: Option<([f64; 2], [f64; 2])>,
}

impl PlanarDomain {
    pub fn inside(&self, p: [f64; 2]) -> bool {
        let p = self.wrap(p);
        self.parts.iter().any(|s| s.contains(p)) && !self.holes.iter().any(|s| s.contains_open(p))
    }

    fn wrap(&self, p: [f64; 2]) -> [f64; 2] {
        match self.torus {
            Some((o, size)) => [o[0] + (p[0] - o[0]).rem_euclid(size[0]), o[1] + (p[1] - o[1]).rem_euclid(size[1])],
            None => p,
        }
    }

    fn site(&self, p: [f64; 2], area: f64) -> Site {
        let p = self.wrap(p);
        let o = self.torus.map_or([0.0, 0.0], |t| t.0);
        Site { chart: p, pos: [p[0] - o[0], p[1] - o[1], 0.0], area, piece: 0 }
    }

    fn bbox(&self) -> [f64; 4] {
        self.parts.iter().map(Shape::bbox).fold(
            [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
            |a, b| [a[0].min(b[0]), a[1].min(b[1]), a[2].max(b[2]), a[3].max(b[3])],
        )
    }
}

impl Region for PlanarDomain {
    fn interior(&self, h: f64, seed: u64) -> Vec<Site> {
        let bb = self.bbox();
        let (w, ht) = (bb[2] - bb[0], bb[3] - bb[1]);
        // periodic domains need a whole number of cells per period
        let (hx, hy) = match self.torus {
            Some(_) => (w / (w / h).round().max(1.0), ht / (ht / h).round().max(1.0)),
            None => (h, h),
        };
        let nx = (w / hx).round().max(1.0) as usize + usize::from(self.torus.is_none());
        let ny = (ht / hy).round().max(1.0) as usize + usize::from(self.torus.is_none());
        let mut rng = (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed));
        let mut out = Vec::new();
        for i in 0..nx {
            for k in 0..ny {
                let mut p = [bb[0] + (i as f64 + 0.5) * hx, bb[1] + (k as f64 + 0.5) * hy];
                if let Some(r) = rng.as_mut() {
                    p[0] += r.gen_range(-0.25..0.25) * hx;
                    p[1] += r.gen_range(-0.25..0.25) * hy;
                }
                if self.inside(p) {
                    out.push(self.site(p, hx * hy));
                }
            }
        }
        out
    }

    fn boundary(&self, step: f64) -> Vec<Site> {
        let bb = self.bbox();
        let eta = 1e-7 * (1.0 + (bb[2] - bb[0]).abs().max((bb[3] - bb[1]).abs()));
        let mut out = Vec::new();
        let mut keep = |p: [f64; 2], n: [f64; 2], sign: f64| {
            let inner = [p[0] - sign * eta * n[0], p[1] - sign * eta * n[1]];
            let outer = [p[0] + sign * eta * n[0], p[1] + sign * eta * n[1]];
            if self.inside(inner) && !self.inside(outer) {
                out.push(self.site(p, 0.0));
            }
        };
        if self.torus.is_none() {
            for s in &self.parts {
                for (p, n) in s.outline(step) {
                    keep(p, n, 1.0);
                }
            }
        }
        for s in &self.holes {
            for (p, n) in s.outline(step) {
                keep(p, n, -1.0);
            }
        }
        out
    }

    fn segment_ok(&self, a: &Site, b: &Site) -> bool {
        let mut d = [b.chart[0] - a.chart[0], b.chart[1] - a.chart[1]];
        if let Some((_, size)) = self.torus {
            d[0] -= size[0] * (d[0] / size[0]).round();
            d[1] -= size[1] * (d[1] / size[1]).round();
        }
        [0.25, 0.5, 0.75].iter().all(|t| self.inside([a.chart[0] + t * d[0], a.chart[1] + t * d[1]]))
    }

    fn period(&self) -> Option<[f64; 2]> {
        self.torus.map(|(_, s)| s)
    }
}
