use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::assemble::{Region, Site};
use super::domain::{curve_samples, RadialProfile};

/// `r_inner(theta) < r < r_outer(theta)` with `theta` periodic of period
/// `2 pi sheets`. Several sheets realize a covering in its unrolled chart.
pub(crate) struct PolarDomain {
    pub r_inner: RadialProfile,
    pub r_outer: RadialProfile,
    pub sheets: u32,
}

fn wrap_pi(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

impl PolarDomain {
    pub fn span(&self) -> f64 {
        TAU * self.sheets as f64
    }

    pub fn inside(&self, r: f64, theta: f64) -> bool {
        let t = theta.rem_euclid(self.span());
        let lo = self.r_inner.eval(t);
        let above = if self.r_inner.is_zero() { r >= 0.0 } else { r > lo };
        above && r < self.r_outer.eval(t)
    }

    fn site(r: f64, theta: f64, area: f64) -> Site {
        Site { chart: [r, theta], pos: [r * theta.cos(), r * theta.sin(), 0.0], area, piece: 0 }
    }
}

impl Region for PolarDomain {
    fn interior(&self, h: f64, seed: u64) -> Vec<Site> {
        let span = self.span();
        let (r_lo, _) = self.r_inner.range(span);
        let (_, r_hi) = self.r_outer.range(span);
        let mut rng = (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed));
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let r = r_lo + (k as f64 + 0.5) * h;
            if r >= r_hi {
                break;
            }
            let n = ((span * r / h).round() as usize).max(1);
            let dt = span / n as f64;
            for m in 0..n {
                let (mut rr, mut t) = (r, (m as f64 + 0.5) * dt);
                if let Some(g) = rng.as_mut() {
                    rr += g.gen_range(-0.25..0.25) * h;
                    t += g.gen_range(-0.25..0.25) * dt;
                }
                if self.inside(rr, t) {
                    // ring slice of the cell; the outermost cells stretch to the boundary
                    let tw = t.rem_euclid(span);
                    let (lo, hi) = (self.r_inner.eval(tw), self.r_outer.eval(tw));
                    let a = if r - h <= lo { lo.max(0.0) } else { r - h / 2.0 };
                    let b = if r + h >= hi { hi } else { r + h / 2.0 };
                    out.push(Self::site(rr, tw, (b * b - a * a) / 2.0 * dt));
                }
            }
            k += 1;
        }
        out
    }

    fn boundary(&self, step: f64) -> Vec<Site> {
        let span = self.span();
        let mut out: Vec<Site> = curve_samples(&self.r_outer, span, step)
            .into_iter()
            .map(|(r, t, _)| Self::site(r, t, 0.0))
            .collect();
        if !self.r_inner.is_zero() {
            out.extend(curve_samples(&self.r_inner, span, step).into_iter().map(|(r, t, _)| Self::site(r, t, 0.0)));
        }
        out
    }

    fn segment_ok(&self, a: &Site, b: &Site) -> bool {
        let span = self.span();
        let dt = (b.chart[1] - a.chart[1]).rem_euclid(span);
        let dt = if dt > span / 2.0 { dt - span } else { dt };
        if self.sheets > 1 && dt.abs() >= PI {
            return false;
        }
        // probe the planar chord, tracking the angle continuously from a
        [0.25, 0.5, 0.75].iter().all(|&s| {
            let x = (1.0 - s) * a.pos[0] + s * b.pos[0];
            let y = (1.0 - s) * a.pos[1] + s * b.pos[1];
            let r = x.hypot(y);
            let t = a.chart[1] + wrap_pi(y.atan2(x) - a.chart[1]);
            self.inside(r, t)
        })
    }
}
