use super::assemble::{Region, Site};

/// `j + 1` flat square annuli stacked in space, consecutive ones joined by
/// a slanted flat strip across the square hole.
///
/// Hole half-width is `s = 2^-j`. Level `i` sits at height `z_i` (0, then
/// `2^(i-j)`) with half-size 1 for the first and last level and `2^(i-j)`
/// otherwise. Strip `i` rises linearly from level `i` at `x = -s` to level
/// `i + 1` at `x = +s`.
pub(crate) struct SquareAnnuliStack {
    pub j: u32,
}

impl SquareAnnuliStack {
    pub fn hole(&self) -> f64 {
        0.5f64.powi(self.j as i32)
    }

    pub fn levels(&self) -> usize {
        self.j as usize + 1
    }

    pub fn height(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            2f64.powi(i as i32 - self.j as i32)
        }
    }

    pub fn half_size(&self, i: usize) -> f64 {
        if i == 0 || i == self.j as usize {
            1.0
        } else {
            2f64.powi(i as i32 - self.j as i32)
        }
    }

    fn strip_piece(&self, i: usize) -> u32 {
        (self.levels() + i) as u32
    }

    fn strip_z(&self, i: usize, x: f64) -> f64 {
        let s = self.hole();
        let (z0, z1) = (self.height(i), self.height(i + 1));
        z0 + (z1 - z0) * (x + s) / (2.0 * s)
    }

    fn strip_stretch(&self, i: usize) -> f64 {
        let s = self.hole();
        let m = (self.height(i + 1) - self.height(i)) / (2.0 * s);
        (1.0 + m * m).sqrt()
    }

    pub fn analytic_area(&self) -> f64 {
        let s = self.hole();
        let annuli: f64 = (0..self.levels()).map(|i| 4.0 * self.half_size(i).powi(2) - 4.0 * s * s).sum();
        let strips: f64 = (0..self.j as usize).map(|i| 4.0 * s * s * self.strip_stretch(i)).sum();
        annuli + strips
    }

    fn in_annulus(&self, i: usize, p: [f64; 2]) -> bool {
        let a = self.half_size(i);
        let s = self.hole();
        p[0].abs() <= a && p[1].abs() <= a && !(p[0].abs() < s && p[1].abs() <= s)
    }

    fn level_site(&self, i: usize, p: [f64; 2], area: f64) -> Site {
        Site { chart: p, pos: [p[0], p[1], self.height(i)], area, piece: i as u32 }
    }

    fn strip_site(&self, i: usize, p: [f64; 2], area: f64) -> Site {
        Site { chart: p, pos: [p[0], p[1], self.strip_z(i, p[0])], area, piece: self.strip_piece(i) }
    }

    /// Level and strip indices joined at a seam, with the seam abscissa and
    /// the side of the seam the level lies on.
    fn seam(&self, level: usize, strip: usize) -> Option<(f64, f64)> {
        let s = self.hole();
        if strip == level {
            Some((-s, -1.0))
        } else if strip + 1 == level {
            Some((s, 1.0))
        } else {
            None
        }
    }
}

impl Region for SquareAnnuliStack {
    fn interior(&self, h: f64, _seed: u64) -> Vec<Site> {
        let s = self.hole();
        let mut out = Vec::new();
        for i in 0..self.levels() {
            let a = self.half_size(i);
            let n = (2.0 * a / h).round().max(1.0) as usize;
            let hh = 2.0 * a / n as f64;
            for u in 0..n {
                for v in 0..n {
                    let p = [-a + (u as f64 + 0.5) * hh, -a + (v as f64 + 0.5) * hh];
                    if self.in_annulus(i, p) {
                        out.push(self.level_site(i, p, hh * hh));
                    }
                }
            }
        }
        for i in 0..self.j as usize {
            let st = self.strip_stretch(i);
            let nx = ((2.0 * s * st / h).round() as usize).max(1);
            let ny = ((2.0 * s / h).round() as usize).max(1);
            let (hx, hy) = (2.0 * s / nx as f64, 2.0 * s / ny as f64);
            for u in 0..nx {
                for v in 0..ny {
                    let p = [-s + (u as f64 + 0.5) * hx, -s + (v as f64 + 0.5) * hy];
                    out.push(self.strip_site(i, p, hx * hy * st));
                }
            }
        }
        out
    }

    fn boundary(&self, step: f64) -> Vec<Site> {
        let s = self.hole();
        let mut out = Vec::new();
        let segment = |a: [f64; 2], b: [f64; 2]| -> Vec<[f64; 2]> {
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let k = ((len / step).ceil() as usize).max(1);
            (0..k)
                .map(|m| {
                    let t = (m as f64 + 0.5) / k as f64;
                    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
                })
                .collect()
        };
        for i in 0..self.levels() {
            let a = self.half_size(i);
            let mut pts = Vec::new();
            for (p, q) in [([-a, -a], [a, -a]), ([a, -a], [a, a]), ([a, a], [-a, a]), ([-a, a], [-a, -a])] {
                pts.extend(segment(p, q));
            }
            pts.extend(segment([-s, s], [s, s]));
            pts.extend(segment([-s, -s], [s, -s]));
            if i == 0 {
                pts.extend(segment([s, -s], [s, s]));
            }
            if i == self.j as usize {
                pts.extend(segment([-s, -s], [-s, s]));
            }
            out.extend(pts.into_iter().map(|p| self.level_site(i, p, 0.0)));
        }
        for i in 0..self.j as usize {
            let mut pts = segment([-s, s], [s, s]);
            pts.extend(segment([-s, -s], [s, -s]));
            out.extend(pts.into_iter().map(|p| self.strip_site(i, p, 0.0)));
        }
        out
    }

    fn segment_ok(&self, a: &Site, b: &Site) -> bool {
        let levels = self.levels();
        let (pa, pb) = (a.piece as usize, b.piece as usize);
        let mid = [(a.chart[0] + b.chart[0]) / 2.0, (a.chart[1] + b.chart[1]) / 2.0];
        if pa == pb {
            return pa >= levels || self.in_annulus(pa, mid);
        }
        let (lv, lp, st, sp) = match (pa < levels, pb < levels) {
            (true, false) => (pa, a.chart, pb - levels, b.chart),
            (false, true) => (pb, b.chart, pa - levels, a.chart),
            _ => return false,
        };
        let Some((x_seam, side)) = self.seam(lv, st) else {
            return false;
        };
        if (lp[0] - x_seam) * side < 0.0 || (sp[0] - x_seam) * side > 0.0 {
            return false;
        }
        // crossing height of the seam line
        let dx = sp[0] - lp[0];
        let y = if dx.abs() < 1e-15 { lp[1] } else { lp[1] + (sp[1] - lp[1]) * (x_seam - lp[0]) / dx };
        y.abs() <= self.hole()
    }
}
