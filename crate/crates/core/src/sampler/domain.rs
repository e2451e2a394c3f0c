use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::SampleError;

/// Radius as a function of the polar angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RadialProfile {
    Const { value: f64 },
    /// `base + amp * cos(freq * theta)`
    Cosine { base: f64, amp: f64, freq: f64 },
    /// `base + amp * sin(coef / theta)`, for `theta > 0`.
    SinInverse { base: f64, amp: f64, coef: f64 },
    /// Pieces listed by increasing upper angle; the last piece covers the rest.
    Piecewise { pieces: Vec<(f64, RadialProfile)> },
}

impl RadialProfile {
    pub fn constant(value: f64) -> Self {
        RadialProfile::Const { value }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            RadialProfile::Const { value } => *value,
            RadialProfile::Cosine { base, amp, freq } => base + amp * (freq * theta).cos(),
            RadialProfile::SinInverse { base, amp, coef } => {
                if theta <= 0.0 {
                    *base
                } else {
                    base + amp * (coef / theta).sin()
                }
            }
            RadialProfile::Piecewise { pieces } => {
                for (upper, p) in pieces {
                    if theta <= *upper {
                        return p.eval(theta);
                    }
                }
                pieces.last().map_or(0.0, |(_, p)| p.eval(theta))
            }
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, RadialProfile::Const { value } if *value == 0.0)
    }

    /// Numeric range over `[0, span)` using a fine scan.
    pub(crate) fn range(&self, span: f64) -> (f64, f64) {
        if let RadialProfile::Const { value } = self {
            return (*value, *value);
        }
        let steps = 200_000;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..steps {
            let r = self.eval((k as f64 + 0.5) * span / steps as f64);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        (lo, hi)
    }
}

/// Planar primitive used to build unions and holes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    Disk { cx: f64, cy: f64, r: f64 },
    /// Simple polygon, vertices in either orientation.
    Polygon { points: Vec<[f64; 2]> },
    /// Star-shaped about its center with radius `profile(angle)`.
    Star { cx: f64, cy: f64, profile: RadialProfile },
}

impl Shape {
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Shape::Rect { x0, y0, x1, y1 }
    }

    pub fn disk(cx: f64, cy: f64, r: f64) -> Self {
        Shape::Disk { cx, cy, r }
    }

    /// Closed containment, so seams between adjacent parts count as inside.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Shape::Rect { x0, y0, x1, y1 } => p[0] >= *x0 && p[0] <= *x1 && p[1] >= *y0 && p[1] <= *y1,
            Shape::Disk { cx, cy, r } => (p[0] - cx).hypot(p[1] - cy) <= *r,
            Shape::Polygon { points } => polygon_contains(points, p),
            Shape::Star { cx, cy, profile } => {
                let dx = p[0] - cx;
                let dy = p[1] - cy;
                dx.hypot(dy) <= profile.eval(dy.atan2(dx).rem_euclid(TAU))
            }
        }
    }

    /// Open containment, used for holes.
    pub fn contains_open(&self, p: [f64; 2]) -> bool {
        match self {
            Shape::Rect { x0, y0, x1, y1 } => p[0] > *x0 && p[0] < *x1 && p[1] > *y0 && p[1] < *y1,
            Shape::Disk { cx, cy, r } => (p[0] - cx).hypot(p[1] - cy) < *r,
            Shape::Polygon { points } => polygon_contains(points, p),
            Shape::Star { cx, cy, profile } => {
                let dx = p[0] - cx;
                let dy = p[1] - cy;
                dx.hypot(dy) < profile.eval(dy.atan2(dx).rem_euclid(TAU))
            }
        }
    }

    pub fn bbox(&self) -> [f64; 4] {
        match self {
            Shape::Rect { x0, y0, x1, y1 } => [*x0, *y0, *x1, *y1],
            Shape::Disk { cx, cy, r } => [cx - r, cy - r, cx + r, cy + r],
            Shape::Polygon { points } => points.iter().fold(
                [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
                |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
            ),
            Shape::Star { cx, cy, profile } => {
                let (_, hi) = profile.range(TAU);
                [cx - hi, cy - hi, cx + hi, cy + hi]
            }
        }
    }

    /// Points along the outline at spacing about `step`, with outward normals.
    pub(crate) fn outline(&self, step: f64) -> Vec<([f64; 2], [f64; 2])> {
        match self {
            Shape::Rect { x0, y0, x1, y1 } => {
                let c = [[*x0, *y0], [*x1, *y0], [*x1, *y1], [*x0, *y1]];
                polyline_samples(&c, step)
            }
            Shape::Disk { cx, cy, r } => {
                let n = ((TAU * r / step).ceil() as usize).max(8);
                (0..n)
                    .map(|k| {
                        let t = (k as f64 + 0.5) * TAU / n as f64;
                        ([cx + r * t.cos(), cy + r * t.sin()], [t.cos(), t.sin()])
                    })
                    .collect()
            }
            Shape::Polygon { points } => {
                let mut pts = points.clone();
                if signed_area(&pts) < 0.0 {
                    pts.reverse();
                }
                polyline_samples(&pts, step)
            }
            Shape::Star { cx, cy, profile } => curve_samples(profile, TAU, step)
                .into_iter()
                .map(|(r, t, n)| ([cx + r * t.cos(), cy + r * t.sin()], n))
                .collect(),
        }
    }
}

fn polygon_contains(points: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut inside = false;
    let n = points.len();
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let a = points[i];
        let b = points[j];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn signed_area(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let a = points[i];
            let b = points[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

/// Samples a counter-clockwise closed polyline.
fn polyline_samples(corners: &[[f64; 2]], step: f64) -> Vec<([f64; 2], [f64; 2])> {
    let mut out = Vec::new();
    let n = corners.len();
    for i in 0..n {
        let a = corners[i];
        let b = corners[(i + 1) % n];
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        if len == 0.0 {
            continue;
        }
        let normal = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
        let k = ((len / step).ceil() as usize).max(1);
        for s in 0..k {
            let t = (s as f64 + 0.5) / k as f64;
            out.push(([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], normal));
        }
    }
    out
}

/// Walks `r = profile(theta)` for `theta` in `[0, span)` and returns
/// `(r, theta, outward normal)` at arclength spacing about `step`.
/// Jumps in the profile are filled with radial samples.
pub(crate) fn curve_samples(profile: &RadialProfile, span: f64, step: f64) -> Vec<(f64, f64, [f64; 2])> {
    let (_, hi) = profile.range(span);
    let fine = ((span * hi.max(step) / step) * 8.0).ceil().max(64.0) as usize;
    let dt = span / fine as f64;
    let mut out = Vec::new();
    let mut acc = step / 2.0;
    let mut prev_t = 0.0f64;
    let mut prev_r = profile.eval(0.0);
    for k in 1..=fine {
        let t = k as f64 * dt;
        let r = profile.eval(t % span);
        let chord = {
            let (x0, y0) = (prev_r * prev_t.cos(), prev_r * prev_t.sin());
            let (x1, y1) = (r * t.cos(), r * t.sin());
            (x1 - x0).hypot(y1 - y0)
        };
        let jump = (r - prev_r).abs();
        if jump > 2.0 * step {
            // near-radial segment: emit evenly along it
            let m = (jump / step).floor() as usize;
            for s in 1..=m {
                let rr = prev_r + (r - prev_r) * s as f64 / (m + 1) as f64;
                let sign = if r > prev_r { 1.0 } else { -1.0 };
                // tangent is radial; outward normal points to decreasing theta side
                // of the larger-radius piece
                let n = [sign * t.sin(), -sign * t.cos()];
                out.push((rr, t, n));
            }
            acc = 0.0;
        } else {
            acc += chord;
            if acc >= step {
                acc -= step;
                let dr = (r - prev_r) / dt;
                // tangent d/dt (r cos t, r sin t)
                let tx = dr * t.cos() - r * t.sin();
                let ty = dr * t.sin() + r * t.cos();
                let len = tx.hypot(ty).max(f64::MIN_POSITIVE);
                out.push((r, t % span, [ty / len, -tx / len]));
            }
        }
        prev_t = t;
        prev_r = r;
    }
    out
}

/// Declarative description of a flat two-dimensional domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    /// `r_inner(theta) < r < r_outer(theta)` over `theta` in `[0, 2 pi sheets)`,
    /// periodic in `theta`; `sheets > 1` gives the universal-cover chart of
    /// a multiple covering.
    PolarBand {
        r_inner: RadialProfile,
        r_outer: RadialProfile,
        #[serde(default = "one")]
        sheets: u32,
    },
    /// j-sheeted covering of the annulus `r_inner < r < r_outer`.
    MultiSheetPolar { sheets: u32, r_inner: f64, r_outer: f64 },
    /// Union of shapes minus holes.
    PlanarRegion { parts: Vec<Shape>, #[serde(default)] holes: Vec<Shape> },
    /// Union of axis-aligned rectangles minus holes. With `periodic`, the
    /// single rectangle is a flat torus and has no boundary.
    CompositeRectangles {
        rects: Vec<[f64; 4]>,
        #[serde(default)]
        holes: Vec<Shape>,
        #[serde(default)]
        periodic: bool,
    },
    /// Flat square annuli at increasing heights joined by slanted strips.
    SquareAnnuliStack { j: u32 },
}

fn one() -> u32 {
    1
}

impl DomainSpec {
    pub fn annulus(r_inner: f64, r_outer: f64) -> Self {
        DomainSpec::PolarBand {
            r_inner: RadialProfile::constant(r_inner),
            r_outer: RadialProfile::constant(r_outer),
            sheets: 1,
        }
    }

    pub fn disk(r: f64) -> Self {
        DomainSpec::PlanarRegion { parts: vec![Shape::disk(0.0, 0.0, r)], holes: vec![] }
    }

    pub fn validate(&self) -> Result<(), SampleError> {
        let bad = |m: &str| Err(SampleError::InvalidSpec(m.to_string()));
        match self {
            DomainSpec::PolarBand { r_inner, r_outer, sheets } => {
                if *sheets == 0 {
                    return bad("sheets must be at least 1");
                }
                let span = TAU * *sheets as f64;
                let steps = 4096;
                for k in 0..steps {
                    let t = (k as f64 + 0.5) * span / steps as f64;
                    let (a, b) = (r_inner.eval(t), r_outer.eval(t));
                    if !(a >= 0.0 && a < b && b.is_finite()) {
                        return bad("need 0 <= r_inner < r_outer everywhere");
                    }
                }
                Ok(())
            }
            DomainSpec::MultiSheetPolar { sheets, r_inner, r_outer } => {
                if *sheets == 0 || !(*r_inner >= 0.0 && r_inner < r_outer) {
                    return bad("need sheets >= 1 and 0 <= r_inner < r_outer");
                }
                Ok(())
            }
            DomainSpec::PlanarRegion { parts, .. } => {
                if parts.is_empty() {
                    return bad("no parts");
                }
                Ok(())
            }
            DomainSpec::CompositeRectangles { rects, periodic, .. } => {
                if rects.is_empty() {
                    return bad("no rectangles");
                }
                if rects.iter().any(|r| !(r[0] < r[2] && r[1] < r[3])) {
                    return bad("degenerate rectangle");
                }
                if *periodic && rects.len() != 1 {
                    return bad("periodic needs exactly one rectangle");
                }
                Ok(())
            }
            DomainSpec::SquareAnnuliStack { j } => {
                if *j == 0 || *j > 12 {
                    return bad("j must lie in 1..=12");
                }
                Ok(())
            }
        }
    }

    /// Closed-form area where one is available.
    pub fn analytic_area(&self) -> Option<f64> {
        match self {
            DomainSpec::MultiSheetPolar { sheets, r_inner, r_outer } => {
                Some(*sheets as f64 * PI * (r_outer * r_outer - r_inner * r_inner))
            }
            DomainSpec::PolarBand { r_inner, r_outer, sheets } => {
                let span = TAU * *sheets as f64;
                let steps = 200_000;
                let dt = span / steps as f64;
                let s: f64 = (0..steps)
                    .map(|k| {
                        let t = (k as f64 + 0.5) * dt;
                        let (a, b) = (r_inner.eval(t), r_outer.eval(t));
                        (b * b - a * a) / 2.0
                    })
                    .sum();
                Some(s * dt)
            }
            DomainSpec::SquareAnnuliStack { j } => Some(super::stack::SquareAnnuliStack { j: *j }.analytic_area()),
            _ => None,
        }
    }
}
