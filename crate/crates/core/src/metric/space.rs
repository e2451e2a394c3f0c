use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::{MetricError, MetricView};
use crate::scalar::{fmax, Scalar};

/// A finite metric space stored as a dense row-major distance matrix.
///
/// Values are immutable after construction. Every constructor that accepts
/// caller-supplied distances runs [`validate_metric`] first.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace<T> {
    n: usize,
    labels: Option<Vec<String>>,
    dist: Vec<T>,
}

impl<T: Scalar> FiniteMetricSpace<T> {
    /// Builds a space from a square matrix, checking the metric axioms with
    /// the given triangle slack.
    pub fn new(rows: Vec<Vec<T>>, tol_triangle: T) -> Result<Self, MetricError> {
        let report = validate_metric(&rows, tol_triangle)?;
        if let Some(v) = report.violation {
            return Err(MetricError::NotAMetric(v.to_string()));
        }
        let n = rows.len();
        let dist = rows.into_iter().flatten().collect();
        Ok(Self { n, labels: None, dist })
    }

    /// Builds a space from a symmetric distance function evaluated on the
    /// upper triangle only. The caller vouches for the metric axioms.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut dist = vec![T::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self { n, labels: None, dist }
    }

    /// Wraps a flat row-major buffer without validation.
    pub(crate) fn from_flat_unchecked(n: usize, dist: Vec<T>) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        Self { n, labels: None, dist }
    }

    /// Single point space.
    pub fn point() -> Self {
        Self::from_flat_unchecked(1, vec![T::zero()])
    }

    /// Points on the real line with `|a - b|` distances.
    pub fn from_line(xs: &[T]) -> Self {
        Self::from_fn(xs.len(), |i, j| (xs[i] - xs[j]).abs())
    }

    /// Points in the plane with Euclidean distances.
    pub fn from_planar(points: &[[T; 2]]) -> Self {
        Self::from_fn(points.len(), |i, j| {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            dx.hypot(dy)
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.n {
            return Err(MetricError::LabelCount { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> T {
        self.dist[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    /// Flat row-major matrix.
    pub fn as_flat(&self) -> &[T] {
        &self.dist
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest pairwise distance; zero for spaces with at most one point.
    pub fn diameter(&self) -> T {
        self.dist.iter().copied().fold(T::zero(), fmax)
    }

    /// Checks the axioms of this space again.
    pub fn validate(&self, tol_triangle: T) -> ValidationReport {
        validate_flat(self.n, &self.dist, tol_triangle)
    }

    /// Converts the storage scalar, e.g. to halve memory with `f32`.
    pub fn cast<U: Scalar>(&self) -> FiniteMetricSpace<U> {
        FiniteMetricSpace {
            n: self.n,
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|&d| U::lit(d.as_f64())).collect(),
        }
    }
}

impl<T: Scalar> MetricView<T> for FiniteMetricSpace<T> {
    fn len(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> Cow<'_, [T]> {
        Cow::Borrowed(FiniteMetricSpace::row(self, i))
    }

    fn dist(&self, i: usize, j: usize) -> T {
        FiniteMetricSpace::dist(self, i, j)
    }
}

/// First axiom failure found by [`validate_metric`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Diagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize, forward: f64, backward: f64 },
    /// `d(a, c) > d(a, b) + d(b, c) + tol`.
    Triangle { a: usize, b: usize, c: usize, excess: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Diagonal { i, value } => write!(f, "d({i},{i}) = {value} is not zero"),
            Violation::Asymmetric { i, j, forward, backward } => {
                write!(f, "d({i},{j}) = {forward} but d({j},{i}) = {backward}")
            }
            Violation::Triangle { a, b, c, excess } => {
                write!(f, "d({a},{c}) exceeds d({a},{b}) + d({b},{c}) by {excess}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    /// The offending triple, when the failure is a triangle violation.
    pub fn witness(&self) -> Option<(usize, usize, usize)> {
        match self.violation {
            Some(Violation::Triangle { a, b, c, .. }) => Some((a, b, c)),
            _ => None,
        }
    }
}

/// Checks that a square matrix is a (pseudo-free) metric up to a triangle
/// slack. Negative or non-finite entries are hard errors; axiom failures are
/// reported with one witness.
pub fn validate_metric<T: Scalar>(
    rows: &[Vec<T>],
    tol_triangle: T,
) -> Result<ValidationReport, MetricError> {
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(MetricError::NonSquare { row: i, len: r.len(), n });
        }
    }
    let flat: Vec<T> = rows.iter().flatten().copied().collect();
    check_entries(n, &flat)?;
    Ok(validate_flat(n, &flat, tol_triangle))
}

pub(crate) fn check_entries<T: Scalar>(n: usize, flat: &[T]) -> Result<(), MetricError> {
    for (idx, &v) in flat.iter().enumerate() {
        if !v.is_finite() {
            return Err(MetricError::NonFinite { i: idx / n, j: idx % n });
        }
        if v < T::zero() {
            return Err(MetricError::NegativeEntry { i: idx / n, j: idx % n, value: v.as_f64() });
        }
    }
    Ok(())
}

pub(crate) fn validate_flat<T: Scalar>(n: usize, d: &[T], tol: T) -> ValidationReport {
    let violation = find_violation(n, d, tol);
    ValidationReport { n, violation }
}

fn find_violation<T: Scalar>(n: usize, d: &[T], tol: T) -> Option<Violation> {
    for i in 0..n {
        let v = d[i * n + i];
        if v != T::zero() {
            return Some(Violation::Diagonal { i, value: v.as_f64() });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if d[i * n + j] != d[j * n + i] {
                return Some(Violation::Asymmetric {
                    i,
                    j,
                    forward: d[i * n + j].as_f64(),
                    backward: d[j * n + i].as_f64(),
                });
            }
        }
    }
    for a in 0..n {
        let row_a = &d[a * n..(a + 1) * n];
        for b in 0..n {
            let dab = row_a[b] + tol;
            let row_b = &d[b * n..(b + 1) * n];
            // branch-free scan first, locate the witness only on failure
            let bad = row_a.iter().zip(row_b).any(|(&ac, &bc)| ac > dab + bc);
            if bad {
                let c = (0..n).find(|&c| row_a[c] > dab + row_b[c]).unwrap();
                let excess = row_a[c] - (row_a[b] + row_b[c]);
                return Some(Violation::Triangle { a, b, c, excess: excess.as_f64() });
            }
        }
    }
    None
}
