use std::borrow::Cow;

use crate::scalar::Scalar;

/// Read access to a finite metric, dense or computed on demand.
///
/// Graph-backed spaces answer `row` with one shortest-path sweep, so callers
/// that need many distances from one point should fetch the row once.
pub trait MetricView<T: Scalar> {
    fn len(&self) -> usize;

    fn row(&self, i: usize) -> Cow<'_, [T]>;

    fn dist(&self, i: usize, j: usize) -> T {
        self.row(i)[j]
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distances from `i` to each index in `targets`, in order.
    fn dists_to(&self, i: usize, targets: &[usize]) -> Vec<T> {
        let r = self.row(i);
        targets.iter().map(|&t| r[t]).collect()
    }
}

impl<T: Scalar, V: MetricView<T> + ?Sized> MetricView<T> for &V {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn row(&self, i: usize) -> Cow<'_, [T]> {
        (**self).row(i)
    }
    fn dist(&self, i: usize, j: usize) -> T {
        (**self).dist(i, j)
    }
    fn dists_to(&self, i: usize, targets: &[usize]) -> Vec<T> {
        (**self).dists_to(i, targets)
    }
}
