use std::borrow::Cow;

use super::{FiniteMetricSpace, MetricError, MetricView};
use crate::scalar::Scalar;

/// A subset of a parent space carrying the restricted metric.
///
/// Distances are always read from the parent, never recomputed.
#[derive(Clone, Copy)]
pub struct Subspace<'a, T: Scalar> {
    parent: &'a dyn MetricView<T>,
    indices: &'a [usize],
}

impl<'a, T: Scalar> Subspace<'a, T> {
    pub fn parent(&self) -> &'a dyn MetricView<T> {
        self.parent
    }

    /// Parent indices of the retained points, in subspace order.
    pub fn indices(&self) -> &'a [usize] {
        self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Maps subspace-local indices to parent indices, for composing
    /// restrictions: `restrict(restrict(X, a), b)` equals
    /// `restrict(X, compose(a, b))`.
    pub fn compose(&self, local: &[usize]) -> Result<Vec<usize>, MetricError> {
        check_indices(local, self.indices.len())?;
        Ok(local.iter().map(|&i| self.indices[i]).collect())
    }

    /// Copies the restricted matrix into a dense space.
    pub fn materialize(&self) -> FiniteMetricSpace<T> {
        let k = self.indices.len();
        let mut flat = Vec::with_capacity(k * k);
        for &i in self.indices {
            flat.extend(self.parent.dists_to(i, self.indices));
        }
        FiniteMetricSpace::from_flat_unchecked(k, flat)
    }
}

impl<T: Scalar> MetricView<T> for Subspace<'_, T> {
    fn len(&self) -> usize {
        self.indices.len()
    }

    fn row(&self, i: usize) -> Cow<'_, [T]> {
        Cow::Owned(self.parent.dists_to(self.indices[i], self.indices))
    }

    fn dist(&self, i: usize, j: usize) -> T {
        self.parent.dist(self.indices[i], self.indices[j])
    }

    fn dists_to(&self, i: usize, targets: &[usize]) -> Vec<T> {
        let mapped: Vec<usize> = targets.iter().map(|&t| self.indices[t]).collect();
        self.parent.dists_to(self.indices[i], &mapped)
    }
}

/// Restricts `space` to `indices`, which must be distinct and in range.
pub fn restrict<'a, T: Scalar>(
    space: &'a dyn MetricView<T>,
    indices: &'a [usize],
) -> Result<Subspace<'a, T>, MetricError> {
    check_indices(indices, space.len())?;
    Ok(Subspace { parent: space, indices })
}

pub(crate) fn check_indices(indices: &[usize], n: usize) -> Result<(), MetricError> {
    let mut seen = vec![false; n];
    for &i in indices {
        if i >= n {
            return Err(MetricError::IndexOutOfRange { index: i, n });
        }
        if seen[i] {
            return Err(MetricError::DuplicateIndex(i));
        }
        seen[i] = true;
    }
    Ok(())
}
