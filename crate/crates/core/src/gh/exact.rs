use super::GhError;
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

pub const EXACT_MAX_POINTS: usize = 5;

struct Dfs<'a> {
    dx: &'a [Vec<f64>],
    dy: &'a [Vec<f64>],
    pairs: Vec<(usize, usize)>,
    best: f64,
}

impl Dfs<'_> {
    fn added_error(&self, p: (usize, usize)) -> f64 {
        self.pairs.iter().map(|&(a, b)| (self.dx[p.0][a] - self.dy[p.1][b]).abs()).fold(0.0, f64::max)
    }

    // decisions 0..n pick an image for each x, then n..n+m a preimage for
    // each y; every doubly-surjective relation contains such a choice
    fn go(&mut self, step: usize, current: f64) {
        if current >= self.best {
            return;
        }
        let (n, m) = (self.dx.len(), self.dy.len());
        if step == n + m {
            self.best = current;
            return;
        }
        let options: Vec<(usize, usize)> =
            if step < n { (0..m).map(|y| (step, y)).collect() } else { (0..n).map(|x| (x, step - n)).collect() };
        for p in options {
            let e = current.max(self.added_error(p));
            self.pairs.push(p);
            self.go(step + 1, e);
            self.pairs.pop();
        }
    }
}

/// Exact Gromov-Hausdorff distance by exhaustive search over
/// correspondences, for spaces of at most five points.
pub fn gh_exact_small<T: Scalar>(x: &FiniteMetricSpace<T>, y: &FiniteMetricSpace<T>) -> Result<f64, GhError> {
    if x.is_empty() || y.is_empty() {
        return Err(GhError::EmptySpace);
    }
    if x.len() > EXACT_MAX_POINTS || y.len() > EXACT_MAX_POINTS {
        return Err(GhError::TooLarge { n: x.len(), m: y.len(), max: EXACT_MAX_POINTS });
    }
    let rows = |s: &FiniteMetricSpace<T>| -> Vec<Vec<f64>> {
        (0..s.len()).map(|i| s.row(i).iter().map(|v| v.as_f64()).collect()).collect()
    };
    let (dx, dy) = (rows(x), rows(y));
    let mut dfs = Dfs { dx: &dx, dy: &dy, pairs: Vec::new(), best: f64::INFINITY };
    dfs.go(0, 0.0);
    Ok(dfs.best / 2.0)
}
