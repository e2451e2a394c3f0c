use std::io::Write;

use serde::{Deserialize, Serialize};

use super::packing::packing_curve;
use super::GhError;
use crate::metric::MetricView;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    UniformlyTotallyBounded,
    Divergent,
    Inconclusive,
}

/// Thresholds for [`sequence_diagnostics`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceConfig {
    /// Minimum increase of the packing count between consecutive spaces.
    pub growth_min: usize,
    /// Minimum number of consecutive spaces showing that growth.
    pub min_run: usize,
    /// A common bound holds at `eps` when every count is at most
    /// `(1 + rel_slack) * first + growth_min`.
    pub rel_slack: f64,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        Self { growth_min: 2, min_run: 3, rel_slack: 0.25 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceDiagnosis {
    pub eps_grid: Vec<f64>,
    /// `counts[s][e]`: packing count of space `s` at separation `eps_grid[e]`.
    pub counts: Vec<Vec<usize>>,
    pub verdict: Verdict,
    pub witness_eps: Option<f64>,
}

impl SequenceDiagnosis {
    /// Writes the packing curves as `epsilon,space_index,count` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), GhError> {
        let io = |e: csv::Error| GhError::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["epsilon", "space_index", "count"]).map_err(io)?;
        for (e, eps) in self.eps_grid.iter().enumerate() {
            for (s, c) in self.counts.iter().enumerate() {
                w.write_record([eps.to_string(), s.to_string(), c[e].to_string()]).map_err(io)?;
            }
        }
        w.flush().map_err(|e| GhError::Io(e.to_string()))
    }
}

fn grows(counts: &[usize], cfg: &SequenceConfig) -> bool {
    let mut run = 1;
    for w in counts.windows(2) {
        if w[1] >= w[0] + cfg.growth_min {
            run += 1;
            if run >= cfg.min_run {
                return true;
            }
        } else {
            run = 1;
        }
    }
    false
}

fn bounded(counts: &[usize], cfg: &SequenceConfig) -> bool {
    let cap = (1.0 + cfg.rel_slack) * counts[0] as f64 + cfg.growth_min as f64;
    counts.iter().all(|&c| c as f64 <= cap)
}

/// Packing-count evidence for or against uniform total boundedness.
///
/// Divergent when at some `eps` the counts grow by at least `growth_min`
/// across `min_run` consecutive spaces (the witness is the largest such
/// `eps`); uniformly totally bounded when every `eps` has a common bound.
pub fn sequence_diagnostics<T, V>(spaces: &[&V], eps_grid: &[T], cfg: &SequenceConfig) -> Result<SequenceDiagnosis, GhError>
where
    T: Scalar,
    V: MetricView<T> + ?Sized,
{
    if spaces.len() < 3 {
        return Err(GhError::TooFewSpaces(spaces.len()));
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > T::zero())) {
        return Err(GhError::InvalidParams("eps grid must be nonempty and positive".into()));
    }
    let counts: Vec<Vec<usize>> =
        spaces.iter().map(|s| packing_curve(*s, eps_grid, 0).into_iter().map(|r| r.count).collect()).collect();
    let per_eps = |e: usize| -> Vec<usize> { counts.iter().map(|c| c[e]).collect() };
    let mut witness: Option<T> = None;
    for (e, &eps) in eps_grid.iter().enumerate() {
        if grows(&per_eps(e), cfg) && witness.map_or(true, |w| eps > w) {
            witness = Some(eps);
        }
    }
    let verdict = if witness.is_some() {
        Verdict::Divergent
    } else if (0..eps_grid.len()).all(|e| bounded(&per_eps(e), cfg)) {
        Verdict::UniformlyTotallyBounded
    } else {
        Verdict::Inconclusive
    };
    Ok(SequenceDiagnosis {
        eps_grid: eps_grid.iter().map(|e| e.as_f64()).collect(),
        counts,
        verdict,
        witness_eps: witness.map(|w| w.as_f64()),
    })
}
