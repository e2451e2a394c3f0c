//! Finite metric spaces and the basic set operations on them.

mod io;
mod isometry;
mod ops;
mod space;
mod subspace;
mod view;

pub use io::{load_space_json, read_space_json, save_space_json, space_from_json, space_to_json, SpaceJson};
pub use isometry::{is_isometric_embedding, IsometryReport};
pub use ops::{closed_ball, diameter, hausdorff_distance, point_to_set, tubular_neighborhood};
pub use space::{validate_metric, FiniteMetricSpace, ValidationReport, Violation};
pub(crate) use space::check_entries;
pub use subspace::{restrict, Subspace};
pub use view::MetricView;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("row {row} has length {len}, expected {n}")]
    NonSquare { row: usize, len: usize, n: usize },
    #[error("negative entry {value} at ({i}, {j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("non-finite entry at ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} appears twice")]
    DuplicateIndex(usize),
    #[error("subset is empty")]
    EmptySubset,
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("malformed space file: {0}")]
    Format(String),
    #[error("i/o failure: {0}")]
    Io(String),
}
