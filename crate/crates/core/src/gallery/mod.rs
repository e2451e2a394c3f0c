//! Generators for the example families: sampled flat domains, exact book
//! spaces, lattice skeletons and the towers built from them.

mod book;
mod families;
mod lattice;
mod towers;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use book::{book_distance, BookLattice, BookPoint, Page};
pub use families::{
    ann_reference, annulus, decreasing_splines, disk_with_segment, f_limit, f_region, gold_foils, many_splines,
    no_diag, no_diag_width, not_length, restricted_dense, sampled_distance, spline_disk, two_balls, DiskWithSegment,
    Parity, RestrictedSample,
};
pub use lattice::{lattice_skeleton, Face, LatticeSkeleton};
pub use towers::{
    annulus_tower, bad_balls_tower, book_lattice, nonunique_pages, nonunique_pitch, nonunique_tower, tracked_point,
    BookTower, PageEmbedding,
};

use crate::glued::GluedError;
use crate::metric::FiniteMetricSpace;
use crate::sampler::{sample_domain, DomainSpec, SampleError, SamplePlan, SampledSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("point ({x}, {y}) is not on page {page}")]
    OutOfPage { page: usize, x: f64, y: f64 },
    #[error("invalid lattice pitch: {0}")]
    InvalidPitch(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Glued(#[from] GluedError),
}

/// One example family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    GoldFoils {
        j: u32,
        #[serde(default)]
        r_inner: Option<f64>,
    },
    ManySplines {
        j: u32,
    },
    SplineDisk {
        width: f64,
        #[serde(default = "unit")]
        length: f64,
    },
    NoDiag {
        j: u32,
        eps_hat: f64,
    },
    DecreasingSplines {
        j: u32,
    },
    FRegion {
        j: u32,
        /// Defaults to the parity of `j`.
        #[serde(default)]
        parity: Option<Parity>,
    },
    TwoBalls,
    Disk {
        r: f64,
    },
    Annulus {
        r1: f64,
        r2: f64,
    },
    AnnReference {
        delta: f64,
    },
    Book {
        heights: Vec<f64>,
        #[serde(default = "book_pitch")]
        pitch: f64,
    },
    BookTowerPageDoubling {
        depth: usize,
    },
    SquareAnnuliStack {
        j: u32,
    },
    TaxiBox {
        sides: Vec<f64>,
        pitch: f64,
        #[serde(default)]
        faces: Vec<Face>,
    },
    NotLength,
}

fn unit() -> f64 {
    1.0
}

fn book_pitch() -> f64 {
    1.0 / 64.0
}

/// A family plus the sampling plan for the sampled ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub plan: Option<SamplePlan>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        Self { family, plan: None }
    }

    pub fn with_plan(mut self, plan: SamplePlan) -> Self {
        self.plan = Some(plan);
        self
    }

    pub fn plan_or_default(&self) -> SamplePlan {
        self.plan.unwrap_or_else(|| SamplePlan::new(0.05))
    }

    /// The flat domain, for families that are sampled from one.
    pub fn domain(&self) -> Result<Option<DomainSpec>, GalleryError> {
        Ok(Some(match &self.family {
            Family::GoldFoils { j, r_inner } => gold_foils(*j, *r_inner)?,
            Family::ManySplines { j } => many_splines(*j)?,
            Family::SplineDisk { width, length } => spline_disk(*width, *length)?,
            Family::NoDiag { j, eps_hat } => no_diag(*j, *eps_hat)?,
            Family::DecreasingSplines { j } => decreasing_splines(*j)?,
            Family::FRegion { j, parity } => f_region(*j, parity.unwrap_or(Parity::of(*j)))?,
            Family::TwoBalls => two_balls(),
            Family::Disk { r } => {
                if !(*r > 0.0 && r.is_finite()) {
                    return Err(GalleryError::InvalidFamilyParams(format!("disk radius must be positive, got {r}")));
                }
                DomainSpec::disk(*r)
            }
            Family::Annulus { r1, r2 } => annulus(*r1, *r2)?,
            Family::SquareAnnuliStack { j } => DomainSpec::SquareAnnuliStack { j: *j },
            Family::NotLength => not_length(),
            Family::AnnReference { .. } | Family::Book { .. } | Family::BookTowerPageDoubling { .. } | Family::TaxiBox { .. } => {
                return Ok(None)
            }
        }))
    }
}

/// A finite space with planar or box coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSpace {
    pub space: FiniteMetricSpace<f64>,
    pub coords: Vec<Vec<f64>>,
    /// Page of each point, for book spaces.
    pub pages: Option<Vec<usize>>,
    /// Boundary flags, for lattice skeletons.
    pub boundary: Option<Vec<bool>>,
}

#[derive(Debug)]
pub enum Generated {
    Sampled(SampledSpace),
    Restricted(RestrictedSample),
    Exact(ExactSpace),
}

impl Generated {
    pub fn len(&self) -> usize {
        match self {
            Generated::Sampled(s) => s.len(),
            Generated::Restricted(r) => r.len(),
            Generated::Exact(e) => e.space.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dense metric of the generated points.
    pub fn dense(&self) -> FiniteMetricSpace<f64> {
        match self {
            Generated::Sampled(s) => s.dense().clone(),
            Generated::Restricted(r) => r.dense(),
            Generated::Exact(e) => e.space.clone(),
        }
    }

    pub fn coords(&self) -> Vec<Vec<f64>> {
        match self {
            Generated::Sampled(s) => s.coords().iter().map(|c| c.to_vec()).collect(),
            Generated::Restricted(r) => r.coords().iter().map(|c| c.to_vec()).collect(),
            Generated::Exact(e) => e.coords.clone(),
        }
    }
}

fn exact_book(lat: &BookLattice) -> ExactSpace {
    ExactSpace {
        space: lat.space(),
        coords: lat.coords().iter().map(|c| c.to_vec()).collect(),
        pages: Some(lat.pages_of_points()),
        boundary: None,
    }
}

/// Builds the family: a sample for flat domains, an exact metric for books
/// and lattices.
pub fn generate(spec: &FamilySpec) -> Result<Generated, GalleryError> {
    let plan = spec.plan_or_default();
    if let Some(domain) = spec.domain()? {
        return Ok(Generated::Sampled(sample_domain(&domain, &plan)?));
    }
    match &spec.family {
        Family::AnnReference { delta } => Ok(Generated::Restricted(ann_reference(*delta, &plan)?)),
        Family::Book { heights, pitch } => {
            if heights.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(GalleryError::InvalidFamilyParams("heights must be decreasing".into()));
            }
            Ok(Generated::Exact(exact_book(&book_lattice(heights, *pitch)?)))
        }
        Family::BookTowerPageDoubling { depth } => {
            if !(1..=6).contains(depth) {
                return Err(GalleryError::InvalidFamilyParams("depth must lie in 1..=6".into()));
            }
            // the untruncated book X_depth
            let mut pages = Vec::new();
            for k in 1..=*depth {
                let half = 1.0 / (2 * k) as f64;
                pages.extend((0..1usize << (k - 1)).map(|_| Page { width: 1.0, y_lo: -half, y_hi: half }));
            }
            Ok(Generated::Exact(exact_book(&BookLattice::new(pages, nonunique_pitch(*depth))?)))
        }
        Family::TaxiBox { sides, pitch, faces } => {
            let l = lattice_skeleton(sides, *pitch, faces)?;
            Ok(Generated::Exact(ExactSpace { space: l.space, coords: l.points, pages: None, boundary: Some(l.boundary) }))
        }
        _ => unreachable!("sampled families return above"),
    }
}
